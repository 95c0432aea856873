#pragma once

// Central numerical tolerances. Library code and tests both read from here so
// a bound is never tightened in one place and loosened in another.

namespace mqw::tol {

// Hermiticity defect, relative to the largest entry magnitude.
inline constexpr double kHermitian = 1e-12;

// Jacobi sweep convergence: off-diagonal Frobenius mass relative to ||A||_F.
inline constexpr double kJacobiOffDiag = 1e-14;

// Eigenpair residual ||A v - lambda v||_2 relative to ||A||_F.
inline constexpr double kEigenResidual = 1e-10;

// Residual above which one inverse-iteration refinement step is attempted.
inline constexpr double kRefineTrigger = 1e-11;

// Left/right biorthogonality |<u|v>| below this flags a defective pair.
inline constexpr double kBiorthogonal = 1e-8;

// Eigenvalue clustering: roots closer than this (relative to scale) are
// treated as one degenerate group when extracting eigenvectors.
inline constexpr double kEigenCluster = 1e-7;

// Unitarity defect ||U^dag U - I||_F.
inline constexpr double kUnitarity = 1e-10;

// Chordal distance |e^{-iE_k tau} - e^{-iE_l tau}| below which two phase
// factors count as matched.
inline constexpr double kPhaseMatch = 1e-9;

// First-detection probabilities more negative than this are an internal
// error; anything in (-kNegativeF, 0) is rounding noise and clamps to zero.
inline constexpr double kNegativeF = 1e-14;

// Total detection mass below this leaves the conditional mean undefined.
inline constexpr double kNoDetection = 1e-14;

// Imaginary residue allowed when the spectral null-measurement sum is
// collapsed to a real number.
inline constexpr double kSpectralImag = 1e-9;

// |1 - maxAbs| window used when annotating unit-modulus eigenvalue crossings.
inline constexpr double kUnitEigen = 1e-6;

// Bisection width for localizing those crossings in gamma*tau.
inline constexpr double kCrossingWidth = 1e-4;

}  // namespace mqw::tol
