#pragma once

#include <stdexcept>
#include <vector>

#include "mqw/complexmat.hpp"

// Eigensolvers for the small dense matrices used throughout: a cyclic Jacobi
// scheme for Hermitian input, a Cardano-based closed form for general 3x3
// matrices, shifted QR on the Hessenberg form above that, and the spectral
// matrix exponential built on the Hermitian path.

namespace mqw {

struct NotHermitianError : std::runtime_error {
    NotHermitianError() : std::runtime_error("matrix is not Hermitian within tolerance") {}
};

struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const char* what) : std::runtime_error(what) {}
};

struct EigenSystem {
    std::vector<cplx> eigenvalues;
    std::vector<ComplexVector> rightVectors;
    std::vector<ComplexVector> leftVectors;  // empty unless requested
    std::vector<double> residuals;           // ||A v - lambda v||_2 per pair
    // Set when a repeated eigenvalue came with a deficient eigenspace or a
    // left/right pair lost biorthogonality; residuals stay honest either way.
    bool defective = false;

    double maxAbsEigenvalue() const;
};

// Hermitian eigendecomposition, eigenvalues sorted ascending, orthonormal
// eigenvectors. Throws NotHermitianError / NoConvergenceError.
EigenSystem hermitianEigendecompose(const ComplexMatrix& a);

// General eigendecomposition: closed-form characteristic cubic for dim 3,
// Hessenberg QR otherwise. Eigenvalues in no particular order.
EigenSystem generalEigendecompose(const ComplexMatrix& a, bool wantLeft = false);

// U = exp(-i H t) through the spectral decomposition of Hermitian H.
ComplexMatrix unitaryFromHamiltonian(const ComplexMatrix& h, double t);

}  // namespace mqw
