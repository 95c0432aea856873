#pragma once

#include "mqw/detection.hpp"

// Spectral diagnostics: eigenvalues of the on-site survival operator
// S = (I - P) U, the left/right eigensystem of the absorbing transition
// matrix G_tar = G (I - P), the spectral form of the null-measurement
// probability, and helpers for locating unit-modulus eigenvalue crossings.

namespace mqw {

struct DefectiveDecompositionError : std::runtime_error {
    DefectiveDecompositionError()
        : std::runtime_error("eigensystem too defective for the spectral sum") {}
};

struct SurvivalSpectrum {
    ModelParams params;
    ProtocolKind protocol = ProtocolKind::OnSite;
    std::vector<cplx> eigenvalues;
    double maxAbs = 0.0;
    std::vector<double> leftRightOverlaps;  // |<mu_L|mu_R>|
    std::vector<double> targetOverlaps;     // |<psi_tar|mu_R>|
    bool defective = false;
};

// Spectrum of (I - P) U for the on-site protocol.
SurvivalSpectrum survivalSpectrumOnsite(const ModelParams& p, int target = 0);

// Left/right spectrum of G (I - P) for the tracking protocol.
SurvivalSpectrum gtarSpectrum(const ModelParams& p, int target = 0);

// S_N = sum_mu mu^N / (1 - mu) <mu_L|G|p0>/<mu_L|mu_R> <tar|mu_R> for the
// tracking protocol. Throws DefectiveDecompositionError when a contributing
// mode loses biorthogonality or sits on the unit circle; callers fall back to
// the recursion.
double nullMeasurementSpectral(const ModelParams& p, const ComplexVector& initial,
                               int target, int N);

// Null-measurement probability from the direct recursion, either protocol.
double nullMeasurementRecursion(const ModelParams& p, ProtocolKind protocol,
                                const ComplexVector& initial, int target, int N);

// Conditional mean hitting index of the return problem for each requested N.
std::vector<std::pair<int, std::optional<double>>> crossoverCurve(
    const ModelParams& p, ProtocolKind protocol, const std::vector<int>& Ns);

// gamma*tau values in [gtauMin, gtauMax] where the operator's largest
// eigenvalue modulus crosses 1 - kUnitEigen, localized to kCrossingWidth by
// bisection around each peak that reaches the threshold.
std::vector<double> unitEigenvalueCrossings(double alpha, ProtocolKind protocol,
                                            double gtauMin, double gtauMax,
                                            double scanStep = 1e-3, int target = 0);

}  // namespace mqw
