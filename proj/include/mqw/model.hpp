#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mqw/eigen.hpp"

// The three-site chiral ring: Hamiltonian construction, its closed-form
// spectrum, the phase-factor matching structure of the one-period unitary,
// and the two-qubit encoding used on hardware.

namespace mqw {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct DomainError : std::runtime_error {
    explicit DomainError(const char* what) : std::runtime_error(what) {}
};

struct ModelParams {
    double gamma = 1.0;  // hopping amplitude
    double alpha = 0.0;  // flux phase, reduced to [-pi, pi]
    double tau = 1.0;    // sampling interval, hbar = 1
    int dim = 3;

    ModelParams() = default;
    ModelParams(double gamma_, double alpha_, double tau_);

    double gammaTau() const { return gamma * tau; }
    static ModelParams fromGammaTau(double gtau, double alpha_ = 0.0);
};

// H = -gamma e^{i alpha} (|0><1| + |1><2| + |2><0|) + h.c.
ComplexMatrix buildHamiltonian(const ModelParams& p);

// E_k = -2 gamma cos(2 pi k / 3 + alpha) with circulant eigenvectors
// v_k[x] = w^{k x} / sqrt(3), phased so the site-2 component is real positive.
// Eigenvalues come in k order, not sorted.
EigenSystem closedFormSpectrum(const ModelParams& p);

// e^{-i E_k tau} for k = 0, 1, 2.
std::array<cplx, 3> phaseFactors(const ModelParams& p);

struct PhaseFactorClassification {
    int distinctCount = 3;
    std::vector<std::pair<int, int>> matchedPairs;  // (k, l) with k < l
    std::array<cplx, 3> factors{};

    bool pairMatched(int k, int l) const;
};

// Groups the three phase factors by chordal distance |f_k - f_l| <= tol and
// closes the match relation transitively.
PhaseFactorClassification classifyPhaseFactors(const ModelParams& p,
                                               double tol = tol::kPhaseMatch);

// One closed-form branch of the phase-factor matching condition: alpha is
// mapped to the gamma*tau at which the pair's factors coincide.
struct MatchingCurve {
    std::pair<int, int> pair;
    int branchIndex = 0;
    // Distinguishes the two printed families for the (1,2) pair; 0 elsewhere.
    int family = 0;

    double gammaTau(double alpha) const;  // throws DomainError off the domain
};

// All printed branches for the given pair with branch indices in
// [branchMin, branchMax]. Pair must be one of (1,2), (1,0), (2,0).
std::vector<MatchingCurve> matchingCurves(std::pair<int, int> pair, int branchMin,
                                          int branchMax);

struct QubitEncodingReport {
    ComplexMatrix qubitHamiltonian;     // 4x4, basis |q1 q2> = |00>,|01>,|10>,|11>
    double decoupledResidual = 0.0;     // max |<11|H_q|x>|, x != |11>
    double trackingMappingResidual = 0.0;
    double onsiteMappingResidual = 0.0;  // against H(+alpha)
    bool onsiteAlphaSignFlipped = false; // true when H(-alpha) matches better
};

// Assembles the printed two-qubit Pauli sum and compares its three-state
// block against the ring Hamiltonian under both site mappings.
QubitEncodingReport buildQubitHamiltonian(const ModelParams& p);

}  // namespace mqw
