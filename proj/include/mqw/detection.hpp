#pragma once

#include <optional>
#include <string>

#include "mqw/model.hpp"

// Exact first-detection distributions for both measurement protocols, the
// classical transition matrix behind the tracking protocol, and the derived
// observables (conditional mean hitting index, detection probability, dark
// states, chiral asymmetry maps).

namespace mqw {

enum class ProtocolKind { OnSite, Tracking };

std::string protocolName(ProtocolKind k);

struct PairNotMatchedError : std::runtime_error {
    PairNotMatchedError()
        : std::runtime_error("phase factors of the requested pair are not matched") {}
};

struct DetectionSetup {
    ModelParams params;
    ProtocolKind protocol = ProtocolKind::OnSite;
    ComplexVector initial;  // normalized amplitudes
    int targetIndex = 0;
    int N = 1;  // number of measurement attempts

    static DetectionSetup returnProblem(const ModelParams& p, ProtocolKind protocol,
                                        int N);

    // Throws std::invalid_argument on a dimension mismatch, an unnormalized
    // initial state, a target outside the ring, or N < 1.
    void validate() const;
};

struct FirstDetectionDistribution {
    std::vector<double> F;         // F[n-1] = probability of first detection at n
    std::vector<double> survival;  // S_n = 1 - sum_{m<=n} F_m
    double pDet = 0.0;
    std::optional<double> meanN;   // empty when no detection mass exists

    int N() const { return static_cast<int>(F.size()); }
};

// Fills survival, pDet and meanN from a raw F sequence; clamps rounding
// negatives and rejects anything more negative than the internal bound.
FirstDetectionDistribution assembleDistribution(std::vector<double> f);

// G[x][x'] = |<x|U|x'>|^2; real nonnegative entries, columns sum to one.
ComplexMatrix stochasticMatrix(const ModelParams& p);

// On-site protocol: F_n = |<tar| (U(I-P))^{n-1} U |psi_in>|^2.
FirstDetectionDistribution fnOnsite(const DetectionSetup& setup);
FirstDetectionDistribution fnOnsite(const ComplexMatrix& u, const ComplexVector& initial,
                                    int target, int N);

// Tracking protocol: F_n = <tar| (G(I-P))^{n-1} G |p0> with p0 the Born
// probability vector of the initial state.
FirstDetectionDistribution fnTracking(const DetectionSetup& setup);
FirstDetectionDistribution fnTracking(const ComplexMatrix& g, std::vector<double> p0,
                                      int target, int N);

std::vector<double> bornVector(const ComplexVector& psi);

// Number of distinct phase factors: the infinite-N mean return value for the
// on-site protocol.
int recurrenceTheoremPrediction(const ModelParams& p, double tol = tol::kPhaseMatch);

// Dark combination of the pair's energy states; throws PairNotMatchedError
// when the pair's phase factors do not coincide at these parameters.
ComplexVector darkStateVector(const ModelParams& p, std::pair<int, int> pair,
                              double tol = tol::kPhaseMatch);

// (|1> + e^{i phi} |2>) / sqrt(2)
ComplexVector phasedInitialState(double phi);

struct AxisSpec {
    std::string name;  // one of gtau, alpha, phi, N
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    std::vector<double> values() const;  // inclusive endpoints, uniform
};

struct Grid {
    AxisSpec axis1, axis2;
    std::vector<double> values;  // row-major, axis1 outer

    double at(int i, int j) const { return values[static_cast<size_t>(i) * axis2.steps + j]; }
};

// P_det(N) over (gtau, phi) with the phased initial state, or (gtau, alpha)
// with initial |1>; axis names select the mode.
Grid detectionProbabilityMap(ProtocolKind protocol, int N, const AxisSpec& axis1,
                             const AxisSpec& axis2, double alphaFixed = 0.0,
                             double phiFixed = 0.0);

// Delta P_det = P_det(in = |1>) - P_det(in = |2>) toward target |0> over a
// (gtau, alpha) grid.
Grid chiralAsymmetryMap(ProtocolKind protocol, int N, const AxisSpec& gtauAxis,
                        const AxisSpec& alphaAxis);

}  // namespace mqw
