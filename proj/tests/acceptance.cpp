// Acceptance suite: every release-gating property of the simulator, one
// pass/fail line per criterion. Exits nonzero if anything fails. Tolerances
// are fixed here, not tuned at runtime.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mqw/closedform.hpp"
#include "mqw/montecarlo.hpp"
#include "mqw/rng.hpp"
#include "mqw/spectra.hpp"
#include "oracles.hpp"

using namespace mqw;
namespace cf = mqw::closedform;

namespace {

struct CriterionFailure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw CriterionFailure{detail};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

FirstDetectionDistribution exactFor(const ModelParams& p, ProtocolKind protocol, int N,
                                    const ComplexVector& initial) {
    DetectionSetup s;
    s.params = p;
    s.protocol = protocol;
    s.initial = initial;
    s.targetIndex = 0;
    s.N = N;
    return protocol == ProtocolKind::OnSite ? fnOnsite(s) : fnTracking(s);
}

FirstDetectionDistribution exactReturn(const ModelParams& p, ProtocolKind protocol, int N) {
    return exactFor(p, protocol, N, ComplexVector::basis(3, 0));
}

// Smallest chordal distance among unmatched phase-factor pairs; matched pairs
// (distance <= 1e-9) do not count.
double minUnmatchedSplitting(const ModelParams& p) {
    const auto f = phaseFactors(p);
    double m = 10.0;
    for (int k = 0; k < 3; ++k)
        for (int l = k + 1; l < 3; ++l) {
            const double d = std::abs(f[static_cast<size_t>(k)] - f[static_cast<size_t>(l)]);
            if (d > 1e-9) m = std::min(m, d);
        }
    return m;
}

// --------------------------------------------------------------------------
// 1. Quantized mean return value equals the distinct-phase-factor count.
// --------------------------------------------------------------------------
void recurrenceQuantization() {
    std::vector<ModelParams> sample;
    // triple-match points
    for (auto [a, g] : std::vector<std::pair<double, double>>{
             {0.0, 2.0 * kPi / 3.0},
             {0.0, 4.0 * kPi / 3.0},
             {kPi / 6.0, 2.0 * kPi / std::sqrt(3.0)},
             {kPi / 2.0, 2.0 * kPi / std::sqrt(3.0)},
             {kPi / 3.0, 2.0 * kPi / 3.0},
             {-kPi / 6.0, 2.0 * kPi / std::sqrt(3.0)}})
        sample.push_back(ModelParams::fromGammaTau(g, a));
    // pair-matched points: the zero-flux line and the (1,0) curve
    for (double g : {0.4, 0.8, 1.2, 1.6, 2.6, 3.0})
        sample.push_back(ModelParams::fromGammaTau(g, 0.0));
    for (double a : {0.35, 0.6, 0.85, 1.1})
        sample.push_back(
            ModelParams::fromGammaTau(kPi / (std::sin(a + kPi / 6.0) + std::cos(a)), a));
    // generic points, kept only when every unmatched pair splits by >= 0.3
    CounterRng rng(2718, 0);
    while (sample.size() < 40) {
        const double g = 0.3 + 5.9 * rng.uniform();
        const double a = -2.9 + 5.8 * rng.uniform();
        const ModelParams p = ModelParams::fromGammaTau(g, a);
        if (minUnmatchedSplitting(p) < 0.30) continue;
        sample.push_back(p);
    }

    for (const ModelParams& p : sample) {
        require(minUnmatchedSplitting(p) >= 0.05,
                "sample point violates the 0.05 splitting precondition");
        const int predicted = recurrenceTheoremPrediction(p);
        const auto d = exactReturn(p, ProtocolKind::OnSite, 5000);
        require(d.meanN.has_value(), "no detection mass in the return problem");
        require(std::abs(*d.meanN - predicted) <= 0.01,
                "meanN " + fmt(*d.meanN) + " vs predicted " + std::to_string(predicted) +
                    " at gtau=" + fmt(p.gammaTau()) + " alpha=" + fmt(p.alpha));
    }
}

// --------------------------------------------------------------------------
// 2. Closed forms match the operator recursions on the zero-flux line.
// --------------------------------------------------------------------------
void closedFormEquivalence() {
    for (int i = 0; i < 50; ++i) {
        const double g = 0.05 + (6.2 - 0.05) * i / 49.0;
        const auto don = exactReturn(ModelParams::fromGammaTau(g), ProtocolKind::OnSite, 50);
        const auto dtr = exactReturn(ModelParams::fromGammaTau(g), ProtocolKind::Tracking, 50);
        for (int n = 1; n <= 50; ++n) {
            require(std::abs(don.F[static_cast<size_t>(n - 1)] - cf::fnOnsiteClosed(g, n)) <= 1e-11,
                    "on-site sequence at gtau=" + fmt(g) + " n=" + std::to_string(n));
            require(std::abs(dtr.F[static_cast<size_t>(n - 1)] - cf::fnTrackingClosed(g, n)) <= 1e-11,
                    "tracking sequence at gtau=" + fmt(g) + " n=" + std::to_string(n));
        }
        for (int N : {5, 20, 100}) {
            double numOn = 0, denOn = 0, numTr = 0, denTr = 0;
            for (int n = 1; n <= N; ++n) {
                const double fo = cf::fnOnsiteClosed(g, n);
                const double ft = cf::fnTrackingClosed(g, n);
                numOn += n * fo;
                denOn += fo;
                numTr += n * ft;
                denTr += ft;
            }
            require(std::abs(cf::meanOnsiteFinite(g, N) - numOn / denOn) <= 1e-10,
                    "on-site finite mean at gtau=" + fmt(g) + " N=" + std::to_string(N));
            require(std::abs(cf::meanTrackingFinite(g, N) - numTr / denTr) <= 1e-10,
                    "tracking finite mean at gtau=" + fmt(g) + " N=" + std::to_string(N));
        }
    }
}

// --------------------------------------------------------------------------
// 3. Broadening approximations and the 1/sqrt(N) width law.
// --------------------------------------------------------------------------
double halfWidthAt(int N, bool tracking) {
    const double center = 2.0 * kPi / 3.0;
    const double target = (tracking ? 3.0 : 2.0) - 0.5;
    auto mean = [&](double g) {
        return tracking ? cf::meanTrackingFinite(g, N) : cf::meanOnsiteFinite(g, N);
    };
    double lo = center, hi = center + 0.6;
    require(mean(lo) < target && mean(hi) > target, "width bisection lost its bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) - center;
}

void broadening() {
    for (int N : {20, 100}) {
        for (int i = 0; i <= 60; ++i) {
            const double b = 6.0 * i / 60.0;  // N eps^2 across [0, 6]
            const double eps = std::sqrt(b / N);
            for (int sign : {-1, 1}) {
                const double g = (2.0 * kPi + sign * std::sqrt(9.0 / 2.0) * eps) / 3.0;
                const auto don = exactReturn(ModelParams::fromGammaTau(g), ProtocolKind::OnSite, N);
                const auto dtr =
                    exactReturn(ModelParams::fromGammaTau(g), ProtocolKind::Tracking, N);
                require(std::abs(*don.meanN - cf::meanOnsiteBroadened(g, N, 1)) <= 0.05,
                        "on-site broadening at N=" + std::to_string(N) + " b=" + fmt(b));
                require(std::abs(*dtr.meanN - cf::meanTrackingBroadened(g, N, 1)) <= 0.05,
                        "tracking broadening at N=" + std::to_string(N) + " b=" + fmt(b));
            }
        }
    }
    for (bool tracking : {false, true}) {
        const double ratio = halfWidthAt(100, tracking) / halfWidthAt(400, tracking);
        require(std::abs(ratio - 2.0) <= 0.10,
                "width ratio " + fmt(ratio) + " strays from 2 by more than 5%");
    }
}

// --------------------------------------------------------------------------
// 4. Dark-state detection probabilities.
// --------------------------------------------------------------------------
void darkStates() {
    for (int i = 0; i < 10; ++i) {
        const double g = 0.3 + 0.55 * i;
        const auto d = exactFor(ModelParams::fromGammaTau(g), ProtocolKind::OnSite, 200,
                                phasedInitialState(kPi));
        require(d.pDet <= 1e-10, "phi=pi dark state leaked at gtau=" + fmt(g));
    }
    for (int k : {1, 2}) {
        for (int i = 0; i < 10; ++i) {
            const double phi = 2.0 * kPi * i / 10.0;
            const auto d = exactFor(ModelParams::fromGammaTau(2.0 * kPi * k / 3.0),
                                    ProtocolKind::OnSite, 200, phasedInitialState(phi));
            require(d.pDet <= 1e-10,
                    "revival dark state leaked at k=" + std::to_string(k) + " phi=" + fmt(phi));
        }
    }
    for (double phi : {0.0, kPi / 2.0, 2.0 * kPi / 3.0}) {
        const auto d = exactFor(ModelParams::fromGammaTau(1.0), ProtocolKind::OnSite, 2000,
                                phasedInitialState(phi));
        const double expected = 0.5 * (1.0 + std::cos(phi));
        require(std::abs(d.pDet - expected) <= 1e-3,
                "asymptotic pDet at phi=" + fmt(phi) + ": " + fmt(d.pDet) + " vs " +
                    fmt(expected));
    }
    for (double g : {1.0, 2.5, 4.6}) {
        const auto d = exactFor(ModelParams::fromGammaTau(g), ProtocolKind::Tracking, 200,
                                phasedInitialState(kPi));
        require(d.pDet >= 1.0 - 1e-6, "tracking stayed dark at gtau=" + fmt(g));
    }
}

// --------------------------------------------------------------------------
// 5. Classical mean return value of the tracking protocol.
// --------------------------------------------------------------------------
void kacValue() {
    CounterRng rng(3141, 0);
    int kept = 0;
    while (kept < 20) {
        const double g = 0.3 + 5.9 * rng.uniform();
        const double a = -2.9 + 5.8 * rng.uniform();
        const ModelParams p = ModelParams::fromGammaTau(g, a);
        if (minUnmatchedSplitting(p) < 0.30) continue;
        const auto d = exactReturn(p, ProtocolKind::Tracking, 5000);
        require(std::abs(*d.meanN - 3.0) <= 1e-4,
                "tracking meanN " + fmt(*d.meanN) + " at gtau=" + fmt(g) + " alpha=" + fmt(a));
        ++kept;
    }
    const auto d = exactReturn(ModelParams::fromGammaTau(2.0 * kPi / std::sqrt(3.0), kPi / 6.0),
                               ProtocolKind::Tracking, 5000);
    require(std::abs(*d.meanN - 1.0) <= 1e-10, "triple point meanN " + fmt(*d.meanN));
}

// --------------------------------------------------------------------------
// 6. Survival-spectrum landmarks at alpha = 0.5.
// --------------------------------------------------------------------------
void survivalLandmarks() {
    const auto crossings = unitEigenvalueCrossings(0.5, ProtocolKind::OnSite, 0.5, 6.0, 1e-3);
    require(!crossings.empty(), "no unit-eigenvalue crossings found");
    for (double mark : {1.82, 3.50, 3.62, 3.78, 5.44}) {
        double best = 1e9;
        for (double x : crossings) best = std::min(best, std::abs(x - mark));
        require(best <= 0.02, "landmark " + fmt(mark) + " missed by " + fmt(best));
    }
}

// --------------------------------------------------------------------------
// 7. Finite-resolution transition at gtau = 3.63, alpha = 0.5.
// --------------------------------------------------------------------------
void finiteResolutionTransition() {
    const ModelParams p = ModelParams::fromGammaTau(3.63, 0.5);
    for (ProtocolKind protocol : {ProtocolKind::OnSite, ProtocolKind::Tracking}) {
        const auto short20 = exactReturn(p, protocol, 20);
        require(*short20.meanN <= 1.3,
                protocolName(protocol) + " meanN(20) = " + fmt(*short20.meanN));
    }
    const auto on2000 = exactReturn(p, ProtocolKind::OnSite, 2000);
    require(*on2000.meanN >= 1.9, "on-site meanN(2000) = " + fmt(*on2000.meanN));
    const auto tr2000 = exactReturn(p, ProtocolKind::Tracking, 2000);
    require(*tr2000.meanN >= 2.9, "tracking meanN(2000) = " + fmt(*tr2000.meanN));
}

// --------------------------------------------------------------------------
// 8. Slow null-measurement decay and the spectral route.
// --------------------------------------------------------------------------
void nullMeasurementDecay() {
    const ComplexVector start = ComplexVector::basis(3, 0);
    for (ProtocolKind protocol : {ProtocolKind::OnSite, ProtocolKind::Tracking}) {
        const double slow = nullMeasurementRecursion(ModelParams::fromGammaTau(3.63, 0.5),
                                                     protocol, start, 0, 50);
        const double fast = nullMeasurementRecursion(ModelParams::fromGammaTau(2.0, 0.5),
                                                     protocol, start, 0, 50);
        require(slow >= 10.0 * fast, protocolName(protocol) + " S50 ratio too small: " +
                                         fmt(slow) + " vs " + fmt(fast));
    }
    int compared = 0;
    for (double g : {0.7, 1.9, 2.8, 3.63, 4.7, 5.5}) {
        for (double a : {0.5, -0.8, 0.2}) {
            for (int n : {10, 50}) {
                const ModelParams p = ModelParams::fromGammaTau(g, a);
                double spectral = 0.0;
                try {
                    spectral = nullMeasurementSpectral(p, start, 0, n);
                } catch (const DefectiveDecompositionError&) {
                    continue;
                }
                const double rec =
                    nullMeasurementRecursion(p, ProtocolKind::Tracking, start, 0, n);
                require(std::abs(spectral - rec) <= 1e-8,
                        "spectral vs recursion at gtau=" + fmt(g) + " alpha=" + fmt(a));
                ++compared;
            }
        }
    }
    require(compared >= 20, "too few non-defective spectral comparisons");
}

// --------------------------------------------------------------------------
// 9. Monte Carlo fidelity and thread-count determinism.
// --------------------------------------------------------------------------
void monteCarloFidelity() {
    const int shots = 32000;
    const std::uint64_t seed = 20240;
    const std::vector<std::pair<double, double>> points = {
        {1.0, 0.0}, {2.5, 0.4}, {3.1, -0.9}, {4.2, 1.3}, {5.5, 0.7}};
    for (ProtocolKind protocol : {ProtocolKind::OnSite, ProtocolKind::Tracking}) {
        for (auto [g, a] : points) {
            const auto setup =
                DetectionSetup::returnProblem(ModelParams::fromGammaTau(g, a), protocol, 20);
            const auto exact =
                protocol == ProtocolKind::OnSite ? fnOnsite(setup) : fnTracking(setup);
            const auto ens = protocol == ProtocolKind::OnSite
                                 ? sampleOnsite(setup, shots, seed)
                                 : sampleTracking(setup, shots, seed);
            require(ens.sampleMeanN.has_value(), "no detections sampled");
            require(std::abs(*ens.sampleMeanN - *exact.meanN) <= 3.0 * ens.sampleMeanStdErr,
                    protocolName(protocol) + " meanN off at gtau=" + fmt(g) + ": sampled " +
                        fmt(*ens.sampleMeanN) + " exact " + fmt(*exact.meanN));
            const double pc = std::clamp(exact.pDet, 0.0, 1.0);
            const double tolP = std::max(3.0 * std::sqrt(pc * (1.0 - pc) / shots), 1e-10);
            require(std::abs(ens.samplePDet - exact.pDet) <= tolP,
                    protocolName(protocol) + " pDet off at gtau=" + fmt(g));

            const auto ensThreaded = protocol == ProtocolKind::OnSite
                                         ? sampleOnsite(setup, shots, seed, 3)
                                         : sampleTracking(setup, shots, seed, 3);
            require(ens.firstHits == ensThreaded.firstHits &&
                        ens.undetectedCount == ensThreaded.undetectedCount,
                    "ensembles differ across thread counts");
        }
    }
}

// --------------------------------------------------------------------------
// 10. Two-qubit encoding of the ring Hamiltonian.
// --------------------------------------------------------------------------
void qubitEncoding() {
    CounterRng rng(1234, 0);
    bool flagStable = true;
    for (int trial = 0; trial < 10; ++trial) {
        const double gamma = 0.3 + 2.5 * rng.uniform();
        const double alpha = 0.1 + (kPi - 0.2) * rng.uniform();
        const auto rep = buildQubitHamiltonian(ModelParams(gamma, alpha, 1.0));
        require(rep.decoupledResidual <= 1e-12,
                "decoupling residual " + fmt(rep.decoupledResidual));
        require(rep.trackingMappingResidual <= 1e-12,
                "tracking mapping residual " + fmt(rep.trackingMappingResidual));
        flagStable = flagStable && rep.onsiteAlphaSignFlipped;
    }
    require(flagStable, "on-site mapping flux-sign outcome was not stable");
}

// --------------------------------------------------------------------------
// 11. Chiral asymmetry of the detection probability.
// --------------------------------------------------------------------------
void chirality() {
    auto deltaExact = [&](const ModelParams& p, ProtocolKind protocol) {
        return exactFor(p, protocol, 10, ComplexVector::basis(3, 1)).pDet -
               exactFor(p, protocol, 10, ComplexVector::basis(3, 2)).pDet;
    };
    for (int i = 0; i < 20; ++i) {
        const double g = 0.2 + 0.31 * i;
        for (ProtocolKind protocol : {ProtocolKind::OnSite, ProtocolKind::Tracking})
            require(std::abs(deltaExact(ModelParams::fromGammaTau(g), protocol)) <= 1e-12,
                    "nonzero asymmetry on the time-reversal-symmetric line");
    }
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double g = 0.3 + 6.0 * i / 19.0;
            const double a = 0.05 + 1.4 * j / 19.0;
            const double plus = deltaExact(ModelParams::fromGammaTau(g, a), ProtocolKind::OnSite);
            const double minus =
                deltaExact(ModelParams::fromGammaTau(g, -a), ProtocolKind::OnSite);
            require(std::abs(plus + minus) <= 1e-10,
                    "antisymmetry broken at gtau=" + fmt(g) + " alpha=" + fmt(a));
        }
    }
    // the probe point reproduces across engines
    const ModelParams probe = ModelParams::fromGammaTau(2.0 * kPi / std::sqrt(3.0), 0.3);
    const double exact = deltaExact(probe, ProtocolKind::OnSite);
    require(std::abs(exact) >= 1e-3, "probe asymmetry unexpectedly small: " + fmt(exact));
    const int shots = 32000;
    auto pdetSampled = [&](int site) {
        DetectionSetup s;
        s.params = probe;
        s.protocol = ProtocolKind::OnSite;
        s.initial = ComplexVector::basis(3, site);
        s.targetIndex = 0;
        s.N = 10;
        return sampleOnsite(s, shots, 77).samplePDet;
    };
    const double sampled = pdetSampled(1) - pdetSampled(2);
    require(sampled * exact > 0.0, "engines disagree on the asymmetry sign");
    require(std::abs(sampled - exact) <= 4.0 * std::sqrt(2.0 * 0.25 / shots),
            "sampled asymmetry " + fmt(sampled) + " vs exact " + fmt(exact));
}

// --------------------------------------------------------------------------
// 12. Brute-force trajectory oracles.
// --------------------------------------------------------------------------
void bruteForceOracles() {
    CounterRng rng(1618, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams p = ModelParams::fromGammaTau(oracle::uniformIn(rng, 0.1, 6.0),
                                                        oracle::uniformIn(rng, -3.0, 3.0));
        const ComplexVector initial = oracle::randomState(rng, 3);
        const int N = 8;
        const auto u = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
        const auto onsite = exactFor(p, ProtocolKind::OnSite, N, initial);
        const auto refOn = oracle::onsiteRenormalized(u, initial, 0, N);
        for (int n = 0; n < N; ++n)
            require(std::abs(onsite.F[static_cast<size_t>(n)] -
                             refOn[static_cast<size_t>(n)]) <= 1e-12,
                    "on-site oracle deviation at n=" + std::to_string(n + 1));

        const auto g = stochasticMatrix(p);
        const auto tracking = exactFor(p, ProtocolKind::Tracking, N, initial);
        for (int n = 1; n <= N; ++n) {
            const double ref = oracle::trackingPathSum(g, bornVector(initial), 0, n);
            require(std::abs(tracking.F[static_cast<size_t>(n - 1)] - ref) <= 1e-12,
                    "tracking oracle deviation at n=" + std::to_string(n));
        }
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"recurrence quantization", recurrenceQuantization},
        {"closed-form equivalence", closedFormEquivalence},
        {"finite-N broadening", broadening},
        {"dark states", darkStates},
        {"tracking Kac value", kacValue},
        {"survival-spectrum landmarks", survivalLandmarks},
        {"finite-resolution transition", finiteResolutionTransition},
        {"null-measurement slow decay", nullMeasurementDecay},
        {"Monte Carlo fidelity", monteCarloFidelity},
        {"qubit encoding", qubitEncoding},
        {"chiral asymmetry", chirality},
        {"brute-force oracles", bruteForceOracles},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, fn] = criteria[i];
        try {
            fn();
            std::printf("PASS  criterion %2zu: %s\n", i + 1, name.c_str());
        } catch (const CriterionFailure& f) {
            std::printf("FAIL  criterion %2zu: %s -- %s\n", i + 1, name.c_str(),
                        f.detail.c_str());
            ++failures;
        } catch (const std::exception& e) {
            std::printf("FAIL  criterion %2zu: %s -- unexpected error: %s\n", i + 1,
                        name.c_str(), e.what());
            ++failures;
        }
    }
    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
