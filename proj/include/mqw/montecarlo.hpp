#pragma once

#include <cstdint>

#include "mqw/detection.hpp"

// Born-rule trajectory sampling that emulates the hardware experiment: K
// independent runs, up to N mid-circuit measurements each, conditional
// statistics over the detected runs. Per-run random streams come from
// CounterRng(seed, run), so results are identical for any thread count.

namespace mqw {

struct TrajectoryEnsemble {
    DetectionSetup setup;
    int shots = 0;
    std::uint64_t seed = 0;
    std::vector<int> firstHits;  // detection indices of detected runs, run order
    int undetectedCount = 0;
    int anomalyCount = 0;  // aborted runs (numerically impossible collapse)
    std::optional<double> sampleMeanN;
    double sampleMeanStdErr = 0.0;
    double samplePDet = 0.0;
};

TrajectoryEnsemble sampleOnsite(const DetectionSetup& setup, int shots,
                                std::uint64_t seed, int threads = 1);

TrajectoryEnsemble sampleTracking(const DetectionSetup& setup, int shots,
                                  std::uint64_t seed, int threads = 1);

// Histogram estimate F_hat[n] = count(n_i = n) / shots with the same
// conditional observables as the exact engines.
FirstDetectionDistribution empiricalDistribution(const TrajectoryEnsemble& ens);

}  // namespace mqw
