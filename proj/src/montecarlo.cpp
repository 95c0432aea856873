#include "mqw/montecarlo.hpp"

#include <cmath>
#include <thread>

#include "mqw/rng.hpp"

namespace mqw {

namespace {

constexpr int kUndetected = 0;
constexpr int kAnomaly = -1;

// One on-site run; returns the detection index in [1, N], kUndetected, or
// kAnomaly for the probability-zero collapse branch.
int runOnsite(const ComplexMatrix& u, const ComplexVector& initial, int target, int N,
              CounterRng rng) {
    ComplexVector psi = initial;
    for (int n = 1; n <= N; ++n) {
        psi = u * psi;
        const double pHit = std::norm(psi[target]);
        if (rng.uniform() < pHit) return n;
        psi[target] = 0.0;
        double rest = 0.0;
        for (int i = 0; i < psi.dim(); ++i) rest += std::norm(psi[i]);
        if (rest < 1e-28) return kAnomaly;  // ||(I-P) psi|| < 1e-14
        const double inv = 1.0 / std::sqrt(rest);
        for (int i = 0; i < psi.dim(); ++i) psi[i] *= inv;
    }
    return kUndetected;
}

int runTracking(const ComplexMatrix& u, const ComplexVector& initial, int target, int N,
                CounterRng rng) {
    const int d = u.dim;
    ComplexVector psi = initial;
    int site = -1;  // -1: still in the initial superposition
    for (int n = 1; n <= N; ++n) {
        if (site >= 0) {
            for (int i = 0; i < d; ++i) psi[i] = u(i, site);
        } else {
            psi = u * psi;
        }
        double total = 0.0;
        for (int i = 0; i < d; ++i) total += std::norm(psi[i]);
        if (std::abs(total - 1.0) > 1e-10)
            throw std::logic_error("tracking sampler: state norm drifted");
        const double r = rng.uniform() * total;
        double cum = 0.0;
        int outcome = d - 1;
        for (int i = 0; i < d; ++i) {
            cum += std::norm(psi[i]);
            if (r < cum) {
                outcome = i;
                break;
            }
        }
        if (outcome == target) return n;
        site = outcome;
    }
    return kUndetected;
}

template <typename RunFn>
TrajectoryEnsemble sampleGeneric(const DetectionSetup& setup, int shots,
                                 std::uint64_t seed, int threads, RunFn run) {
    std::vector<int> hits(static_cast<size_t>(shots));
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int r = 0; r < shots; ++r)
            hits[static_cast<size_t>(r)] = run(CounterRng(seed, static_cast<std::uint64_t>(r)));
    } else {
        std::vector<std::thread> pool;
        const int chunk = (shots + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(shots, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (int r = lo; r < hi; ++r)
                    hits[static_cast<size_t>(r)] =
                        run(CounterRng(seed, static_cast<std::uint64_t>(r)));
            });
        }
        for (std::thread& t : pool) t.join();
    }

    TrajectoryEnsemble ens;
    ens.setup = setup;
    ens.shots = shots;
    ens.seed = seed;
    long long sum = 0;
    for (int h : hits) {
        if (h == kUndetected) {
            ++ens.undetectedCount;
        } else if (h == kAnomaly) {
            ++ens.anomalyCount;
            ++ens.undetectedCount;
        } else {
            ens.firstHits.push_back(h);
            sum += h;
        }
    }
    const int detected = static_cast<int>(ens.firstHits.size());
    ens.samplePDet = static_cast<double>(detected) / shots;
    if (detected > 0) {
        const double mean = static_cast<double>(sum) / detected;
        ens.sampleMeanN = mean;
        if (detected > 1) {
            double var = 0.0;
            for (int h : ens.firstHits) var += (h - mean) * (h - mean);
            var /= detected - 1;
            ens.sampleMeanStdErr = std::sqrt(var / detected);
        }
    }
    return ens;
}

}  // namespace

TrajectoryEnsemble sampleOnsite(const DetectionSetup& setup, int shots, std::uint64_t seed,
                                int threads) {
    setup.validate();
    const ComplexMatrix u =
        unitaryFromHamiltonian(buildHamiltonian(setup.params), setup.params.tau);
    return sampleGeneric(setup, shots, seed, threads, [&](CounterRng rng) {
        return runOnsite(u, setup.initial, setup.targetIndex, setup.N, rng);
    });
}

TrajectoryEnsemble sampleTracking(const DetectionSetup& setup, int shots,
                                  std::uint64_t seed, int threads) {
    setup.validate();
    const ComplexMatrix u =
        unitaryFromHamiltonian(buildHamiltonian(setup.params), setup.params.tau);
    return sampleGeneric(setup, shots, seed, threads, [&](CounterRng rng) {
        return runTracking(u, setup.initial, setup.targetIndex, setup.N, rng);
    });
}

FirstDetectionDistribution empiricalDistribution(const TrajectoryEnsemble& ens) {
    if (ens.shots <= 0) throw std::invalid_argument("empty ensemble");
    std::vector<double> f(static_cast<size_t>(ens.setup.N), 0.0);
    for (int h : ens.firstHits) f[static_cast<size_t>(h - 1)] += 1.0;
    for (double& x : f) x /= ens.shots;
    return assembleDistribution(std::move(f));
}

}  // namespace mqw
