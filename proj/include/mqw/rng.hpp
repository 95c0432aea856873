#pragma once

#include <cstdint>

// Counter-based splittable generator. A stream is a SplitMix64 sequence whose
// starting state is a double hash of (seed, stream index), so any run of a
// Monte Carlo ensemble can be reproduced in isolation and streams never share
// state. Pinned by the test vectors in test_rng.cpp.

namespace mqw {

class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed + kGolden) + stream * kGolden)) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix(state_);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace mqw
