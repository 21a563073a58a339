#pragma once

// Counter-based splittable random streams. Each Monte Carlo trial owns an
// independent stream keyed by (seed, trial index), so results are identical
// for any partitioning of trials across worker threads.

#include <cmath>
#include <cstdint>

namespace cran::rng {

// splitmix64 state update; passes standard avalanche tests and is the usual
// choice for seeding/keying.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream for one trial: the key (seed, index) is hashed through
// two splitmix64 rounds to decorrelate adjacent trial indices.
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t trial_index) {
        std::uint64_t s = seed;
        const std::uint64_t a = splitmix64_next(s);
        s = a ^ (trial_index * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
        state_ = splitmix64_next(s);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform on (0,1): 53-bit mantissa, never exactly 0 or 1.
    double next_uniform() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 1.1102230246251565e-16;  // 2^-53
    }

    // Exponential with the given mean (inverse-CDF transform).
    double next_exponential(double mean) { return -mean * std::log(next_uniform()); }

private:
    std::uint64_t state_ = 0;
};

}  // namespace cran::rng
