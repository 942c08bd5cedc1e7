#ifndef OTTO_RNG_HPP
#define OTTO_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace otto {

// Deterministic random stream. All floating-point draws are derived from
// raw mt19937_64 words with fixed bit manipulations, so a given seed yields
// the same sequence on every standards-conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log argument.
    double uniform_open() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (pairwise, second value cached).
    double gauss();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stable 64-bit mix (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Per-trial substream seed: a stable hash of (master_seed, experiment
// name, trial_id). Trials can run in any order or in parallel without
// changing a single draw.
std::uint64_t substream_seed(std::uint64_t master_seed, std::string_view experiment,
                             std::uint64_t trial_id);

} // namespace otto

#endif
