// Monte Carlo check of the closed-form transition matrix: start from a fixed
// bit-string of each weight, flip every bit independently with probability
// alpha, and tally the resulting weights.
//
// Randomness is counter-based so results depend only on (seed, start string,
// trial index), never on scheduling: each trial runs its own SplitMix64
// stream (Steele/Lea/Flood generator, 64-bit state, Stafford mix13
// finalizer) seeded by hashing those three words together.
#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wchan/channel_matrix.hpp"
#include "wchan/matrix.hpp"

namespace wchan {

struct SimConfig {
    ChannelParams params;
    std::int64_t trials_per_state = 100000;
    std::uint64_t seed = 42;
};

struct SimEstimate {
    Mat empirical;                          // counts / trials_per_state
    std::vector<std::int64_t> counts;       // row-major (n+1)^2 tallies
    std::int64_t trials_per_state = 0;
    double max_abs_deviation = 0.0;         // vs the closed-form matrix
};

namespace detail {

inline constexpr std::uint64_t splitmix_gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// SplitMix64 step.
inline std::uint64_t splitmix_next(std::uint64_t& state) {
    state += splitmix_gamma;
    return mix64(state);
}

// Per-trial stream key: seed, start string and trial index hashed together.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint32_t start_bits,
                                 std::int64_t trial) {
    std::uint64_t s = mix64(seed ^ splitmix_gamma);
    s = mix64(s ^ (static_cast<std::uint64_t>(start_bits) * 0xD1B54A32D192ED03ull));
    s = mix64(s ^ (static_cast<std::uint64_t>(trial) * 0x8CB92BA72F3D8DD7ull));
    return s;
}

inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix_next(state) >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Weight tallies after `trials` independent-flip rounds applied to the bit
/// string `start_bits` (bit t = channel t, 1 = good).  Deterministic in
/// (seed, start_bits, trial index).
inline std::vector<std::int64_t> simulate_row(const ChannelParams& params,
                                              std::uint32_t start_bits, std::int64_t trials,
                                              std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_row: trials must be >= 1");
    const int n = params.n();
    const double alpha = params.alpha();
    const std::uint32_t lane_mask = (n == 32) ? ~0u : ((1u << n) - 1u);
    if ((start_bits & ~lane_mask) != 0)
        throw std::invalid_argument("simulate_row: start_bits has bits above n");

    std::vector<std::int64_t> counts(params.states(), 0);
    for (std::int64_t t = 0; t < trials; ++t) {
        std::uint64_t rng = detail::stream_seed(seed, start_bits, t);
        std::uint32_t flips = 0;
        for (int bit = 0; bit < n; ++bit)
            if (detail::uniform01(rng) < alpha) flips |= (1u << bit);
        counts[std::popcount(start_bits ^ flips)] += 1;
    }
    return counts;
}

/// Empirical transition matrix: one row per starting weight w, using the
/// representative string with the w lowest bits set.
inline SimEstimate simulate_transitions(const SimConfig& config) {
    if (config.trials_per_state < 1)
        throw std::invalid_argument("simulate_transitions: trials_per_state must be >= 1");

    const ChannelParams& params = config.params;
    const int m = params.states();
    const TransitionMatrix closed = build_matrix(params);

    SimEstimate est;
    est.trials_per_state = config.trials_per_state;
    est.counts.assign(static_cast<std::size_t>(m) * m, 0);
    est.empirical = Mat(m, m);

    for (int w = 0; w < m; ++w) {
        const std::uint32_t start = (w == 0) ? 0u : ((1u << w) - 1u);
        const std::vector<std::int64_t> row =
            simulate_row(params, start, config.trials_per_state, config.seed);
        for (int b = 0; b < m; ++b) {
            est.counts[static_cast<std::size_t>(w) * m + b] = row[b];
            est.empirical(w, b) =
                static_cast<double>(row[b]) / static_cast<double>(config.trials_per_state);
        }
    }
    est.max_abs_deviation = max_abs_diff(est.empirical, closed.entries());
    return est;
}

} // namespace wchan
