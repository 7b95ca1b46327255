#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smce/keys.hpp"

namespace smce {

struct DfrResult {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;        // decoder gave up
    std::uint64_t miscorrections = 0;  // decoder returned a wrong message
    std::map<int, std::uint64_t> attempts_histogram;  // noise draws per encryption
    double wall_seconds = 0.0;

    double mean_attempts() const;
    /// "trials,failures,miscorrections,wall_seconds" plus the parameters.
    std::string summary_line(const SystemParams& params) const;
};

/// One key generation, then `trials` independent encrypt/decrypt roundtrips
/// with random messages. Reproducible for a fixed (seed, trials), whatever
/// the thread count.
DfrResult dfr_trial_batch(const SystemParams& params, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

struct OrderStats {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> error_counts;  // entry i-1: errors at rank i

    std::vector<double> frequencies() const;
};

/// Sends the all-(-1) word over the Gaussian channel, ranks positions by
/// decreasing |LLR| and counts hard-decision errors per rank.
OrderStats ordered_error_oracle(std::uint32_t n, double sigma, std::uint64_t trials, std::uint64_t seed,
                                unsigned threads = 1);

struct FlipDemo {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;      // all t_f flipped positions were errors
    std::uint64_t residual_ok = 0;    // successes leaving exactly t* - t_f errors

    double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

/// Flip step of the soft-aided attack on random length-n blocks (n <= 500).
FlipDemo soft_attack_demo(std::uint32_t n, double sigma, std::uint32_t t_f, std::uint64_t trials, std::uint64_t seed);

}  // namespace smce
