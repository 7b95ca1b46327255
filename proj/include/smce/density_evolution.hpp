#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "smce/keys.hpp"

namespace smce {

/// Regular (d_v, d_c) ensemble whose BI-AWGN sum-product threshold is sought.
struct DeQuery {
    std::uint32_t d_v = 3;
    std::uint32_t d_c = 6;
    double tolerance = 1e-4;  // width of the final sigma bracket

    /// d_c = d_v / (1 - rate); throws InvalidParams unless integral and > d_v.
    static DeQuery for_rate(std::uint32_t d_v, double rate, double tolerance = 1e-4);
    void validate() const;
};

/// Parses "1/2", "2/3", "0.75", ...
double parse_rate(std::string_view text);

/// Discretization and stopping rules of the density tracker.
struct DeOptions {
    double llr_step = 0.01;   // LLR bin width
    double llr_max = 60.0;    // saturation magnitude of the LLR grid
    double g_step = 1e-4;     // bin width of the check-node (-ln tanh) domain
    int max_iterations = 2000;
    double target_error = 1e-7;
    /// Declares a fixed point when the error probability shrinks by less than
    /// this relative amount over stall_window iterations.
    double stall_tolerance = 1e-9;
    int stall_window = 200;
};

struct DeRun {
    bool converged = false;
    int iterations = 0;
    double error_probability = 1.0;  // of the final variable-to-check density
};

/// Density tracker for one ensemble; buffers and FFT plans are reused across
/// channel parameters.
class DensityEvolution {
public:
    DensityEvolution(std::uint32_t d_v, std::uint32_t d_c, const DeOptions& options = {});
    ~DensityEvolution();
    DensityEvolution(DensityEvolution&&) noexcept;
    DensityEvolution& operator=(DensityEvolution&&) noexcept;

    DeRun run(double sigma);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct DeThreshold {
    double sigma_t = 0.0;  // = lower end of the bracket (last converging sigma)
    double lower = 0.0;    // converges
    double upper = 0.0;    // does not converge
    int evaluations = 0;
};

/// Bisection over sigma in [lo, hi]. Throws ConvergenceError if lo does not
/// converge or hi does.
DeThreshold de_threshold(const DeQuery& query, const DeOptions& options = {}, double lo = 0.05, double hi = 2.0);

/// True iff sigma exceeds the threshold of the (attacker_dv, rate) ensemble,
/// decided by a single tracking run at sigma (thresholds are monotone in sigma).
bool check_noise_above_threshold(const SystemParams& params, std::uint32_t attacker_dv,
                                 const DeOptions& options = {});

}  // namespace smce
