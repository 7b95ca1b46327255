#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smce/keys.hpp"

namespace smce {

enum class IsdModel { Bjmm, Stern, Prange };

std::string_view to_string(IsdModel m);
/// Accepts "bjmm", "stern", "prange" (case-insensitive); throws InvalidParams.
IsdModel parse_isd_model(std::string_view name);

/// log2 of the expected bit operations to find a weight-w word in an [n, k]
/// code. Internal parameters are grid-searched. BJMM never exceeds Stern,
/// which never exceeds Prange. w = 0 costs one linear-algebra step.
double wf_isd(std::uint32_t n, std::uint32_t k, std::uint32_t w, IsdModel model = IsdModel::Bjmm);

/// Classical decoding attack with the sqrt(r) quasi-cyclic gain.
double wf_da_hard(std::uint32_t n, std::uint32_t k, std::uint32_t t, std::uint32_t r,
                  IsdModel model = IsdModel::Bjmm);

/// Probability that the i-th position (1 = most reliable) of a length-n
/// BI-AWGN block sorted by decreasing |LLR| is in error.
double p_err_ordered(std::uint32_t i, std::uint32_t n, double sigma);
/// All n ranks at once; entry i-1 holds rank i.
std::vector<double> p_err_ordered_all(std::uint32_t n, double sigma);

/// Flip success as the product of the per-rank error probabilities of the
/// t_f least reliable positions. This is the figure used in the work factors.
double p_flip_success(std::uint32_t t_f, std::uint32_t n, double sigma);
/// Exact probability that the t_f least reliable positions are all in error.
/// The per-rank events are positively correlated, so this is at least the
/// product above.
double p_flip_success_joint(std::uint32_t t_f, std::uint32_t n, double sigma);

/// Decoding attack after flipping the t_f least reliable positions.
double wf_da_soft(const SystemParams& params, std::uint32_t t_star, std::uint32_t t_f,
                  IsdModel model = IsdModel::Bjmm);

struct TfPoint {
    std::uint32_t t_f = 0;
    double log2_pf = 0.0;
    double wf = 0.0;
};

struct TfOptimum {
    std::uint32_t t_f = 0;
    double wf = 0.0;
    std::vector<TfPoint> curve;  // every t_f in [0, t_star]
};

/// Exhaustive scan over t_f in [0, t_star]; ties go to the smaller t_f.
TfOptimum optimize_tf(const SystemParams& params, std::uint32_t t_star, IsdModel model = IsdModel::Bjmm);

/// Key recovery: low-weight rows of the secret parity-check matrix sought in
/// the dual of the public code, with the factor r gain.
double wf_kra(const SystemParams& params, IsdModel model = IsdModel::Bjmm);

/// sigma = 1 / (sqrt(2) erfc^-1(2 t_hat / n)); requires 0 < t_hat < n/2.
double sigma_for_expected_errors(double n, double t_hat);
/// n/2 erfc(1 / (sigma sqrt 2)).
double expected_errors(double n, double sigma);

struct SecurityReport {
    SystemParams params;
    IsdModel model = IsdModel::Bjmm;
    std::uint32_t t_star = 0;  // worst case, = t_lower
    double wf_da_hard = 0.0;
    double wf_da_soft = 0.0;
    std::uint32_t t_f_opt = 0;
    double wf_kra = 0.0;
    std::uint32_t attacker_dv = 0;
    bool de_verdict = false;  // sigma above the attacker ensemble's DE threshold
    double claimed_security_bits = 0.0;
    std::vector<TfPoint> tf_curve;

    /// True when there is no noise to hide behind or iterative decoding of
    /// the public code is not ruled out.
    bool insecure() const { return t_star == 0 || !de_verdict; }
};

/// Typical weight of a dense row of the systematic public parity-check matrix.
std::uint32_t default_attacker_dv(const SystemParams& params);

/// attacker_dv defaults to default_attacker_dv(params).
SecurityReport security_report(const SystemParams& params, IsdModel model = IsdModel::Bjmm,
                               std::optional<std::uint32_t> attacker_dv = std::nullopt);

/// Human-readable multi-line report.
std::string format_report(const SecurityReport& report);
/// key=value lines, one per field.
std::string format_report_kv(const SecurityReport& report);
/// "t_f,log2_pf,wf" header plus one line per scanned t_f.
std::string format_tf_curve(const SecurityReport& report);

}  // namespace smce
