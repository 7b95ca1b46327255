#include "smce/security.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smce/density_evolution.hpp"
#include "smce/error.hpp"

namespace smce {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

// Order statistics of |y| for y ~ N(-1, sigma^2), the all-(-1) channel.
class OrderedErrors {
public:
    OrderedErrors(std::uint32_t n, double sigma) : n_(n), sigma_(sigma), top_(1.0 + 10.0 * sigma) {
        if (n == 0) throw InvalidParams("block length must be positive");
        if (!(sigma > 0.0)) throw InvalidParams("sigma must be positive");
        log_norm_ = -std::log(sigma * std::sqrt(2.0 * M_PI));
    }

    double rank(std::uint32_t i) const {
        if (i < 1 || i > n_) throw InvalidParams("rank out of range");
        const double a = i - 1.0, b = static_cast<double>(n_ - i);
        const double log_c = std::log(static_cast<double>(n_)) + std::lgamma(n_ + 0.0) - std::lgamma(a + 1.0) -
                             std::lgamma(b + 1.0);
        auto log_f = [&](double x) {
            double v = log_c + log_gauss(x);
            if (a > 0.0) v += a * std::log(tail(x));
            if (b > 0.0) v += b * std::log(body(x));
            return v;
        };
        // The binomial factor peaks where P(x) = (i-1)/(n-1).
        return integrate(log_f, n_ > 1 ? a / (n_ - 1.0) : 0.5);
    }

    // Probability that the t_f least reliable positions are all in error:
    // C(n, t_f) * int t_f e(x)^(t_f-1) g(x) P(x)^(n-t_f) dx, where e(x) is the
    // probability of an error of magnitude at most x.
    double joint_tail(std::uint32_t t_f) const {
        if (t_f > n_) throw InvalidParams("t_f exceeds the block length");
        if (t_f == 0) return 1.0;
        const double m = t_f, rest = static_cast<double>(n_ - t_f);
        const double log_c = std::lgamma(n_ + 1.0) - std::lgamma(m + 1.0) - std::lgamma(rest + 1.0) + std::log(m);
        auto log_f = [&](double x) {
            double v = log_c + log_gauss(x);
            if (m > 1.0) v += (m - 1.0) * std::log(small_error(x));
            if (rest > 0.0) v += rest * std::log(tail(x));
            return v;
        };
        return integrate(log_f, 1.0 - m / n_);
    }

private:
    // Integrates exp(log_f) over [0, top], with breakpoints around the x where
    // the tail probability P(x) equals `target`.
    template <class LogF>
    double integrate(const LogF& log_f, double target) const {
        const double xs = solve_tail(target);
        const double dens = std::max(abs_density(xs), 1e-300);
        const double width = std::sqrt(std::max(target * (1.0 - target), 1.0 / n_) / n_) / dens;

        std::vector<double> cuts{0.0, top_};
        for (double m : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0}) {
            const double c = xs + m * width;
            if (c > 0.0 && c < top_) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        double peak = kNegInf;
        for (double c : cuts) peak = std::max(peak, log_f(c));
        if (peak == kNegInf) return 0.0;

        auto f = [&](double x) { return std::exp(log_f(x) - peak); };
        double sum = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            double err = 0.0;
            sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[s], cuts[s + 1], 10, 1e-10,
                                                                                  &err);
        }
        return std::clamp(sum * std::exp(peak), 0.0, 1.0);
    }

    double log_gauss(double x) const {
        const double z = (x + 1.0) / sigma_;
        return log_norm_ - 0.5 * z * z;
    }
    // P(|y| > x)
    double tail(double x) const {
        return 0.5 * (std::erfc((x - 1.0) / (sigma_ * kSqrt2)) + std::erfc((x + 1.0) / (sigma_ * kSqrt2)));
    }
    // P(|y| <= x), without cancellation near zero
    double body(double x) const {
        return 0.5 * (std::erfc((1.0 - x) / (sigma_ * kSqrt2)) - std::erfc((1.0 + x) / (sigma_ * kSqrt2)));
    }
    // P(0 < y <= x)
    double small_error(double x) const {
        return 0.5 * (std::erfc(1.0 / (sigma_ * kSqrt2)) - std::erfc((x + 1.0) / (sigma_ * kSqrt2)));
    }
    double abs_density(double x) const {
        const double z1 = (x - 1.0) / sigma_, z2 = (x + 1.0) / sigma_;
        return std::exp(log_norm_) * (std::exp(-0.5 * z1 * z1) + std::exp(-0.5 * z2 * z2));
    }
    double solve_tail(double target) const {
        double lo = 0.0, hi = top_;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (tail(mid) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::uint32_t n_;
    double sigma_;
    double top_;
    double log_norm_;
};

// log2 P_f for every t_f in [0, max_tf].
std::vector<double> log2_flip_curve(std::uint32_t max_tf, std::uint32_t n, double sigma) {
    if (max_tf > n) throw InvalidParams("t_f exceeds the block length");
    std::vector<double> out(max_tf + 1, 0.0);
    if (max_tf == 0) return out;
    const OrderedErrors oe(n, sigma);
    for (std::uint32_t i = 0; i < max_tf; ++i) {
        const double p = oe.rank(n - i);
        out[i + 1] = out[i] + (p > 0.0 ? std::log2(p) : kNegInf);
    }
    return out;
}

}  // namespace

double p_err_ordered(std::uint32_t i, std::uint32_t n, double sigma) { return OrderedErrors(n, sigma).rank(i); }

std::vector<double> p_err_ordered_all(std::uint32_t n, double sigma) {
    const OrderedErrors oe(n, sigma);
    std::vector<double> out(n);
    for (std::uint32_t i = 1; i <= n; ++i) out[i - 1] = oe.rank(i);
    return out;
}

double p_flip_success(std::uint32_t t_f, std::uint32_t n, double sigma) {
    if (t_f == 0) return 1.0;
    return std::exp2(log2_flip_curve(t_f, n, sigma).back());
}

double p_flip_success_joint(std::uint32_t t_f, std::uint32_t n, double sigma) {
    if (t_f == 0) return 1.0;
    return OrderedErrors(n, sigma).joint_tail(t_f);
}

double wf_da_soft(const SystemParams& params, std::uint32_t t_star, std::uint32_t t_f, IsdModel model) {
    if (t_f > t_star) throw InvalidParams("t_f exceeds t*");
    const double lpf = t_f == 0 ? 0.0 : log2_flip_curve(t_f, params.n(), params.sigma).back();
    return wf_da_hard(params.n(), params.k(), t_star - t_f, params.r, model) - lpf;
}

TfOptimum optimize_tf(const SystemParams& params, std::uint32_t t_star, IsdModel model) {
    const auto lpf = t_star == 0 ? std::vector<double>{0.0} : log2_flip_curve(t_star, params.n(), params.sigma);
    TfOptimum best;
    best.wf = std::numeric_limits<double>::infinity();
    for (std::uint32_t tf = 0; tf <= t_star; ++tf) {
        TfPoint pt{tf, lpf[tf], wf_da_hard(params.n(), params.k(), t_star - tf, params.r, model) - lpf[tf]};
        if (pt.wf < best.wf) {
            best.wf = pt.wf;
            best.t_f = tf;
        }
        best.curve.push_back(pt);
    }
    return best;
}

double wf_kra(const SystemParams& params, IsdModel model) {
    return wf_isd(params.n(), params.r, std::uint32_t{params.n0} * params.d_v, model) -
           std::log2(static_cast<double>(params.r));
}

double sigma_for_expected_errors(double n, double t_hat) {
    if (!(n > 0.0) || !(t_hat > 0.0) || !(t_hat < n / 2.0)) throw InvalidParams("need 0 < t_hat < n/2");
    return 1.0 / (kSqrt2 * boost::math::erfc_inv(2.0 * t_hat / n));
}

double expected_errors(double n, double sigma) {
    if (sigma <= 0.0) return 0.0;
    return 0.5 * n * std::erfc(1.0 / (sigma * kSqrt2));
}

std::uint32_t default_attacker_dv(const SystemParams& params) { return (params.r + 1) / 2; }

SecurityReport security_report(const SystemParams& params, IsdModel model, std::optional<std::uint32_t> attacker_dv) {
    params.validate(true);
    SecurityReport rep;
    rep.params = params;
    rep.model = model;
    rep.t_star = params.t_lower;
    rep.wf_da_hard = wf_da_hard(params.n(), params.k(), rep.t_star, params.r, model);
    auto opt = optimize_tf(params, rep.t_star, model);
    rep.wf_da_soft = opt.wf;
    rep.t_f_opt = opt.t_f;
    rep.tf_curve = std::move(opt.curve);
    rep.wf_kra = wf_kra(params, model);
    rep.attacker_dv = attacker_dv.value_or(default_attacker_dv(params));
    rep.de_verdict = check_noise_above_threshold(params, rep.attacker_dv);
    rep.claimed_security_bits = std::min({rep.wf_da_hard, rep.wf_da_soft, rep.wf_kra});
    return rep;
}

std::string format_report(const SecurityReport& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    const auto& p = r.params;
    os << "parameters      n0=" << p.n0 << " r=" << p.r << " d_v=" << p.d_v << " n=" << p.n() << " k=" << p.k()
       << '\n';
    os.precision(5);
    os << "noise           sigma=" << p.sigma << " t_lower=" << p.t_lower << " expected=" << expected_errors(p.n(), p.sigma)
       << '\n';
    os.precision(2);
    os << "isd model       " << to_string(r.model) << '\n';
    os << "WF_DA hard      " << r.wf_da_hard << " bits (t=" << r.t_star << ")\n";
    os << "WF_DA soft      " << r.wf_da_soft << " bits (t_f=" << r.t_f_opt << ")\n";
    os << "WF_KRA          " << r.wf_kra << " bits (dual weight " << p.n0 * p.d_v << ")\n";
    os << "DE verdict      " << (r.de_verdict ? "above threshold" : "NOT above threshold") << " (attacker d_v="
       << r.attacker_dv << ")\n";
    os << "security        " << r.claimed_security_bits << " bits" << (r.insecure() ? "  [INSECURE]" : "") << '\n';
    return os.str();
}

std::string format_report_kv(const SecurityReport& r) {
    std::ostringstream os;
    os.precision(10);
    const auto& p = r.params;
    os << "n0=" << p.n0 << "\nr=" << p.r << "\nd_v=" << p.d_v << "\nn=" << p.n() << "\nk=" << p.k()
       << "\nsigma=" << p.sigma << "\nt_lower=" << p.t_lower << "\nq=" << int{p.q} << "\nmodel=" << to_string(r.model)
       << "\nt_star=" << r.t_star << "\nwf_da_hard=" << r.wf_da_hard << "\nwf_da_soft=" << r.wf_da_soft
       << "\nt_f_opt=" << r.t_f_opt << "\nwf_kra=" << r.wf_kra << "\nattacker_dv=" << r.attacker_dv
       << "\nde_verdict=" << (r.de_verdict ? "true" : "false") << "\nclaimed_security_bits=" << r.claimed_security_bits
       << "\ninsecure=" << (r.insecure() ? "true" : "false") << '\n';
    return os.str();
}

std::string format_tf_curve(const SecurityReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << "t_f,log2_pf,wf\n";
    for (const auto& pt : r.tf_curve) os << pt.t_f << ',' << pt.log2_pf << ',' << pt.wf << '\n';
    return os.str();
}

}  // namespace smce
