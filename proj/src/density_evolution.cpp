#include "smce/density_evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "smce/error.hpp"

namespace smce {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

// phi(x) = -ln tanh(x/2), an involution on (0, inf).
double phi(double x) {
    if (x <= 0.0) return INFINITY;
    const double e = std::exp(-x);
    return std::log1p(e) - std::log1p(-e);
}

using Complex = std::complex<double>;

// Check outputs are resolved down to this fraction of an LLR bin. Below one
// bin they are split between bins 0 and 1, which keeps their mean; at high
// check degrees most of the information sits in such tiny messages.
constexpr double kSubBin = 1.0 / 64.0;

Complex ipow(Complex z, std::uint32_t e) {
    Complex acc(1.0, 0.0);
    while (e) {
        if (e & 1u) acc *= z;
        e >>= 1;
        if (e) z *= z;
    }
    return acc;
}

// Real-input FFT of a fixed length with cached plans.
class RealFft {
public:
    explicit RealFft(std::size_t len) : len_(len) {
        real_ = fftw_alloc_real(len_);
        spec_ = fftw_alloc_complex(len_ / 2 + 1);
        std::lock_guard lock(plan_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(len_), real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(len_), spec_, real_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return len_; }
    std::size_t bins() const { return len_ / 2 + 1; }

    // Zero-padded forward transform of `in`.
    void forward(const double* in, std::size_t n, std::vector<Complex>& out) {
        std::fill(real_, real_ + len_, 0.0);
        std::copy(in, in + n, real_);
        fftw_execute(fwd_);
        out.resize(bins());
        for (std::size_t i = 0; i < bins(); ++i) out[i] = {spec_[i][0], spec_[i][1]};
    }
    // Inverse transform, scaled by 1/len; result in data()[0..len).
    const double* inverse(const std::vector<Complex>& in) {
        for (std::size_t i = 0; i < bins(); ++i) {
            spec_[i][0] = in[i].real();
            spec_[i][1] = in[i].imag();
        }
        fftw_execute(inv_);
        const double s = 1.0 / static_cast<double>(len_);
        for (std::size_t i = 0; i < len_; ++i) real_[i] *= s;
        return real_;
    }

private:
    std::size_t len_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, inv_;
};

}  // namespace

DeQuery DeQuery::for_rate(std::uint32_t d_v, double rate, double tolerance) {
    if (!(rate > 0.0 && rate < 1.0)) throw InvalidParams("rate must lie in (0, 1)");
    const double dc = d_v / (1.0 - rate);
    const double rounded = std::round(dc);
    if (std::fabs(dc - rounded) > 1e-9 * dc) {
        throw InvalidParams("d_v / (1 - rate) is not an integer for d_v = " + std::to_string(d_v));
    }
    DeQuery q{d_v, static_cast<std::uint32_t>(rounded), tolerance};
    q.validate();
    return q;
}

void DeQuery::validate() const {
    if (d_v < 2) throw InvalidParams("d_v must be at least 2");
    if (d_c <= d_v) throw InvalidParams("d_c must exceed d_v");
    if (!(tolerance > 0.0)) throw InvalidParams("tolerance must be positive");
}

double parse_rate(std::string_view text) {
    auto parse = [](std::string_view s) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw InvalidParams("cannot parse rate '" + std::string(s) + "'");
        return v;
    };
    const auto slash = text.find('/');
    const double r = slash == std::string_view::npos ? parse(text) : parse(text.substr(0, slash)) / parse(text.substr(slash + 1));
    if (!(r > 0.0 && r < 1.0)) throw InvalidParams("rate must lie in (0, 1)");
    return r;
}

struct DensityEvolution::Impl {
    std::uint32_t dv, dc;
    DeOptions opt;
    std::size_t half;   // LLR bins are -half..half
    std::size_t nllr;   // 2*half + 1
    std::size_t ng;     // G bins 0..ng-1 are exact, bin ng collects g >= ng*g_step
    double damp_rate;   // per-bin exponential damping for the check-node power

    std::vector<std::size_t> l2g_lo;  // LLR magnitude bin -> G bin (linear split)
    std::vector<double> l2g_w;
    std::vector<std::size_t> g2l_lo;  // G bin -> LLR magnitude bin (linear split)
    std::vector<double> g2l_w;
    std::vector<double> damp, undamp;

    RealFft check_fft;
    RealFft var_fft;

    std::vector<double> channel, var_msg, chk_msg, fa, fb, tmp;
    std::vector<Complex> spec_a, spec_b, spec_base, spec_acc;

    Impl(std::uint32_t d_v, std::uint32_t d_c, const DeOptions& o)
        : dv(d_v),
          dc(d_c),
          opt(o),
          half(static_cast<std::size_t>(std::llround(o.llr_max / o.llr_step))),
          nllr(2 * half + 1),
          ng(static_cast<std::size_t>(std::ceil(phi(kSubBin * o.llr_step) / o.g_step))),
          damp_rate(std::log(1e6) / static_cast<double>(ng)),
          check_fft(next_pow2(2 * (ng + 1))),
          var_fft(next_pow2(2 * nllr - 1)) {
        l2g_lo.assign(half + 1, 0);
        l2g_w.assign(half + 1, 0.0);
        for (std::size_t i = 1; i <= half; ++i) {
            const double u = std::min(phi(i * opt.llr_step) / opt.g_step, static_cast<double>(ng));
            l2g_lo[i] = std::min(static_cast<std::size_t>(u), ng - 1);
            l2g_w[i] = u - static_cast<double>(l2g_lo[i]);
        }
        g2l_lo.assign(ng, 0);
        g2l_w.assign(ng, 0.0);
        for (std::size_t j = 0; j < ng; ++j) {
            const double u = std::min(phi(j * opt.g_step) / opt.llr_step, static_cast<double>(half));
            g2l_lo[j] = std::min(static_cast<std::size_t>(u), half - 1);
            g2l_w[j] = u - static_cast<double>(g2l_lo[j]);
        }
        damp.resize(ng + 1);
        undamp.resize(ng + 1);
        for (std::size_t j = 0; j <= ng; ++j) {
            damp[j] = std::exp(-damp_rate * j);
            undamp[j] = 1.0 / damp[j];
        }
        fa.assign(ng + 1, 0.0);
        fb.assign(ng + 1, 0.0);
        chk_msg.assign(nllr, 0.0);
    }

    double llr_value(std::size_t idx) const { return (static_cast<double>(idx) - static_cast<double>(half)) * opt.llr_step; }

    void make_channel(double sigma) {
        // LLR of a correctly received +1 symbol: N(2/sigma^2, 4/sigma^2).
        const double mean = 2.0 / (sigma * sigma);
        const double sd = 2.0 / sigma;
        auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); };
        channel.assign(nllr, 0.0);
        double prev = 0.0;
        for (std::size_t i = 0; i < nllr; ++i) {
            const double edge = i + 1 < nllr ? cdf(llr_value(i) + 0.5 * opt.llr_step) : 1.0;
            channel[i] = std::max(edge - prev, 0.0);
            prev = edge;
        }
    }

    static double error_probability(const std::vector<double>& d, std::size_t half) {
        double pe = 0.5 * d[half];
        for (std::size_t i = 0; i < half; ++i) pe += d[i];
        return pe;
    }

    void check_update() {
        // Signed G-domain densities; erasures (bin 0) stay out of A and B.
        std::fill(fa.begin(), fa.end(), 0.0);
        std::fill(fb.begin(), fb.end(), 0.0);
        for (std::size_t i = 1; i <= half; ++i) {
            const double p = var_msg[half + i], m = var_msg[half - i];
            const std::size_t j = l2g_lo[i];
            const double w = l2g_w[i];
            fa[j] += (p + m) * (1.0 - w);
            fa[j + 1] += (p + m) * w;
            fb[j] += (p - m) * (1.0 - w);
            fb[j + 1] += (p - m) * w;
        }
        const double total_a = std::accumulate(fa.begin(), fa.end(), 0.0);
        const std::uint32_t e = dc - 1;

        power_damped(fa, e);
        power_damped(fb, e);
        const double out_a = std::pow(total_a, e);
        double sum_a = 0.0;
        for (std::size_t j = 0; j < ng; ++j) sum_a += fa[j];

        std::fill(chk_msg.begin(), chk_msg.end(), 0.0);
        // Saturated sums (g beyond the grid) and erasures carry no information.
        const double top = std::max(out_a - sum_a, 0.0);
        chk_msg[half] += top + std::max(1.0 - out_a, 0.0);
        for (std::size_t j = 0; j < ng; ++j) {
            const double plus = std::max(0.5 * (fa[j] + fb[j]), 0.0);
            const double minus = std::max(0.5 * (fa[j] - fb[j]), 0.0);
            const std::size_t i = g2l_lo[j];
            const double w = g2l_w[j];
            chk_msg[half + i] += plus * (1.0 - w);
            chk_msg[half - i] += minus * (1.0 - w);
            chk_msg[half + i + 1] += plus * w;
            chk_msg[half - i - 1] += minus * w;
        }
    }

    // f <- f^{*e} restricted to bins [0, ng), via an exponentially damped
    // circular convolution so that wrapped mass is negligible.
    void power_damped(std::vector<double>& f, std::uint32_t e) {
        tmp.resize(ng + 1);
        for (std::size_t j = 0; j <= ng; ++j) tmp[j] = f[j] * damp[j];
        check_fft.forward(tmp.data(), ng + 1, spec_a);
        for (auto& z : spec_a) z = ipow(z, e);
        const double* out = check_fft.inverse(spec_a);
        for (std::size_t j = 0; j < ng; ++j) f[j] = out[j] * undamp[j];
        f[ng] = 0.0;
    }

    // out <- saturate(a * b) on the LLR grid; spec of a may be precomputed.
    void convolve_saturated(const std::vector<Complex>& sa, const std::vector<Complex>& sb, std::vector<double>& out) {
        spec_acc.resize(sa.size());
        for (std::size_t i = 0; i < sa.size(); ++i) spec_acc[i] = sa[i] * sb[i];
        const double* full = var_fft.inverse(spec_acc);
        // full[k] is the mass at LLR index k - 2*half.
        out.assign(nllr, 0.0);
        const std::size_t len = 2 * nllr - 1;
        for (std::size_t k = 0; k < len; ++k) {
            const double m = full[k];
            std::size_t idx;
            if (k <= half) idx = 0;
            else if (k >= half + nllr - 1) idx = nllr - 1;
            else idx = k - half;
            out[idx] += m;
        }
        for (auto& v : out) v = std::max(v, 0.0);
    }

    void variable_update() {
        // var_msg <- channel * chk_msg^{*(dv-1)}
        std::vector<double> base = chk_msg;
        std::vector<double> acc = channel;
        std::uint32_t e = dv - 1;
        std::vector<Complex> sbase, sacc;
        while (e) {
            var_fft.forward(base.data(), nllr, sbase);
            if (e & 1u) {
                var_fft.forward(acc.data(), nllr, sacc);
                convolve_saturated(sacc, sbase, acc);
            }
            e >>= 1;
            if (e) convolve_saturated(sbase, sbase, base);
        }
        double s = 0.0;
        for (double v : acc) s += v;
        for (auto& v : acc) v /= s;
        var_msg = std::move(acc);
    }

    DeRun run(double sigma) {
        DeRun res;
        if (!(sigma > 0.0)) {
            res.converged = true;
            res.error_probability = 0.0;
            return res;
        }
        make_channel(sigma);
        var_msg = channel;
        res.error_probability = error_probability(var_msg, half);
        std::vector<double> history{res.error_probability};
        for (int it = 1; it <= opt.max_iterations; ++it) {
            if (res.error_probability < opt.target_error) {
                res.converged = true;
                return res;
            }
            check_update();
            variable_update();
            res.iterations = it;
            res.error_probability = error_probability(var_msg, half);
            history.push_back(res.error_probability);
            if (it >= opt.stall_window) {
                const double before = history[history.size() - 1 - static_cast<std::size_t>(opt.stall_window)];
                if (res.error_probability > before * (1.0 - opt.stall_tolerance)) break;
            }
        }
        res.converged = res.error_probability < opt.target_error;
        return res;
    }
};

DensityEvolution::DensityEvolution(std::uint32_t d_v, std::uint32_t d_c, const DeOptions& options) {
    DeQuery{d_v, d_c, 1.0}.validate();
    if (!(options.llr_step > 0.0 && options.llr_max > options.llr_step && options.g_step > 0.0)) {
        throw InvalidParams("invalid density grid");
    }
    impl_ = std::make_unique<Impl>(d_v, d_c, options);
}

DensityEvolution::~DensityEvolution() = default;
DensityEvolution::DensityEvolution(DensityEvolution&&) noexcept = default;
DensityEvolution& DensityEvolution::operator=(DensityEvolution&&) noexcept = default;

DeRun DensityEvolution::run(double sigma) { return impl_->run(sigma); }

DeThreshold de_threshold(const DeQuery& query, const DeOptions& options, double lo, double hi) {
    query.validate();
    DensityEvolution de(query.d_v, query.d_c, options);
    DeThreshold t;
    t.lower = lo;
    t.upper = hi;
    if (!de.run(lo).converged) throw ConvergenceError("density evolution does not converge at the lower bracket end");
    if (de.run(hi).converged) throw ConvergenceError("density evolution converges at the upper bracket end");
    t.evaluations = 2;
    while (t.upper - t.lower > query.tolerance) {
        const double mid = 0.5 * (t.lower + t.upper);
        (de.run(mid).converged ? t.lower : t.upper) = mid;
        ++t.evaluations;
    }
    t.sigma_t = t.lower;
    return t;
}

bool check_noise_above_threshold(const SystemParams& params, std::uint32_t attacker_dv, const DeOptions& options) {
    if (!(params.sigma > 0.0)) return false;
    const auto q = DeQuery::for_rate(attacker_dv, params.rate());
    DensityEvolution de(q.d_v, q.d_c, options);
    return !de.run(params.sigma).converged;
}

}  // namespace smce
