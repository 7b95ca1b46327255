#include <algorithm>
#include <cctype>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "smce/error.hpp"
#include "smce/security.hpp"

namespace smce {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log2 C(n, k); -inf outside 0 <= k <= n.
double log2_binom(double n, double k) {
    if (k < 0.0 || k > n || n < 0.0) return kNegInf;
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

double log2_sum(std::initializer_list<double> terms) {
    double m = kNegInf;
    for (double t : terms) m = std::max(m, t);
    if (m == kNegInf) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp2(t - m);
    return m + std::log2(s);
}

// Gaussian elimination on an (n-k) x n matrix, paid once per iteration.
double log2_linear_algebra(double n, double k) { return std::log2(n) + std::log2(std::max(n - k, 1.0)); }

double prange(double n, double k, double w) {
    return log2_linear_algebra(n, k) + log2_binom(n, w) - log2_binom(n - k, w);
}

// Stern: two disjoint halves of the information set carry p/2 errors each,
// collisions are matched on an l-bit window.
double stern(double n, double k, double w) {
    double best = prange(n, k, w);
    const double la = log2_linear_algebra(n, k);
    for (int p = 2; p <= std::min(40.0, w); p += 2) {
        const double list = log2_binom(std::floor(k / 2), p / 2);
        for (int l = 0; l <= std::min(120.0, n - k - (w - p)); ++l) {
            const double success = 2.0 * list + log2_binom(n - k - l, w - p) - log2_binom(n, w);
            const double lp = std::log2(p);
            const double iter = log2_sum({la, lp + list + 1.0, lp + 2.0 * list - l});
            best = std::min(best, iter - success);
        }
    }
    return best;
}

// Depth-2 BJMM with epsilon representations. The k + l window holds p
// errors; each of four base lists enumerates weight p1/2 on half the window,
// p1 = p/2 + eps. R = C(p, p/2) C(k + l - p, eps) representations of a
// solution let the middle level filter on log2 R bits.
double bjmm(double n, double k, double w) {
    double best = stern(n, k, w);
    const double la = log2_linear_algebra(n, k);
    for (int p = 2; p <= std::min(40.0, w); p += 2) {
        const double lp = std::log2(p);
        for (int eps = 0; eps <= 10; ++eps) {
            const int p1 = p / 2 + eps;
            if (p1 % 2 != 0) continue;
            for (int l = 0; l <= std::min(300.0, n - k - (w - p)); ++l) {
                const double kl = k + l;
                const double reps = log2_binom(p, p / 2) + log2_binom(kl - p, eps);
                if (reps > l) continue;
                const double l2 = log2_binom(std::floor(kl / 2), p1 / 2);
                const double l1 = log2_binom(kl, p1) - reps;
                const double iter =
                    log2_sum({la, lp + l2 + 2.0, lp + 2.0 * l2 - reps + 1.0, lp + 2.0 * l1 - (l - reps)});
                const double success = log2_binom(kl, p) + log2_binom(n - k - l, w - p) - log2_binom(n, w);
                best = std::min(best, iter - success);
            }
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(IsdModel m) {
    switch (m) {
        case IsdModel::Bjmm: return "bjmm";
        case IsdModel::Stern: return "stern";
        case IsdModel::Prange: return "prange";
    }
    return "?";
}

IsdModel parse_isd_model(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "bjmm") return IsdModel::Bjmm;
    if (s == "stern") return IsdModel::Stern;
    if (s == "prange") return IsdModel::Prange;
    throw InvalidParams("unknown ISD model '" + std::string(name) + "'");
}

double wf_isd(std::uint32_t n, std::uint32_t k, std::uint32_t w, IsdModel model) {
    if (k == 0 || k >= n) throw InvalidParams("ISD instance needs 0 < k < n");
    if (w > n - k) throw InvalidParams("weight exceeds the redundancy n - k; instance is degenerate");
    const double dn = n, dk = k;
    if (w == 0) return log2_linear_algebra(dn, dk);
    switch (model) {
        case IsdModel::Prange: return prange(dn, dk, w);
        case IsdModel::Stern: return stern(dn, dk, w);
        case IsdModel::Bjmm: return bjmm(dn, dk, w);
    }
    return prange(dn, dk, w);
}

double wf_da_hard(std::uint32_t n, std::uint32_t k, std::uint32_t t, std::uint32_t r, IsdModel model) {
    if (r == 0) throw InvalidParams("r must be positive");
    return wf_isd(n, k, t, model) - 0.5 * std::log2(static_cast<double>(r));
}

}  // namespace smce
