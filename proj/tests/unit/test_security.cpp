#include <doctest.h>

#include <cmath>

#include "smce/error.hpp"
#include "smce/security.hpp"

using namespace smce;

namespace {

double lbinom(double n, double k) {
    return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(2.0);
}

}  // namespace

TEST_CASE("Prange matches its closed form") {
    const double n = 7202, k = 3601, w = 84;
    const double expected = lbinom(n, w) - lbinom(n - k, w) + std::log2(n * (n - k));
    CHECK(wf_isd(7202, 3601, 84, IsdModel::Prange) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("model ordering") {
    struct Inst {
        std::uint32_t n, k, w;
    };
    for (const auto& in : {Inst{7202, 3601, 84}, Inst{7202, 3601, 90}, Inst{15770, 7885, 134}, Inst{10779, 7186, 53},
                           Inst{2000, 1000, 30}, Inst{500, 250, 10}}) {
        const double b = wf_isd(in.n, in.k, in.w, IsdModel::Bjmm);
        const double s = wf_isd(in.n, in.k, in.w, IsdModel::Stern);
        const double p = wf_isd(in.n, in.k, in.w, IsdModel::Prange);
        CHECK(b <= s);
        CHECK(s <= p);
    }
}

TEST_CASE("isd monotone in the weight") {
    double prev = 0.0;
    for (std::uint32_t w = 0; w <= 90; w += 5) {
        const double v = wf_isd(7202, 3601, w);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("isd edge cases") {
    CHECK(wf_isd(7202, 3601, 0) == doctest::Approx(std::log2(7202.0 * 3601.0)));
    CHECK(wf_isd(7202, 3601, 0) >= 0.0);
    CHECK_THROWS_AS(wf_isd(100, 0, 5), InvalidParams);
    CHECK_THROWS_AS(wf_isd(100, 100, 5), InvalidParams);
    CHECK_THROWS_AS(wf_isd(100, 50, 51), InvalidParams);
    CHECK(parse_isd_model("BJMM") == IsdModel::Bjmm);
    CHECK(parse_isd_model("prange") == IsdModel::Prange);
    CHECK_THROWS_AS(parse_isd_model("mmt"), InvalidParams);
}

TEST_CASE("quasi-cyclic gain") {
    CHECK(wf_da_hard(7202, 3601, 84, 1) == wf_isd(7202, 3601, 84));
    CHECK(wf_da_hard(7202, 3601, 84, 1000) - wf_da_hard(7202, 3601, 84, 2000) == doctest::Approx(0.5));
}

TEST_CASE("ordered error probabilities") {
    const double sigma = 0.44091;
    CHECK(p_err_ordered(1, 1, sigma) == doctest::Approx(0.5 * std::erfc(1.0 / (sigma * std::sqrt(2.0)))).epsilon(1e-9));
    const auto all = p_err_ordered_all(500, sigma);
    double sum = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        sum += all[i];
        if (i) CHECK(all[i] >= all[i - 1] * (1.0 - 1e-9));
    }
    CHECK(sum == doctest::Approx(expected_errors(500, sigma)).epsilon(1e-3));
    CHECK(all.back() < 0.5);
    CHECK_THROWS_AS(p_err_ordered(0, 10, sigma), InvalidParams);
    CHECK_THROWS_AS(p_err_ordered(11, 10, sigma), InvalidParams);
    CHECK_THROWS_AS(p_err_ordered(1, 10, 0.0), InvalidParams);
}

TEST_CASE("flip success") {
    CHECK(p_flip_success(0, 200, 0.44) == 1.0);
    CHECK(p_flip_success(1, 200, 0.44) == doctest::Approx(p_err_ordered(200, 200, 0.44)));
    CHECK(p_flip_success(2, 200, 0.44) ==
          doctest::Approx(p_err_ordered(200, 200, 0.44) * p_err_ordered(199, 200, 0.44)));
    CHECK_THROWS_AS(p_flip_success(201, 200, 0.44), InvalidParams);

    CHECK(p_flip_success_joint(0, 200, 0.44) == 1.0);
    CHECK(p_flip_success_joint(1, 200, 0.44) == doctest::Approx(p_err_ordered(200, 200, 0.44)).epsilon(1e-8));
    for (std::uint32_t t : {2u, 5u, 20u}) CHECK(p_flip_success_joint(t, 200, 0.44) >= p_flip_success(t, 200, 0.44));
    // n = 2, t_f = 2: both samples positive. P(y > 0)^2.
    const double pe = 0.5 * std::erfc(1.0 / (0.7 * std::sqrt(2.0)));
    CHECK(p_flip_success_joint(2, 2, 0.7) == doctest::Approx(pe * pe).epsilon(1e-8));
}

TEST_CASE("noise level conversions") {
    for (double t : {1.0, 53.0, 84.0, 134.0, 1000.0}) {
        const double s = sigma_for_expected_errors(15770, t);
        CHECK(expected_errors(15770, s) == doctest::Approx(t).epsilon(1e-9));
    }
    CHECK_THROWS_AS(sigma_for_expected_errors(100, 0), InvalidParams);
    CHECK_THROWS_AS(sigma_for_expected_errors(100, 50), InvalidParams);
    CHECK(expected_errors(100, 0.0) == 0.0);
}

TEST_CASE("t_f scan never exceeds the unflipped value") {
    const auto p = SystemParams::make(2, 101, 5, 0.2);
    const auto opt = optimize_tf(p, 3);
    CHECK(opt.curve.size() == 4u);
    CHECK(opt.wf <= opt.curve[0].wf);
    CHECK(opt.curve[0].wf == doctest::Approx(wf_da_hard(202, 101, 3, 101)));
    const auto again = optimize_tf(p, 3);
    CHECK(again.t_f == opt.t_f);
    CHECK(wf_da_soft(p, 3, 2) == doctest::Approx(opt.curve[2].wf));
    CHECK_THROWS_AS(wf_da_soft(p, 3, 4), InvalidParams);
}

TEST_CASE("report invariants") {
    const auto p = SystemParams::make(2, 1201, 15, 0.45);
    const auto rep = security_report(p);
    CHECK(rep.t_star == p.t_lower);
    CHECK(rep.claimed_security_bits == std::min({rep.wf_da_hard, rep.wf_da_soft, rep.wf_kra}));
    CHECK(rep.wf_da_soft <= rep.wf_da_hard);
    CHECK(rep.attacker_dv == 601u);
    CHECK(rep.de_verdict);
    CHECK_FALSE(rep.insecure());
    CHECK(format_tf_curve(rep).rfind("t_f,log2_pf,wf\n", 0) == 0);
    CHECK(format_report_kv(rep).find("claimed_security_bits=") != std::string::npos);
    CHECK(format_report(rep).find("WF_KRA") != std::string::npos);
}

TEST_CASE("noiseless parameters are flagged insecure") {
    auto p = SystemParams::make(2, 1201, 15, 0.45);
    p.sigma = 0.0;
    p.t_lower = 0;
    const auto rep = security_report(p);
    CHECK(rep.t_star == 0u);
    CHECK(rep.wf_da_soft == doctest::Approx(std::log2(2402.0 * 1201.0) - 0.5 * std::log2(1201.0)));
    CHECK_FALSE(rep.de_verdict);
    CHECK(rep.insecure());
}
