#include <doctest.h>

#include <cmath>

#include "smce/security.hpp"
#include "smce/simulate.hpp"
#include "stats.hpp"

using namespace smce;

TEST_CASE("order-statistics oracle") {
    const auto a = ordered_error_oracle(100, 0.5, 20000, 3, 1);
    const auto b = ordered_error_oracle(100, 0.5, 20000, 3, 3);
    CHECK(a.error_counts == b.error_counts);
    const auto f = a.frequencies();
    CHECK(f.back() >= f.front());
    double sum = 0.0;
    for (double x : f) sum += x;
    CHECK(sum == doctest::Approx(expected_errors(100, 0.5)).epsilon(0.02));
    const auto exact = p_err_ordered_all(100, 0.5);
    for (std::size_t i = 90; i < 100; ++i) CHECK(std::fabs(f[i] - exact[i]) <= 4 * oracle::binomial_se(exact[i], 20000));
}

TEST_CASE("flip demo") {
    CHECK(soft_attack_demo(200, 0.44091, 0, 100, 1).rate() == 1.0);
    CHECK(soft_attack_demo(200, 0.44091, 200, 100, 1).rate() == 0.0);
    const auto d = soft_attack_demo(200, 0.44091, 3, 20000, 2);
    CHECK(d.residual_ok == d.successes);
    const double pf = p_flip_success_joint(3, 200, 0.44091);
    CHECK(std::fabs(d.rate() - pf) <= 4 * oracle::binomial_se(pf, 20000));
    CHECK(p_flip_success(3, 200, 0.44091) < pf);
}

TEST_CASE("dfr batch on an easy channel") {
    const auto p = SystemParams::make(2, 401, 9, 0.2);
    const auto a = dfr_trial_batch(p, 200, 11, 1);
    const auto b = dfr_trial_batch(p, 200, 11, 2);
    CHECK(a.failures == 0u);
    CHECK(a.miscorrections == 0u);
    CHECK(a.trials == 200u);
    CHECK(a.attempts_histogram == b.attempts_histogram);
    CHECK(a.mean_attempts() >= 1.0);
    CHECK(a.summary_line(p).find("failures=0") != std::string::npos);
}
