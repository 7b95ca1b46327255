#include <doctest.h>

#include "de_oracle.hpp"
#include "smce/density_evolution.hpp"
#include "smce/error.hpp"

using namespace smce;

TEST_CASE("query construction") {
    CHECK(DeQuery::for_rate(3, 0.5).d_c == 6u);
    CHECK(DeQuery::for_rate(45, 2.0 / 3.0).d_c == 135u);
    CHECK(DeQuery::for_rate(45, 0.75).d_c == 180u);
    CHECK_THROWS_AS(DeQuery::for_rate(5, 0.6), InvalidParams);
    CHECK_THROWS_AS(DeQuery::for_rate(3, 1.0), InvalidParams);
    CHECK_THROWS_AS((DeQuery{3, 3, 1e-4}.validate()), InvalidParams);
    CHECK_THROWS_AS((DeQuery{3, 6, 0.0}.validate()), InvalidParams);
    CHECK(parse_rate("1/2") == 0.5);
    CHECK(parse_rate("0.75") == 0.75);
    CHECK(parse_rate("2/3") == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(parse_rate("3/2"), InvalidParams);
    CHECK_THROWS_AS(parse_rate("half"), InvalidParams);
}

TEST_CASE("(3,6) threshold agrees with the pairwise oracle") {
    const auto t = de_threshold({3, 6, 1e-4}, {}, 0.8, 0.95);
    CHECK(t.upper - t.lower <= 1e-4);
    CHECK(t.sigma_t == t.lower);
    // Long-known value for the (3,6) ensemble.
    CHECK(t.sigma_t == doctest::Approx(0.8809).epsilon(1e-3));
    const oracle::PairwiseDe pairwise(3, 6, 0.05);
    CHECK(pairwise.converges(t.sigma_t - 1e-3));
    CHECK_FALSE(pairwise.converges(t.sigma_t + 1e-3));
    // The bracket endpoints give opposite verdicts.
    DensityEvolution de(3, 6);
    CHECK(de.run(t.lower).converged);
    CHECK_FALSE(de.run(t.upper).converged);
}

TEST_CASE("Gaussian approximation mode of the oracle") {
    const oracle::GaussianApproxDe ga(3, 6);
    CHECK(ga.threshold(0.8, 0.95, 1e-3) == doctest::Approx(0.8747).epsilon(3e-3));
}

TEST_CASE("thresholds fall with column weight and with rate") {
    const DeOptions opt;
    const double t36 = de_threshold({3, 6, 1e-2}, opt, 0.5, 1.2).sigma_t;
    const double t48 = de_threshold({4, 8, 1e-2}, opt, 0.5, 1.2).sigma_t;
    const double t39 = de_threshold(DeQuery::for_rate(3, 2.0 / 3.0, 1e-2), opt, 0.4, 1.2).sigma_t;
    CHECK(t48 < t36);
    CHECK(t39 < t36);
}

TEST_CASE("bracket errors") {
    CHECK_THROWS_AS(de_threshold({3, 6, 1e-3}, {}, 0.95, 2.0), ConvergenceError);
    CHECK_THROWS_AS(de_threshold({3, 6, 1e-3}, {}, 0.05, 0.5), ConvergenceError);
}

TEST_CASE("noise verdicts") {
    auto p = SystemParams::preset_80();
    CHECK_FALSE(check_noise_above_threshold(p, 45));
    CHECK(check_noise_above_threshold(p, 224));
    p.sigma = 0.0;
    CHECK_FALSE(check_noise_above_threshold(p, 224));
}
