#include <doctest.h>

#include <boost/random/normal_distribution.hpp>

#include "ml_oracle.hpp"
#include "smce/error.hpp"
#include "smce/rng.hpp"
#include "smce/spa_decoder.hpp"

using namespace smce;

TEST_CASE("llr initialization") {
    const std::vector<double> x{-1.0, 0.0, 1.0, 100.0};
    const auto l = llr_init(x, 0.5);
    CHECK(l[0] == doctest::Approx(-8.0));
    CHECK(l[1] == 0.0);
    CHECK(l[2] == doctest::Approx(8.0));
    CHECK(l[3] == kLlrMax);
    CHECK_THROWS_AS(llr_init(x, 0.0), InvalidParams);
}

TEST_CASE("tanner graph shape") {
    const auto params = SystemParams::make(3, 29, 3, 0.4);
    const auto kp = generate_keypair(params, 1);
    const TannerGraph g(kp.private_key);
    CHECK(g.variables() == 87u);
    CHECK(g.checks() == 29u);
    CHECK(g.check_degree() == 9u);
    CHECK(g.edges() == 29u * 9u);
    std::vector<int> deg(g.variables(), 0);
    for (auto v : g.edge_variables()) ++deg[v];
    for (int d : deg) CHECK(d == 3);
    CHECK(g.is_codeword(Bits(87, 0)));
    Bits one(87, 0);
    one[5] = 1;
    CHECK_FALSE(g.is_codeword(one));
}

TEST_CASE("decoder corrects sparse hard errors on a small code") {
    const auto params = SystemParams::make(2, 101, 5, 0.4);
    const auto kp = generate_keypair(params, 21);
    const TannerGraph g(kp.private_key);
    SpaDecoder dec(g);
    std::vector<double> llr(params.n(), -4.0);
    for (std::uint32_t p : {3u, 77u, 150u}) llr[p] = 1.0;
    const auto res = dec.decode(llr, 50);
    REQUIRE(res.success);
    CHECK(res.iterations >= 1);
    CHECK(res.codeword == Bits(params.n(), 0));
    CHECK_THROWS_AS(dec.decode(std::vector<double>(3, 0.0), 10), SizeMismatch);
}

TEST_CASE("converged SPA outputs agree with exhaustive ML on a toy code") {
    const auto params = SystemParams::make(2, 13, 3, 0.6, 0);
    const auto kp = generate_keypair(params, 4);
    const oracle::ExhaustiveMl ml(kp.public_key);
    REQUIRE(ml.size() == 8192u);
    Decryptor dec(kp.private_key);
    Engine rng(17);
    boost::random::normal_distribution<double> gauss(0.0, params.sigma);
    int converged = 0, agree = 0;
    for (int t = 0; t < 200; ++t) {
        Bits m(params.k());
        for (auto& b : m) b = rng() & 1u;
        const auto c = encode(m, kp.public_key);
        std::vector<double> y(params.n());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * c[i] - 1.0 + gauss(rng);
        const auto res = dec.decrypt_samples(y);
        if (!res.ok()) continue;
        ++converged;
        const auto& best = ml.decode(y);
        agree += std::equal(res.message->begin(), res.message->end(), best.begin());
    }
    CHECK(converged > 150);
    CHECK(agree == converged);
}
