#include <doctest.h>

#include <cmath>

#include "gf2_dense.hpp"
#include "smce/error.hpp"
#include "smce/keys.hpp"

using namespace smce;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SystemParams::make(2, 100, 5, 0.4), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(2, 101, 0, 0.4), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(2, 101, 5, 0.0), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(1, 101, 5, 0.4), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(2, 101, 5, 0.4, 203), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(2, 101, 5, 0.4, std::nullopt, 3), InvalidParams);
    const auto p80 = SystemParams::preset_80();
    CHECK(p80.n() == 7202);
    CHECK(p80.k() == 3601);
    CHECK(p80.t_lower == 84);
    CHECK(p80.t_hat() == doctest::Approx(84.0).epsilon(1e-4));
    const auto p128 = SystemParams::preset_128();
    CHECK(p128.t_lower == 134);
    CHECK(p128.d_c() == 142);
    CHECK(static_cast<long>(SystemParams::make(2, 101, 5, 0.5).t_lower) == std::lround(SystemParams::make(2, 101, 5, 0.5).t_hat()));
}

TEST_CASE("generated keys satisfy G' H^T = 0 in dense form") {
    for (std::uint16_t n0 : {2, 3}) {
        const auto params = SystemParams::make(n0, n0 == 2 ? 13 : 29, 3, 0.5);
        const auto kp = generate_keypair(params, 1234 + n0);
        REQUIRE(kp.private_key.h_blocks.size() == n0);
        REQUIRE(kp.public_key.p_blocks.size() == n0 - 1u);
        for (const auto& h : kp.private_key.h_blocks) CHECK(h.weight() == 3);
        CHECK(parity_relation_holds(kp.private_key, kp.public_key));

        const auto hlast_t = oracle::transpose(oracle::circulant(kp.private_key.h_blocks.back().to_bits()));
        for (std::size_t i = 0; i + 1 < n0; ++i) {
            const auto hi_t = oracle::transpose(oracle::circulant(kp.private_key.h_blocks[i].to_bits()));
            const auto pi = oracle::circulant(kp.public_key.p_blocks[i].to_bits());
            const auto sum = oracle::add(hi_t, oracle::multiply(pi, hlast_t));
            for (const auto& row : sum)
                for (auto v : row) CHECK(v == 0);
        }
    }
}

TEST_CASE("key generation is deterministic in the seed") {
    const auto params = SystemParams::make(2, 101, 5, 0.5);
    const auto a = generate_keypair(params, 42);
    const auto b = generate_keypair(params, 42);
    const auto c = generate_keypair(params, 43);
    CHECK(a.private_key == b.private_key);
    CHECK(a.public_key == b.public_key);
    CHECK_FALSE(a.private_key == c.private_key);
    CHECK(derive_public(a.private_key) == a.public_key);
}

TEST_CASE("tampered keys break the parity relation") {
    const auto params = SystemParams::make(2, 101, 5, 0.5);
    auto kp = generate_keypair(params, 7);
    kp.public_key.p_blocks[0] = kp.public_key.p_blocks[0] + CirculantPoly::monomial(101, 0);
    CHECK_FALSE(parity_relation_holds(kp.private_key, kp.public_key));
}

TEST_CASE("key serialization round-trips bit-exactly") {
    const auto params = SystemParams::make(3, 29, 3, 0.35, 4, 12, 50);
    const auto kp = generate_keypair(params, 99);
    const auto sk_bytes = serialize_key(kp.private_key);
    const auto pk_bytes = serialize_key(kp.public_key);
    CHECK(peek_key_kind(sk_bytes) == KeyKind::Private);
    CHECK(peek_key_kind(pk_bytes) == KeyKind::Public);
    CHECK(deserialize_private_key(sk_bytes) == kp.private_key);
    CHECK(deserialize_public_key(pk_bytes) == kp.public_key);
    CHECK(serialize_key(deserialize_public_key(pk_bytes)) == pk_bytes);
    CHECK(kp.public_key.payload_bits() == 2u * 29u);
    CHECK(pk_bytes.size() == kKeyHeaderBytes + 2 * ((29 + 7) / 8));
    CHECK(sk_bytes.size() == kKeyHeaderBytes + 3 * 3 * 4);
}

TEST_CASE("malformed key files are rejected") {
    const auto kp = generate_keypair(SystemParams::make(2, 101, 5, 0.5), 3);
    auto pk = serialize_key(kp.public_key);
    auto sk = serialize_key(kp.private_key);

    auto bad_magic = pk;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize_public_key(bad_magic), FormatError);

    auto truncated = pk;
    truncated.pop_back();
    CHECK_THROWS_AS(deserialize_public_key(truncated), FormatError);

    auto trailing = pk;
    trailing.push_back(0);
    CHECK_THROWS_AS(deserialize_public_key(trailing), FormatError);

    // r = 101 leaves 3 padding bits in the last payload byte.
    auto padded = pk;
    padded.back() |= 0x80;
    CHECK_THROWS_AS(deserialize_public_key(padded), FormatError);

    CHECK_THROWS_AS(deserialize_private_key(pk), FormatError);
    CHECK_THROWS_AS(deserialize_public_key(sk), FormatError);

    auto wrong_support = sk;
    wrong_support[kKeyHeaderBytes] = 0xff;
    wrong_support[kKeyHeaderBytes + 1] = 0xff;
    CHECK_THROWS(deserialize_private_key(wrong_support));
}
