#include "smce/keys.hpp"

#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>
#include <set>
#include <string>

#include "byte_io.hpp"
#include "smce/error.hpp"
#include "smce/rng.hpp"

namespace smce {

namespace {

constexpr std::uint8_t kKeyVersion = 1;

CirculantPoly sample_block(std::uint32_t r, std::uint32_t weight, Engine& rng) {
    boost::random::uniform_int_distribution<std::uint32_t> pos(0, r - 1);
    std::set<std::uint32_t> picked;
    while (picked.size() < weight) picked.insert(pos(rng));
    return CirculantPoly::from_support(r, {picked.begin(), picked.end()});
}

void write_header(detail::ByteWriter& w, KeyKind kind, const SystemParams& p) {
    w.raw("SMCE", 4);
    w.u8(kKeyVersion);
    w.u8(static_cast<std::uint8_t>(kind));
    w.u16(p.n0);
    w.u32(p.r);
    w.u16(p.d_v);
    w.u8(p.q);
    w.f64(p.sigma);
    w.u32(p.t_lower);
    w.u16(p.max_iter);
}

SystemParams read_header(detail::ByteReader& in, KeyKind expected) {
    if (!in.magic("SMCE")) throw FormatError("bad key magic");
    if (in.u8() != kKeyVersion) throw FormatError("unsupported key version");
    const auto kind = in.u8();
    if (kind > 1) throw FormatError("unknown key kind");
    if (static_cast<KeyKind>(kind) != expected) throw FormatError("unexpected key kind");
    SystemParams p;
    p.n0 = in.u16();
    p.r = in.u32();
    p.d_v = in.u16();
    p.q = in.u8();
    p.sigma = in.f64();
    p.t_lower = in.u32();
    p.max_iter = in.u16();
    p.validate();
    return p;
}

}  // namespace

double SystemParams::t_hat() const {
    if (sigma <= 0.0) return 0.0;
    return 0.5 * n() * std::erfc(1.0 / (sigma * std::sqrt(2.0)));
}

void SystemParams::validate(bool allow_zero_sigma) const {
    if (n0 < 2) throw InvalidParams("n0 must be at least 2");
    if (r < 3 || r % 2 == 0) throw InvalidParams("r must be odd (and at least 3), got " + std::to_string(r));
    if (d_v == 0 || d_v >= r) throw InvalidParams("d_v must satisfy 0 < d_v < r");
    if (!std::isfinite(sigma) || sigma < 0.0 || (sigma == 0.0 && !allow_zero_sigma)) {
        throw InvalidParams("sigma must be positive and finite");
    }
    if (t_lower > n()) throw InvalidParams("t_lower exceeds code length");
    if (q < 4 || q > 32) throw InvalidParams("q must lie in [4, 32]");
    if (max_iter == 0) throw InvalidParams("max_iter must be positive");
}

SystemParams SystemParams::make(std::uint16_t n0, std::uint32_t r, std::uint16_t d_v, double sigma,
                                std::optional<std::uint32_t> t_lower, std::uint8_t q, std::uint16_t max_iter) {
    SystemParams p;
    p.n0 = n0;
    p.r = r;
    p.d_v = d_v;
    p.sigma = sigma;
    p.q = q;
    p.max_iter = max_iter;
    p.t_lower = t_lower ? *t_lower : static_cast<std::uint32_t>(std::lround(p.t_hat()));
    p.validate();
    return p;
}

SystemParams SystemParams::preset_80() { return make(2, 3601, 45, 0.44091, 84); }
SystemParams SystemParams::preset_128() { return make(2, 7885, 71, 0.41897, 134); }

std::size_t PublicKey::payload_bits() const {
    std::size_t bits = 0;
    for (const auto& b : p_blocks) bits += b.size();
    return bits;
}

KeyPair generate_keypair(const SystemParams& params, std::uint64_t seed) {
    params.validate();
    Engine rng(seed);
    PrivateKey sk{params, {}};
    for (int i = 0; i + 1 < params.n0; ++i) sk.h_blocks.push_back(sample_block(params.r, params.d_v, rng));
    for (int attempt = 0; attempt < kInvertibilityRetries; ++attempt) {
        auto last = sample_block(params.r, params.d_v, rng);
        if (cyc_inverse(last)) {
            sk.h_blocks.push_back(std::move(last));
            auto pk = derive_public(sk);
            return {std::move(sk), std::move(pk)};
        }
    }
    throw RetryExhausted("no invertible last block after " + std::to_string(kInvertibilityRetries) +
                         " attempts (an even d_v is never invertible)");
}

PublicKey derive_public(const PrivateKey& sk) {
    const auto& p = sk.params;
    p.validate();
    if (sk.h_blocks.size() != p.n0) throw InvalidParams("private key has wrong block count");
    for (const auto& h : sk.h_blocks) {
        if (h.size() != p.r || h.weight() != p.d_v) throw InvalidParams("private block has wrong size or weight");
    }
    auto inv = cyc_inverse(sk.h_blocks.back());
    if (!inv) throw InvalidParams("last private block is not invertible");
    PublicKey pk{p, {}};
    for (int i = 0; i + 1 < p.n0; ++i) pk.p_blocks.push_back(cyc_transpose(*inv * sk.h_blocks[i]));
    return pk;
}

bool parity_relation_holds(const PrivateKey& sk, const PublicKey& pk) {
    // Row block i of G' is [0 .. I .. 0 | P_i]; its syndrome is
    // H_i^T + P_i * H_last^T, which must vanish.
    if (sk.h_blocks.size() != pk.p_blocks.size() + 1) return false;
    const auto last_t = cyc_transpose(sk.h_blocks.back());
    for (std::size_t i = 0; i < pk.p_blocks.size(); ++i) {
        if (!(cyc_transpose(sk.h_blocks[i]) + pk.p_blocks[i] * last_t).is_zero()) return false;
    }
    return true;
}

std::vector<std::uint8_t> serialize_key(const PrivateKey& sk) {
    detail::ByteWriter w;
    write_header(w, KeyKind::Private, sk.params);
    for (const auto& h : sk.h_blocks) {
        for (auto idx : h.support()) w.u32(idx);
    }
    return w.take();
}

std::vector<std::uint8_t> serialize_key(const PublicKey& pk) {
    detail::ByteWriter w;
    write_header(w, KeyKind::Public, pk.params);
    for (const auto& b : pk.p_blocks) w.bytes(detail::pack_bits(b.to_bits()));
    return w.take();
}

KeyKind peek_key_kind(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    if (!in.magic("SMCE")) throw FormatError("bad key magic");
    in.u8();
    const auto kind = in.u8();
    if (kind > 1) throw FormatError("unknown key kind");
    return static_cast<KeyKind>(kind);
}

PrivateKey deserialize_private_key(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    PrivateKey sk{read_header(in, KeyKind::Private), {}};
    const auto& p = sk.params;
    if (in.remaining() != std::size_t{p.n0} * p.d_v * 4) throw FormatError("private key length mismatch");
    for (int b = 0; b < p.n0; ++b) {
        std::vector<std::uint32_t> support(p.d_v);
        for (auto& s : support) s = in.u32();
        try {
            sk.h_blocks.push_back(CirculantPoly::from_support(p.r, std::move(support)));
        } catch (const InvalidParams& e) {
            throw FormatError(std::string("bad private support: ") + e.what());
        }
    }
    return sk;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    PublicKey pk{read_header(in, KeyKind::Public), {}};
    const auto& p = pk.params;
    const std::size_t row_bytes = (p.r + 7) / 8;
    if (in.remaining() != (std::size_t{p.n0} - 1) * row_bytes) throw FormatError("public key length mismatch");
    for (int b = 0; b + 1 < p.n0; ++b) {
        auto row = in.bytes(row_bytes);
        if (p.r % 8 != 0 && (row.back() >> (p.r % 8)) != 0) throw FormatError("nonzero padding bits");
        pk.p_blocks.push_back(CirculantPoly::from_bits(detail::unpack_bits(row, p.r)));
    }
    return pk;
}

}  // namespace smce
