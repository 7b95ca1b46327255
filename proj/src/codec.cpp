#include "smce/codec.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <string>

#include "byte_io.hpp"
#include "smce/error.hpp"
#include "smce/rng.hpp"
#include "smce/spa_decoder.hpp"

namespace smce {

namespace {

constexpr std::uint8_t kCiphertextVersion = 1;

double round_half_even(double v) {
    const double f = std::floor(v);
    const double frac = v - f;
    if (frac > 0.5) return f + 1.0;
    if (frac < 0.5) return f;
    return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

void check_message(std::span<const std::uint8_t> message, const SystemParams& p) {
    if (message.size() != p.k()) {
        throw SizeMismatch("message has " + std::to_string(message.size()) + " bits, expected " +
                           std::to_string(p.k()));
    }
}

}  // namespace

Quantizer::Quantizer(int q, double limit) : q_(q), limit_(limit) {
    if (q < 4 || q > 32) throw InvalidParams("q must lie in [4, 32]");
    if (!(limit > 0.0)) throw InvalidParams("quantizer range must be positive");
    levels_ = std::uint64_t{1} << q;
    step_ = 2.0 * limit_ / static_cast<double>(levels_);
}

std::uint32_t Quantizer::quantize(double x) const {
    const double half = static_cast<double>(levels_ / 2);
    const double v = std::clamp(x / step_ - 0.5, -half - 1.0, half + 1.0);
    const double code = round_half_even(v) + half;
    return static_cast<std::uint32_t>(std::clamp(code, 0.0, static_cast<double>(levels_ - 1)));
}

double Quantizer::dequantize(std::uint32_t code) const {
    const double half = static_cast<double>(levels_ / 2);
    return (static_cast<double>(code) - half + 0.5) * step_;
}

Bits encode(std::span<const std::uint8_t> message, const PublicKey& pk) {
    const auto& p = pk.params;
    check_message(message, p);
    Bits c(message.begin(), message.end());
    auto parity = CirculantPoly::zero(p.r);
    for (std::size_t i = 0; i < pk.p_blocks.size(); ++i) {
        const auto block = CirculantPoly::from_bits(message.subspan(i * p.r, p.r));
        parity = parity + block * pk.p_blocks[i];
    }
    const auto pb = parity.to_bits();
    c.insert(c.end(), pb.begin(), pb.end());
    return c;
}

std::uint32_t count_induced_errors(std::span<const std::uint8_t> codeword, std::span<const double> noise) {
    if (codeword.size() != noise.size()) throw SizeMismatch("noise length does not match codeword");
    std::uint32_t t = 0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        const double s = codeword[i] ? 1.0 : -1.0;
        if (s * noise[i] <= -1.0) ++t;
    }
    return t;
}

NoiseVector sample_noise(std::span<const std::uint8_t> codeword, const SystemParams& params, std::uint64_t seed) {
    params.validate();
    if (codeword.size() != params.n()) throw SizeMismatch("codeword length does not match parameters");
    Engine rng(seed);
    boost::random::normal_distribution<double> gauss(0.0, params.sigma);
    NoiseVector nv;
    nv.samples.resize(params.n());
    for (int attempt = 1; attempt <= kNoiseAttemptCap; ++attempt) {
        for (auto& w : nv.samples) w = gauss(rng);
        nv.t_star = count_induced_errors(codeword, nv.samples);
        if (nv.t_star >= params.t_lower) {
            nv.attempts = attempt;
            return nv;
        }
    }
    throw RetryExhausted("no noise vector reached t_lower = " + std::to_string(params.t_lower) + " within " +
                         std::to_string(kNoiseAttemptCap) + " draws");
}

Ciphertext encrypt_with_noise(std::span<const std::uint8_t> message, const PublicKey& pk,
                              std::span<const double> noise) {
    const auto& p = pk.params;
    const auto c = encode(message, pk);
    if (noise.size() != c.size()) throw SizeMismatch("noise length does not match codeword");
    const auto quant = Quantizer::for_sigma(p.q, p.sigma);
    Ciphertext ct{p.n0, p.r, p.q, p.sigma, {}};
    ct.codes.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) ct.codes[i] = quant.quantize(2.0 * c[i] - 1.0 + noise[i]);
    return ct;
}

Ciphertext encrypt(std::span<const std::uint8_t> message, const PublicKey& pk, std::uint64_t seed) {
    check_message(message, pk.params);
    const auto c = encode(message, pk);
    const auto noise = sample_noise(c, pk.params, seed);
    return encrypt_with_noise(message, pk, noise.samples);
}

std::vector<double> dequantize_samples(const Ciphertext& ct) {
    const auto quant = Quantizer::for_sigma(ct.q, ct.sigma);
    std::vector<double> x(ct.codes.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = quant.dequantize(ct.codes[i]);
    return x;
}

Decryptor::Decryptor(const PrivateKey& sk)
    : params_(sk.params),
      graph_(std::make_unique<TannerGraph>(sk)),
      decoder_(std::make_unique<SpaDecoder>(*graph_)) {}

Decryptor::~Decryptor() = default;
Decryptor::Decryptor(Decryptor&&) noexcept = default;
Decryptor& Decryptor::operator=(Decryptor&&) noexcept = default;

DecryptResult Decryptor::decrypt(const Ciphertext& ct) {
    if (ct.n0 != params_.n0 || ct.r != params_.r || ct.q != params_.q || ct.sigma != params_.sigma) {
        throw ParameterMismatch("ciphertext parameters do not match the private key");
    }
    if (ct.codes.size() != params_.n()) throw ParameterMismatch("ciphertext length does not match the private key");
    return decrypt_samples(dequantize_samples(ct));
}

DecryptResult Decryptor::decrypt_samples(std::span<const double> samples) {
    const auto llrs = llr_init(samples, params_.sigma);
    auto dec = decoder_->decode(llrs, params_.max_iter);
    DecryptResult out;
    out.iterations = dec.iterations;
    if (dec.success) out.message = Bits(dec.codeword.begin(), dec.codeword.begin() + params_.k());
    return out;
}

DecryptResult decrypt(const Ciphertext& ct, const PrivateKey& sk) { return Decryptor(sk).decrypt(ct); }

std::size_t ciphertext_record_bytes(std::uint32_t n, int q) {
    return kCiphertextHeaderBytes + (std::size_t{n} * static_cast<std::size_t>(q) + 7) / 8;
}

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct) {
    detail::ByteWriter w;
    w.raw("SMCT", 4);
    w.u8(kCiphertextVersion);
    w.u16(ct.n0);
    w.u32(ct.r);
    w.u8(ct.q);
    w.f64(ct.sigma);
    Bits bits;
    bits.reserve(ct.codes.size() * ct.q);
    for (auto code : ct.codes) {
        for (int b = 0; b < ct.q; ++b) bits.push_back(static_cast<std::uint8_t>((code >> b) & 1u));
    }
    w.bytes(detail::pack_bits(bits));
    return w.take();
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
    detail::ByteReader in(bytes);
    if (!in.magic("SMCT")) throw FormatError("bad ciphertext magic");
    if (in.u8() != kCiphertextVersion) throw FormatError("unsupported ciphertext version");
    Ciphertext ct;
    ct.n0 = in.u16();
    ct.r = in.u32();
    ct.q = in.u8();
    ct.sigma = in.f64();
    if (ct.n0 < 2 || ct.r == 0 || ct.r % 2 == 0 || ct.q < 4 || ct.q > 32 || !(ct.sigma > 0.0)) {
        throw FormatError("invalid ciphertext header");
    }
    const std::size_t n = std::size_t{ct.n0} * ct.r;
    const std::size_t nbits = n * ct.q;
    const auto payload = in.bytes((nbits + 7) / 8);
    if (nbits % 8 != 0 && (payload.back() >> (nbits % 8)) != 0) throw FormatError("nonzero padding bits");
    const auto bits = detail::unpack_bits(payload, nbits);
    ct.codes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t code = 0;
        for (int b = 0; b < ct.q; ++b) code |= std::uint32_t{bits[i * ct.q + b]} << b;
        ct.codes[i] = code;
    }
    if (consumed) *consumed = in.position();
    return ct;
}

}  // namespace smce
