#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "smce/keys.hpp"

namespace smce {

/// Uniform mid-rise quantizer with 2^q levels on [-limit, limit]; codes
/// saturate at the range edges and rounding is half-to-even.
class Quantizer {
public:
    Quantizer(int q, double limit);
    /// Clip range used for ciphertexts: [-1 - 6 sigma, 1 + 6 sigma].
    static Quantizer for_sigma(int q, double sigma) { return Quantizer(q, 1.0 + 6.0 * sigma); }

    std::uint32_t quantize(double x) const;
    double dequantize(std::uint32_t code) const;
    double step() const { return step_; }
    std::uint32_t max_code() const { return static_cast<std::uint32_t>(levels_ - 1); }

private:
    int q_;
    double limit_;
    double step_;
    std::uint64_t levels_;
};

struct Ciphertext {
    std::uint16_t n0 = 0;
    std::uint32_t r = 0;
    std::uint8_t q = 0;
    double sigma = 0.0;
    std::vector<std::uint32_t> codes;  // n0*r quantized samples

    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct NoiseVector {
    std::vector<double> samples;
    std::uint32_t t_star = 0;  // induced hard-decision errors
    int attempts = 1;          // draws until acceptance
};

inline constexpr int kNoiseAttemptCap = 1000;

/// Systematic encoding u -> [u | sum_i u_i P_i]. Throws SizeMismatch if |u| != k.
Bits encode(std::span<const std::uint8_t> message, const PublicKey& pk);

/// Positions where the ±1 symbol plus noise has the wrong sign; the boundary
/// s_i * w_i == -1 counts as an error.
std::uint32_t count_induced_errors(std::span<const std::uint8_t> codeword, std::span<const double> noise);

/// i.i.d. N(0, sigma^2) vectors, redrawn until t_star >= t_lower. Throws
/// RetryExhausted after kNoiseAttemptCap draws.
NoiseVector sample_noise(std::span<const std::uint8_t> codeword, const SystemParams& params, std::uint64_t seed);

/// x = 2 (u G') - 1 + w, quantized. Deterministic in seed.
Ciphertext encrypt(std::span<const std::uint8_t> message, const PublicKey& pk, std::uint64_t seed);
/// Same map with caller-supplied noise (zero noise gives exact ±1 symbols).
Ciphertext encrypt_with_noise(std::span<const std::uint8_t> message, const PublicKey& pk,
                              std::span<const double> noise);

std::vector<double> dequantize_samples(const Ciphertext& ct);

struct DecryptResult {
    std::optional<Bits> message;  // empty on decoding failure
    int iterations = 0;
    bool ok() const { return message.has_value(); }
};

class TannerGraph;
class SpaDecoder;

/// Reusable decryption context (Tanner graph plus decoder buffers).
class Decryptor {
public:
    explicit Decryptor(const PrivateKey& sk);
    ~Decryptor();
    Decryptor(Decryptor&&) noexcept;
    Decryptor& operator=(Decryptor&&) noexcept;

    /// Throws ParameterMismatch if the ciphertext header disagrees with the key.
    DecryptResult decrypt(const Ciphertext& ct);
    /// Decodes real-valued samples directly (no quantization).
    DecryptResult decrypt_samples(std::span<const double> samples);

private:
    SystemParams params_;
    std::unique_ptr<TannerGraph> graph_;
    std::unique_ptr<SpaDecoder> decoder_;
};

DecryptResult decrypt(const Ciphertext& ct, const PrivateKey& sk);

/// Ciphertext record: "SMCT", version, n0 u16, r u32, q u8, sigma f64, then
/// the n q-bit codes bit-packed in position order.
std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct);
/// Parses one record starting at the front of bytes; consumed receives the
/// record length. Throws FormatError.
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

inline constexpr std::size_t kCiphertextHeaderBytes = 20;
std::size_t ciphertext_record_bytes(std::uint32_t n, int q);

}  // namespace smce
