#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smce/qc_ring.hpp"

namespace smce {

/// Public parameters of one scheme instance.
///
/// The code has n0 circulant blocks of size r; the private parity-check matrix
/// has column weight d_v. Ciphertext samples carry Gaussian noise of standard
/// deviation sigma, and encryption rejects noise vectors inducing fewer than
/// t_lower hard-decision errors (t_lower = 0 disables rejection).
struct SystemParams {
    std::uint16_t n0 = 2;
    std::uint32_t r = 0;
    std::uint16_t d_v = 0;
    double sigma = 0.0;
    std::uint32_t t_lower = 0;
    std::uint8_t q = 16;
    std::uint16_t max_iter = 100;

    std::uint32_t n() const { return std::uint32_t{n0} * r; }
    std::uint32_t k() const { return (std::uint32_t{n0} - 1) * r; }
    std::uint32_t d_c() const { return std::uint32_t{n0} * d_v; }
    double rate() const { return static_cast<double>(n0 - 1) / n0; }
    /// Expected number of hard-decision errors, (n/2) erfc(1/(sigma sqrt 2)).
    double t_hat() const;

    /// Throws InvalidParams. sigma == 0 is accepted only for estimation paths.
    void validate(bool allow_zero_sigma = false) const;

    /// Builds and validates; t_lower defaults to round(t_hat).
    static SystemParams make(std::uint16_t n0, std::uint32_t r, std::uint16_t d_v, double sigma,
                             std::optional<std::uint32_t> t_lower = std::nullopt, std::uint8_t q = 16,
                             std::uint16_t max_iter = 100);

    /// n0=2, r=3601, d_v=45, sigma=0.44091, t_lower=84.
    static SystemParams preset_80();
    /// n0=2, r=7885, d_v=71, sigma=0.41897, t_lower=134.
    static SystemParams preset_128();

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Sparse parity-check matrix H = [H_0 | ... | H_{n0-1}].
struct PrivateKey {
    SystemParams params;
    std::vector<CirculantPoly> h_blocks;

    friend bool operator==(const PrivateKey&, const PrivateKey&) = default;
};

/// Non-identity part P of the systematic generator G' = [I_k | P], one block
/// per information block.
struct PublicKey {
    SystemParams params;
    std::vector<CirculantPoly> p_blocks;

    /// (n0 - 1) * r.
    std::size_t payload_bits() const;

    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct KeyPair {
    PrivateKey private_key;
    PublicKey public_key;
};

inline constexpr int kInvertibilityRetries = 100;

/// Samples every block uniformly among weight-d_v rows, resampling the last
/// block until it is invertible. Throws RetryExhausted after
/// kInvertibilityRetries failed attempts.
KeyPair generate_keypair(const SystemParams& params, std::uint64_t seed);

/// p_i = transpose(H_{n0-1}^{-1} * H_i). Throws InvalidParams if the last
/// block is not invertible or the key is malformed.
PublicKey derive_public(const PrivateKey& sk);

/// Zero iff G' * H^T = 0; checked through the polynomial identity.
bool parity_relation_holds(const PrivateKey& sk, const PublicKey& pk);

enum class KeyKind : std::uint8_t { Private = 0, Public = 1 };

std::vector<std::uint8_t> serialize_key(const PrivateKey& sk);
std::vector<std::uint8_t> serialize_key(const PublicKey& pk);
/// Throws FormatError on malformed input, InvalidParams on invalid parameters.
KeyKind peek_key_kind(std::span<const std::uint8_t> bytes);
PrivateKey deserialize_private_key(std::span<const std::uint8_t> bytes);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes);

inline constexpr std::size_t kKeyHeaderBytes = 29;

}  // namespace smce
