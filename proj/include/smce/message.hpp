#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smce/keys.hpp"
#include "smce/qc_ring.hpp"

namespace smce {

/// Splits bytes (bits LSB-first) into k-bit blocks after appending a single
/// 1 bit and zeros up to the next block boundary. Always adds the marker, so
/// a whole-block input gains one extra block.
std::vector<Bits> split_message(std::span<const std::uint8_t> bytes, std::uint32_t k);

/// Inverse of split_message. Throws FormatError if the marker is missing or
/// the payload is not a whole number of bytes.
std::vector<std::uint8_t> join_message(const std::vector<Bits>& blocks);

/// Pads and splits `bytes`, then encrypts block b with derive_seed(seed, b).
/// Returns the concatenated ciphertext records.
std::vector<std::uint8_t> encrypt_stream(std::span<const std::uint8_t> bytes, const PublicKey& pk, std::uint64_t seed);

struct StreamDecryption {
    std::optional<std::vector<std::uint8_t>> plaintext;  // empty if any block failed
    std::size_t blocks = 0;
    std::vector<std::size_t> failed_blocks;
    std::vector<int> iterations;  // per block

    bool ok() const { return plaintext.has_value(); }
};

/// Decrypts a record stream. Throws FormatError for a malformed or empty
/// stream and ParameterMismatch for records not matching the key.
StreamDecryption decrypt_stream(std::span<const std::uint8_t> stream, const PrivateKey& sk);

}  // namespace smce
