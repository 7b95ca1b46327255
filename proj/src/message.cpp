#include "smce/message.hpp"

#include "smce/codec.hpp"
#include "smce/error.hpp"
#include "smce/rng.hpp"

namespace smce {

std::vector<Bits> split_message(std::span<const std::uint8_t> bytes, std::uint32_t k) {
    if (k == 0) throw InvalidParams("block length must be positive");
    Bits bits;
    bits.reserve(bytes.size() * 8 + k);
    for (auto byte : bytes) {
        for (int b = 0; b < 8; ++b) bits.push_back(static_cast<std::uint8_t>((byte >> b) & 1u));
    }
    bits.push_back(1);
    bits.resize((bits.size() + k - 1) / k * k, 0);
    std::vector<Bits> blocks;
    for (std::size_t pos = 0; pos < bits.size(); pos += k) blocks.emplace_back(bits.begin() + pos, bits.begin() + pos + k);
    return blocks;
}

std::vector<std::uint8_t> join_message(const std::vector<Bits>& blocks) {
    Bits bits;
    for (const auto& b : blocks) bits.insert(bits.end(), b.begin(), b.end());
    while (!bits.empty() && bits.back() == 0) bits.pop_back();
    if (bits.empty()) throw FormatError("padding marker missing");
    bits.pop_back();
    if (bits.size() % 8 != 0) throw FormatError("message is not a whole number of bytes");
    std::vector<std::uint8_t> out(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) out[i / 8] |= static_cast<std::uint8_t>((bits[i] & 1u) << (i % 8));
    return out;
}

std::vector<std::uint8_t> encrypt_stream(std::span<const std::uint8_t> bytes, const PublicKey& pk, std::uint64_t seed) {
    const auto blocks = split_message(bytes, pk.params.k());
    std::vector<std::uint8_t> stream;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto rec = serialize_ciphertext(encrypt(blocks[b], pk, derive_seed(seed, b)));
        stream.insert(stream.end(), rec.begin(), rec.end());
    }
    return stream;
}

StreamDecryption decrypt_stream(std::span<const std::uint8_t> stream, const PrivateKey& sk) {
    if (stream.empty()) throw FormatError("empty ciphertext stream");
    Decryptor dec(sk);
    StreamDecryption out;
    std::vector<Bits> blocks;
    for (std::size_t pos = 0; pos < stream.size();) {
        std::size_t used = 0;
        const auto ct = deserialize_ciphertext(stream.subspan(pos), &used);
        pos += used;
        const auto res = dec.decrypt(ct);
        out.iterations.push_back(res.iterations);
        if (!res.ok()) out.failed_blocks.push_back(out.blocks);
        else blocks.push_back(*res.message);
        ++out.blocks;
    }
    if (out.failed_blocks.empty()) out.plaintext = join_message(blocks);
    return out;
}

}  // namespace smce
