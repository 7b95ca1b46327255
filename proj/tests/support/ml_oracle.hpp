#pragma once

// Exhaustive maximum-likelihood decoding for toy codes (k <= 20).

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "smce/codec.hpp"

namespace oracle {

class ExhaustiveMl {
public:
    explicit ExhaustiveMl(const smce::PublicKey& pk) {
        const auto k = pk.params.k();
        codewords_.reserve(std::size_t{1} << k);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
            smce::Bits msg(k);
            for (std::uint32_t i = 0; i < k; ++i) msg[i] = (m >> i) & 1u;
            codewords_.push_back(smce::encode(msg, pk));
        }
    }

    // Codeword maximizing the correlation with the received samples.
    const smce::Bits& decode(std::span<const double> samples) const {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < codewords_.size(); ++c) {
            double corr = 0.0;
            for (std::size_t i = 0; i < samples.size(); ++i) corr += codewords_[c][i] ? samples[i] : -samples[i];
            if (corr > best) {
                best = corr;
                arg = c;
            }
        }
        return codewords_[arg];
    }

    std::size_t size() const { return codewords_.size(); }

private:
    std::vector<smce::Bits> codewords_;
};

}  // namespace oracle
