#include "smce/spa_decoder.hpp"

#include <algorithm>
#include <cmath>

#include "smce/error.hpp"

namespace smce {

namespace {

// |tanh(x/2)| never reaches 1 for |x| <= kLlrMax; keeps atanh finite.
const double kTanhMax = std::tanh(kLlrMax / 2.0);

}  // namespace

LlrVector llr_init(std::span<const double> samples, double sigma) {
    if (!(sigma > 0.0)) throw InvalidParams("sigma must be positive");
    const double scale = 2.0 / (sigma * sigma);
    LlrVector out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = std::clamp(scale * samples[i], -kLlrMax, kLlrMax);
    return out;
}

TannerGraph::TannerGraph(const PrivateKey& sk)
    : n_(sk.params.n()), r_(sk.params.r), d_v_(sk.params.d_v), d_c_(sk.params.d_c()) {
    if (sk.h_blocks.size() != sk.params.n0) throw InvalidParams("private key has wrong block count");
    std::vector<std::vector<std::uint32_t>> supports;
    for (const auto& h : sk.h_blocks) {
        if (h.weight() != d_v_ || h.size() != r_) throw InvalidParams("private block has wrong size or weight");
        supports.push_back(h.support());
    }
    edge_var_.resize(std::size_t{r_} * d_c_);
    var_edge_.resize(std::size_t{n_} * d_v_);
    std::vector<std::uint32_t> fill(n_, 0);
    std::size_t e = 0;
    for (std::uint32_t j = 0; j < r_; ++j) {
        for (std::uint32_t b = 0; b < supports.size(); ++b) {
            for (auto s : supports[b]) {
                const std::uint32_t v = b * r_ + (j + s) % r_;
                edge_var_[e] = v;
                var_edge_[std::size_t{v} * d_v_ + fill[v]++] = static_cast<std::uint32_t>(e);
                ++e;
            }
        }
    }
}

bool TannerGraph::is_codeword(std::span<const std::uint8_t> bits) const {
    if (bits.size() != n_) throw SizeMismatch("codeword length does not match graph");
    for (std::uint32_t j = 0; j < r_; ++j) {
        std::uint8_t parity = 0;
        for (std::size_t e = std::size_t{j} * d_c_; e < std::size_t{j + 1} * d_c_; ++e) parity ^= bits[edge_var_[e]];
        if (parity & 1u) return false;
    }
    return true;
}

SpaDecoder::SpaDecoder(const TannerGraph& graph)
    : g_(graph),
      v2c_(graph.edges()),
      c2v_(graph.edges()),
      tanh_(graph.check_degree()),
      prefix_(graph.check_degree()),
      total_(graph.variables()) {}

DecodeResult SpaDecoder::decode(std::span<const double> llrs, int max_iter) {
    const std::uint32_t n = g_.variables();
    if (llrs.size() != n) throw SizeMismatch("LLR vector length does not match graph");
    const auto edge_var = g_.edge_variables();
    const auto var_edges = g_.var_edges();
    const std::uint32_t dc = g_.check_degree();
    const std::uint32_t dv = g_.variable_degree();

    DecodeResult res;
    res.codeword.assign(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) res.codeword[v] = llrs[v] > 0.0 ? 1 : 0;
    if (g_.is_codeword(res.codeword)) {
        res.success = true;
        return res;
    }
    for (std::size_t e = 0; e < v2c_.size(); ++e) v2c_[e] = llrs[edge_var[e]];

    for (int it = 1; it <= max_iter; ++it) {
        // Check nodes: leave-one-out tanh products via prefix/suffix sweeps.
        for (std::uint32_t j = 0; j < g_.checks(); ++j) {
            const std::size_t base = std::size_t{j} * dc;
            for (std::uint32_t i = 0; i < dc; ++i) tanh_[i] = std::tanh(0.5 * v2c_[base + i]);
            double acc = 1.0;
            for (std::uint32_t i = 0; i < dc; ++i) {
                prefix_[i] = acc;
                acc *= tanh_[i];
            }
            acc = 1.0;
            for (std::uint32_t i = dc; i-- > 0;) {
                const double t = std::clamp(prefix_[i] * acc, -kTanhMax, kTanhMax);
                c2v_[base + i] = 2.0 * std::atanh(t);
                acc *= tanh_[i];
            }
        }
        // Variable nodes: extrinsic sums and the a-posteriori hard decision.
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto* edges = &var_edges[std::size_t{v} * dv];
            double sum = llrs[v];
            for (std::uint32_t i = 0; i < dv; ++i) sum += c2v_[edges[i]];
            total_[v] = sum;
            for (std::uint32_t i = 0; i < dv; ++i) {
                v2c_[edges[i]] = std::clamp(sum - c2v_[edges[i]], -kLlrMax, kLlrMax);
            }
            res.codeword[v] = sum > 0.0 ? 1 : 0;
        }
        res.iterations = it;
        if (g_.is_codeword(res.codeword)) {
            res.success = true;
            return res;
        }
    }
    return res;
}

}  // namespace smce
