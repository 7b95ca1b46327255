#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smce/keys.hpp"

namespace smce {

using LlrVector = std::vector<double>;

inline constexpr double kLlrMax = 50.0;

/// Lambda_i = 2 x_i / sigma^2 clamped to +-kLlrMax; positive favors bit 1.
/// Throws InvalidParams for sigma <= 0.
LlrVector llr_init(std::span<const double> samples, double sigma);

/// Tanner graph of H = [H_0 | ... | H_{n0-1}]: check j touches variable
/// b*r + (j + s) mod r for every s in the support of H_b.
class TannerGraph {
public:
    explicit TannerGraph(const PrivateKey& sk);

    std::uint32_t variables() const { return n_; }
    std::uint32_t checks() const { return r_; }
    std::uint32_t check_degree() const { return d_c_; }
    std::uint32_t variable_degree() const { return d_v_; }
    std::size_t edges() const { return edge_var_.size(); }

    /// Variable of each edge; edges of check j are [j*d_c, (j+1)*d_c).
    std::span<const std::uint32_t> edge_variables() const { return edge_var_; }
    /// Edges of variable v are var_edges()[v*d_v .. (v+1)*d_v).
    std::span<const std::uint32_t> var_edges() const { return var_edge_; }

    bool is_codeword(std::span<const std::uint8_t> bits) const;

private:
    std::uint32_t n_, r_, d_v_, d_c_;
    std::vector<std::uint32_t> edge_var_;
    std::vector<std::uint32_t> var_edge_;
};

struct DecodeResult {
    bool success = false;
    int iterations = 0;  // 0 when the channel hard decision already is a codeword
    Bits codeword;       // last hard decision, valid codeword iff success
};

/// Flooding LLR sum-product decoder. Holds per-edge message buffers, so one
/// instance must not be shared between concurrent decodes.
class SpaDecoder {
public:
    explicit SpaDecoder(const TannerGraph& graph);

    /// Throws SizeMismatch if llrs.size() != graph.variables().
    DecodeResult decode(std::span<const double> llrs, int max_iter);

private:
    const TannerGraph& g_;
    std::vector<double> v2c_, c2v_, tanh_, prefix_, total_;
};

}  // namespace smce
