#include "smce/qc_ring.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "smce/error.hpp"

namespace smce {

namespace {

std::size_t word_count(std::size_t nbits) { return (nbits + 63) / 64; }

bool test_bit(const std::vector<std::uint64_t>& w, std::size_t i) { return (w[i / 64] >> (i % 64)) & 1u; }
void flip_bit(std::vector<std::uint64_t>& w, std::size_t i) { w[i / 64] ^= std::uint64_t{1} << (i % 64); }

void clear_tail(std::vector<std::uint64_t>& w, std::size_t nbits) {
    if (nbits % 64 != 0 && !w.empty()) w[nbits / 64] &= (std::uint64_t{1} << (nbits % 64)) - 1;
    for (std::size_t i = word_count(nbits); i < w.size(); ++i) w[i] = 0;
}

// dst ^= src << shift (plain polynomial shift, dst must be large enough).
void xor_shifted(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::size_t shift) {
    const std::size_t ws = shift / 64;
    const unsigned bs = shift % 64;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] == 0) continue;
        if (i + ws < dst.size()) dst[i + ws] ^= src[i] << bs;
        if (bs != 0 && i + ws + 1 < dst.size()) dst[i + ws + 1] ^= src[i] >> (64 - bs);
    }
}

// nbits bits of ext starting at bit offset, written to out[0..word_count(nbits)).
void extract_bits(const std::vector<std::uint64_t>& ext, std::size_t offset, std::size_t nbits,
                  std::vector<std::uint64_t>& out) {
    const std::size_t ws = offset / 64;
    const unsigned bs = offset % 64;
    const std::size_t nw = word_count(nbits);
    for (std::size_t i = 0; i < nw; ++i) {
        std::uint64_t lo = ext[ws + i] >> bs;
        std::uint64_t hi = 0;
        if (bs != 0 && ws + i + 1 < ext.size()) hi = ext[ws + i + 1] << (64 - bs);
        out[i] = lo | hi;
    }
    clear_tail(out, nbits);
}

int degree(const std::vector<std::uint64_t>& w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] != 0) return static_cast<int>(i * 64 + 63 - std::countl_zero(w[i]));
    }
    return -1;
}

void check_same_size(const CirculantPoly& a, const CirculantPoly& b) {
    if (a.size() != b.size()) {
        throw SizeMismatch("circulant size mismatch: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
    }
}

}  // namespace

CirculantPoly::CirculantPoly(std::uint32_t r) : r_(r) {
    if (r == 0) throw InvalidParams("circulant size must be positive");
}

CirculantPoly CirculantPoly::one(std::uint32_t r) { return monomial(r, 0); }

CirculantPoly CirculantPoly::monomial(std::uint32_t r, std::uint32_t exponent) {
    return from_support(r, {exponent % r});
}

CirculantPoly CirculantPoly::from_support(std::uint32_t r, std::vector<std::uint32_t> support) {
    CirculantPoly p(r);
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
        throw InvalidParams("duplicate support index");
    }
    if (!support.empty() && support.back() >= r) throw InvalidParams("support index out of range");
    p.support_ = std::move(support);
    p.sparse_ = true;
    p.normalize();
    return p;
}

CirculantPoly CirculantPoly::from_bits(std::span<const std::uint8_t> bits) {
    CirculantPoly p(static_cast<std::uint32_t>(bits.size()));
    p.sparse_ = false;
    p.words_.assign(word_count(bits.size()), 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] & 1u) flip_bit(p.words_, i);
    }
    p.normalize();
    return p;
}

CirculantPoly CirculantPoly::from_words(std::uint32_t r, std::vector<std::uint64_t> words) {
    CirculantPoly p(r);
    if (words.size() != word_count(r)) throw SizeMismatch("word count does not match circulant size");
    clear_tail(words, r);
    p.sparse_ = false;
    p.words_ = std::move(words);
    p.normalize();
    return p;
}

void CirculantPoly::normalize() {
    if (sparse_) {
        if (support_.size() <= r_ / 8) return;
        words_.assign(word_count(r_), 0);
        for (auto i : support_) flip_bit(words_, i);
        support_.clear();
        sparse_ = false;
        return;
    }
    std::uint32_t w = 0;
    for (auto x : words_) w += static_cast<std::uint32_t>(std::popcount(x));
    if (w > r_ / 8) return;
    support_.clear();
    support_.reserve(w);
    for (std::uint32_t i = 0; i < r_; ++i) {
        if (test_bit(words_, i)) support_.push_back(i);
    }
    words_.clear();
    sparse_ = true;
}

std::uint32_t CirculantPoly::weight() const {
    if (sparse_) return static_cast<std::uint32_t>(support_.size());
    std::uint32_t w = 0;
    for (auto x : words_) w += static_cast<std::uint32_t>(std::popcount(x));
    return w;
}

bool CirculantPoly::coeff(std::uint32_t i) const {
    if (i >= r_) return false;
    if (sparse_) return std::binary_search(support_.begin(), support_.end(), i);
    return test_bit(words_, i);
}

std::vector<std::uint32_t> CirculantPoly::support() const {
    if (sparse_) return support_;
    std::vector<std::uint32_t> s;
    for (std::uint32_t i = 0; i < r_; ++i) {
        if (test_bit(words_, i)) s.push_back(i);
    }
    return s;
}

Bits CirculantPoly::to_bits() const {
    Bits b(r_, 0);
    if (sparse_) {
        for (auto i : support_) b[i] = 1;
    } else {
        for (std::uint32_t i = 0; i < r_; ++i) b[i] = test_bit(words_, i) ? 1 : 0;
    }
    return b;
}

std::vector<std::uint64_t> CirculantPoly::words() const {
    if (!sparse_) return words_;
    std::vector<std::uint64_t> w(word_count(r_), 0);
    for (auto i : support_) flip_bit(w, i);
    return w;
}

bool operator==(const CirculantPoly& a, const CirculantPoly& b) {
    if (a.r_ != b.r_) return false;
    if (a.sparse_ && b.sparse_) return a.support_ == b.support_;
    return a.words() == b.words();
}

CirculantPoly cyc_add(const CirculantPoly& a, const CirculantPoly& b) {
    check_same_size(a, b);
    auto w = a.words();
    const auto bw = b.words();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= bw[i];
    return CirculantPoly::from_words(a.size(), std::move(w));
}

CirculantPoly cyc_mul(const CirculantPoly& a, const CirculantPoly& b) {
    check_same_size(a, b);
    const std::uint32_t r = a.size();
    if (a.is_zero() || b.is_zero()) return CirculantPoly::zero(r);

    // Accumulate x^s * dense over the support of the lighter operand.
    const bool a_lighter = a.weight() <= b.weight();
    const auto shifts = a_lighter ? a.support() : b.support();
    const auto dense = a_lighter ? b.words() : a.words();

    // ext = dense || dense, so a cyclic rotation is a plain bit extraction.
    std::vector<std::uint64_t> ext(word_count(2 * std::size_t{r}) + 1, 0);
    std::copy(dense.begin(), dense.end(), ext.begin());
    xor_shifted(ext, dense, r);

    std::vector<std::uint64_t> acc(word_count(r), 0);
    std::vector<std::uint64_t> rot(word_count(r), 0);
    for (auto s : shifts) {
        // bit j of x^s * d is d[(j - s) mod r] = ext[j + r - s]
        extract_bits(ext, (r - s) % r, r, rot);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= rot[i];
    }
    return CirculantPoly::from_words(r, std::move(acc));
}

std::optional<CirculantPoly> cyc_inverse(const CirculantPoly& a) {
    const std::uint32_t r = a.size();
    if (a.is_zero()) return std::nullopt;

    // Extended Euclid on (x^r + 1, a); invariant s_i * a == r_i mod (x^r + 1).
    const std::size_t nw = word_count(2 * std::size_t{r} + 2);
    std::vector<std::uint64_t> r0(nw, 0), r1(nw, 0), s0(nw, 0), s1(nw, 0);
    flip_bit(r0, 0);
    flip_bit(r0, r);
    const auto aw = a.words();
    std::copy(aw.begin(), aw.end(), r1.begin());
    flip_bit(s1, 0);

    int d1 = degree(r1);
    while (d1 >= 0) {
        int d0 = degree(r0);
        while (d0 >= d1) {
            const auto shift = static_cast<std::size_t>(d0 - d1);
            xor_shifted(r0, r1, shift);
            xor_shifted(s0, s1, shift);
            d0 = degree(r0);
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
        d1 = d0;
    }
    if (degree(r0) != 0) return std::nullopt;

    std::vector<std::uint64_t> inv(word_count(r), 0);
    const int ds = degree(s0);
    for (int i = 0; i <= ds; ++i) {
        if (test_bit(s0, static_cast<std::size_t>(i))) flip_bit(inv, static_cast<std::size_t>(i) % r);
    }
    return CirculantPoly::from_words(r, std::move(inv));
}

CirculantPoly cyc_transpose(const CirculantPoly& a) {
    const std::uint32_t r = a.size();
    auto s = a.support();
    for (auto& j : s) j = (r - j) % r;
    if (a.is_sparse()) return CirculantPoly::from_support(r, std::move(s));
    std::vector<std::uint64_t> w(word_count(r), 0);
    for (auto j : s) flip_bit(w, j);
    return CirculantPoly::from_words(r, std::move(w));
}

}  // namespace smce
