#pragma once

// Arithmetic in GF(2)[x]/(x^r - 1), i.e. on r x r binary circulant matrices
// identified with their first row.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace smce {

using Bits = std::vector<std::uint8_t>;  // one 0/1 entry per position

/// Binary circulant block of size r, stored by its first row.
///
/// Low-weight rows (weight <= r/8) are kept as a sorted support list, others
/// as a bit-packed row. The choice is internal: equality and every operation
/// only look at the represented polynomial.
class CirculantPoly {
public:
    explicit CirculantPoly(std::uint32_t r);

    static CirculantPoly zero(std::uint32_t r) { return CirculantPoly(r); }
    static CirculantPoly one(std::uint32_t r);
    static CirculantPoly monomial(std::uint32_t r, std::uint32_t exponent);

    /// Throws InvalidParams on duplicate or out-of-range indices.
    static CirculantPoly from_support(std::uint32_t r, std::vector<std::uint32_t> support);
    static CirculantPoly from_bits(std::span<const std::uint8_t> bits);
    static CirculantPoly from_words(std::uint32_t r, std::vector<std::uint64_t> words);

    std::uint32_t size() const { return r_; }
    std::uint32_t weight() const;
    bool is_zero() const { return weight() == 0; }
    bool is_sparse() const { return sparse_; }
    bool coeff(std::uint32_t i) const;

    std::vector<std::uint32_t> support() const;
    Bits to_bits() const;
    /// Bit-packed first row, bit i in word i / 64; unused high bits are zero.
    std::vector<std::uint64_t> words() const;

    friend bool operator==(const CirculantPoly& a, const CirculantPoly& b);

private:
    void normalize();

    std::uint32_t r_;
    bool sparse_ = true;
    std::vector<std::uint32_t> support_;
    std::vector<std::uint64_t> words_;
};

CirculantPoly cyc_add(const CirculantPoly& a, const CirculantPoly& b);
CirculantPoly cyc_mul(const CirculantPoly& a, const CirculantPoly& b);
/// nullopt when gcd(a(x), x^r - 1) != 1.
std::optional<CirculantPoly> cyc_inverse(const CirculantPoly& a);
/// Transpose of the circulant matrix: exponent j maps to (r - j) mod r.
CirculantPoly cyc_transpose(const CirculantPoly& a);

inline CirculantPoly operator+(const CirculantPoly& a, const CirculantPoly& b) { return cyc_add(a, b); }
inline CirculantPoly operator*(const CirculantPoly& a, const CirculantPoly& b) { return cyc_mul(a, b); }

}  // namespace smce
