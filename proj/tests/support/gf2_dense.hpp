#pragma once

// Dense GF(2) matrices for cross-checking circulant arithmetic.

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<std::uint8_t>>;

// Row i is the first row shifted right by i.
inline Matrix circulant(const std::vector<std::uint8_t>& first_row) {
    const std::size_t r = first_row.size();
    Matrix m(r, std::vector<std::uint8_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) m[i][(i + j) % r] = first_row[j];
    return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix c(n, std::vector<std::uint8_t>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l])
                for (std::size_t j = 0; j < m; ++j) c[i][j] ^= b[l][j];
    return c;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] ^= b[i][j];
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.empty() ? 0 : a[0].size(), std::vector<std::uint8_t>(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// Gauss-Jordan elimination; empty when singular.
inline std::optional<Matrix> inverse(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && !a[piv][col]) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row != col && a[row][col]) {
                for (std::size_t j = 0; j < n; ++j) {
                    a[row][j] ^= a[col][j];
                    inv[row][j] ^= inv[col][j];
                }
            }
        }
    }
    return inv;
}

// u * M over GF(2) for a row vector u.
inline std::vector<std::uint8_t> row_times(const std::vector<std::uint8_t>& u, const Matrix& m) {
    std::vector<std::uint8_t> out(m.empty() ? 0 : m[0].size(), 0);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i])
            for (std::size_t j = 0; j < out.size(); ++j) out[j] ^= m[i][j];
    return out;
}

}  // namespace oracle
