#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace moduli_lab::detail {

using rational = boost::multiprecision::cpp_rational;

/// Exact complex number with rational real and imaginary parts.
struct gaussian_rational {
    rational re{0};
    rational im{0};

    gaussian_rational() = default;
    gaussian_rational(rational r, rational i = rational{0}) : re(std::move(r)), im(std::move(i)) {}

    // Every finite double is a dyadic rational, so this conversion is exact.
    static gaussian_rational from(std::complex<double> z) {
        return {rational(z.real()), rational(z.imag())};
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    bool is_zero() const { return re == 0 && im == 0; }

    friend gaussian_rational operator+(const gaussian_rational& a, const gaussian_rational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend gaussian_rational operator-(const gaussian_rational& a, const gaussian_rational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend gaussian_rational operator-(const gaussian_rational& a) { return {-a.re, -a.im}; }
    friend gaussian_rational operator*(const gaussian_rational& a, const gaussian_rational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend gaussian_rational operator/(const gaussian_rational& a, const gaussian_rational& b) {
        const rational n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
};

/// Dyadic with at most `frac_bits` fractional bits and modest magnitude.
inline bool is_short_dyadic(double x, int frac_bits = 40) {
    if (!std::isfinite(x) || std::abs(x) >= 1048576.0) return false;
    const double scaled = std::ldexp(x, frac_bits);
    return scaled == std::nearbyint(scaled);
}

template <class T>
using dense = std::vector<std::vector<T>>;

/// Reduced row echelon form in place. `negligible(x)` decides zero entries;
/// `magnitude(x)` ranks pivot candidates. Returns the pivot column of each
/// nonzero row.
template <class T, class Negligible, class Magnitude>
std::vector<std::size_t> rref(dense<T>& m, Negligible negligible, Magnitude magnitude) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = rows;
        double best_mag = 0.0;
        for (std::size_t i = r; i < rows; ++i) {
            if (negligible(m[i][c])) continue;
            const double mag = magnitude(m[i][c]);
            if (best == rows || mag > best_mag) {
                best = i;
                best_mag = mag;
            }
        }
        if (best == rows) {
            for (std::size_t i = r; i < rows; ++i) m[i][c] = T{};
            continue;
        }
        std::swap(m[r], m[best]);
        const T inv_pivot = T{1} / m[r][c];
        for (std::size_t j = 0; j < cols; ++j) m[r][j] = m[r][j] * inv_pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || negligible(m[i][c])) {
                if (i != r) m[i][c] = T{};
                continue;
            }
            const T f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
            m[i][c] = T{};
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

/// Kernel basis of a matrix already in RREF with the given pivots.
template <class T>
dense<T> kernel_from_rref(const dense<T>& m, const std::vector<std::size_t>& pivots, std::size_t cols) {
    dense<T> basis;
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(cols, T{});
        v[f] = T{1};
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace moduli_lab::detail
