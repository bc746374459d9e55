#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the solvers it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "moduli_lab/mat2.hpp"

namespace oracle {

using moduli_lab::complex;
using moduli_lab::Mat2;

/// Determinant of the 4x4 operator P -> AP - PB by cofactor expansion.
inline complex sylvester_determinant(const Mat2& a, const Mat2& b) {
    std::array<std::array<complex, 4>, 4> m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    m[2 * i + j][2 * k + l] = (j == l ? a(i, k) : 0.0) - (i == k ? b(l, j) : 0.0);
    auto det3 = [&](int skip_row, int skip_col) {
        std::array<std::array<complex, 3>, 3> s{};
        for (int r = 0, rr = 0; r < 4; ++r) {
            if (r == skip_row) continue;
            for (int c = 0, cc = 0; c < 4; ++c) {
                if (c == skip_col) continue;
                s[rr][cc++] = m[r][c];
            }
            ++rr;
        }
        return s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
               s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
    };
    complex d = 0.0;
    for (int c = 0; c < 4; ++c) d += (c % 2 == 0 ? 1.0 : -1.0) * m[0][c] * det3(0, c);
    return d;
}

/// Classification of 2x2 conjugacy: same characteristic polynomial, and a
/// scalar matrix is conjugate only to itself.
inline bool conjugate_by_invariants(const Mat2& a, const Mat2& b, double tol) {
    const double scale = 1.0 + moduli_lab::frobenius_norm(a) + moduli_lab::frobenius_norm(b);
    const complex ta = a(0, 0) + a(1, 1);
    const complex tb = b(0, 0) + b(1, 1);
    const complex da = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const complex db = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    if (std::abs(ta - tb) > tol * scale || std::abs(da - db) > tol * scale * scale) return false;
    auto scalar = [&](const Mat2& m) {
        const double s = tol * moduli_lab::frobenius_norm(m);
        return std::abs(m(0, 1)) <= s && std::abs(m(1, 0)) <= s && std::abs(m(0, 0) - m(1, 1)) <= s;
    };
    return scalar(a) == scalar(b);
}

/// Small-integer matrix of determinant one (product of elementary shears).
template <class Rng>
Mat2 random_unimodular(Rng& rng) {
    std::uniform_int_distribution<int> k(-2, 2);
    Mat2 m = Mat2::identity();
    for (int i = 0; i < 3; ++i) {
        m = m * Mat2{1.0, double(k(rng)), 0.0, 1.0};
        m = m * Mat2{1.0, 0.0, double(k(rng)), 1.0};
    }
    return m;
}

/// Exact 4x4 integer determinant by cofactor expansion.
inline std::int64_t det4(const std::array<std::int64_t, 16>& g) {
    auto at = [&](int r, int c) { return g[4 * r + c]; };
    std::int64_t d = 0;
    for (int c0 = 0; c0 < 4; ++c0) {
        std::int64_t minor = 0;
        std::array<int, 3> cols{};
        for (int c = 0, k = 0; c < 4; ++c)
            if (c != c0) cols[k++] = c;
        minor = at(1, cols[0]) * (at(2, cols[1]) * at(3, cols[2]) - at(2, cols[2]) * at(3, cols[1])) -
                at(1, cols[1]) * (at(2, cols[0]) * at(3, cols[2]) - at(2, cols[2]) * at(3, cols[0])) +
                at(1, cols[2]) * (at(2, cols[0]) * at(3, cols[1]) - at(2, cols[1]) * at(3, cols[0]));
        d += (c0 % 2 == 0 ? 1 : -1) * at(0, c0) * minor;
    }
    return d;
}

/// Formal product of truncated scalar series.
inline std::vector<complex> series_mul(const std::vector<complex>& a, const std::vector<complex>& b, std::size_t order) {
    std::vector<complex> c(order + 1, 0.0);
    for (std::size_t i = 0; i < a.size() && i <= order; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// Sorted-angle maximal gap on the circle, computed directly in floating point.
inline double angular_gap(std::vector<double> angles) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    if (angles.empty()) return two_pi;
    for (auto& a : angles) {
        a = std::fmod(a, two_pi);
        if (a < 0) a += two_pi;
    }
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + two_pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap;
}

/// All g in SL4(Z) with |entries| <= bound and (g11 + A g21)^{-1}(g12 + A g22) = B
/// within tol, enumerated over the left blocks (g11, g21) instead of the right
/// ones: g22 = (Im A)^{-1} Im N and g12 = Re N - Re(A) g22 with N = (g11 + A g21) B.
inline std::vector<std::array<std::int64_t, 16>> torus_equivalences(const Mat2& a, const Mat2& b, int bound, double tol) {
    std::vector<std::array<std::int64_t, 16>> out;
    const double ia[4] = {a[0].imag(), a[1].imag(), a[2].imag(), a[3].imag()};
    const double dia = ia[0] * ia[3] - ia[1] * ia[2];
    const double ia_inv[4] = {ia[3] / dia, -ia[1] / dia, -ia[2] / dia, ia[0] / dia};
    const int w = 2 * bound + 1;
    const int total = w * w * w * w;
    auto decode = [&](int code, std::int64_t* m) {
        for (int k = 0; k < 4; ++k) {
            m[k] = code % w - bound;
            code /= w;
        }
    };
    for (int c1 = 0; c1 < total; ++c1) {
        std::int64_t g11[4];
        decode(c1, g11);
        for (int c2 = 0; c2 < total; ++c2) {
            std::int64_t g21[4];
            decode(c2, g21);
            const Mat2 m = Mat2{double(g11[0]), double(g11[1]), double(g11[2]), double(g11[3])} +
                           a * Mat2{double(g21[0]), double(g21[1]), double(g21[2]), double(g21[3])};
            const Mat2 n = m * b;
            std::int64_t g22[4], g12[4];
            bool ok = true;
            for (int i = 0; i < 2 && ok; ++i)
                for (int j = 0; j < 2 && ok; ++j) {
                    const double x = ia_inv[2 * i] * n(0, j).imag() + ia_inv[2 * i + 1] * n(1, j).imag();
                    const double r = std::round(x);
                    if (std::abs(x - r) > 1e-6 || std::abs(r) > bound) ok = false;
                    g22[2 * i + j] = static_cast<std::int64_t>(r);
                }
            for (int i = 0; i < 2 && ok; ++i)
                for (int j = 0; j < 2 && ok; ++j) {
                    const double x = n(i, j).real() - (a(i, 0).real() * double(g22[j]) + a(i, 1).real() * double(g22[2 + j]));
                    const double r = std::round(x);
                    if (std::abs(x - r) > 1e-6 || std::abs(r) > bound) ok = false;
                    g12[2 * i + j] = static_cast<std::int64_t>(r);
                }
            if (!ok) continue;
            std::array<std::int64_t, 16> g{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    g[4 * i + j] = g11[2 * i + j];
                    g[4 * i + 2 + j] = g12[2 * i + j];
                    g[4 * (2 + i) + j] = g21[2 * i + j];
                    g[4 * (2 + i) + 2 + j] = g22[2 * i + j];
                }
            if (det4(g) != 1) continue;
            const Mat2 q = Mat2{double(g12[0]), double(g12[1]), double(g12[2]), double(g12[3])} +
                           a * Mat2{double(g22[0]), double(g22[1]), double(g22[2]), double(g22[3])};
            const complex dm = m[0] * m[3] - m[1] * m[2];
            if (std::abs(dm) < 1e-12) continue;
            const Mat2 minv{m[3] / dm, -m[1] / dm, -m[2] / dm, m[0] / dm};
            const Mat2 d = minv * q - b;
            double norm = 0.0;
            for (int k = 0; k < 4; ++k) norm += std::norm(d[k]);
            if (std::sqrt(norm) <= tol) out.push_back(g);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oracle
