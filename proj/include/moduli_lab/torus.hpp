#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "moduli_lab/mat2.hpp"
#include "moduli_lab/numerics.hpp"

namespace moduli_lab::torus {

/// Period domain: det Im A > 0.
inline bool in_moduli(const Mat2& a) { return det(imag_part(a)).real() > 0.0; }

class TorusPoint {
public:
    explicit TorusPoint(const Mat2& period) : period_(period) {
        if (!in_moduli(period)) throw std::domain_error("TorusPoint: det Im A must be positive");
    }
    const Mat2& period() const { return period_; }

private:
    Mat2 period_;
};

/// Element of SL4(Z), row-major, with 2x2 blocks g11 g12 / g21 g22.
class IntMat4 {
public:
    using Entries = std::array<std::int64_t, 16>;
    using Block = std::array<std::int64_t, 4>;

    explicit IntMat4(const Entries& e) : e_(e) {
        if (determinant(e) != 1) throw std::domain_error("IntMat4: determinant must be 1");
    }

    static IntMat4 identity() {
        Entries e{};
        for (int i = 0; i < 4; ++i) e[5 * i] = 1;
        return IntMat4(e);
    }

    /// (z, w) -> (w, z) on both halves: g11 = g22 = antidiag(1, 1), g12 = g21 = 0.
    static IntMat4 swap() {
        Entries e{};
        e[1] = e[4] = e[11] = e[14] = 1;
        return IntMat4(e);
    }

    static IntMat4 from_blocks(const Block& g11, const Block& g12, const Block& g21, const Block& g22) {
        Entries e{};
        const std::array<const Block*, 4> blocks{&g11, &g12, &g21, &g22};
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 4; ++k) e[4 * (2 * (b / 2) + k / 2) + 2 * (b % 2) + k % 2] = (*blocks[b])[k];
        return IntMat4(e);
    }

    std::int64_t operator()(int r, int c) const { return e_[4 * r + c]; }
    const Entries& entries() const { return e_; }

    /// Block (bi, bj), bi, bj in {0, 1}, as a complex matrix.
    Mat2 block(int bi, int bj) const {
        const int r = 2 * bi, c = 2 * bj;
        return {double((*this)(r, c)), double((*this)(r, c + 1)), double((*this)(r + 1, c)), double((*this)(r + 1, c + 1))};
    }

    std::int64_t max_abs() const {
        std::int64_t m = 0;
        for (auto x : e_) m = std::max(m, x < 0 ? -x : x);
        return m;
    }

    IntMat4 operator-() const {
        Entries e = e_;
        for (auto& x : e) x = -x;
        return IntMat4(e);
    }

    friend IntMat4 operator*(const IntMat4& x, const IntMat4& y) {
        Entries e{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) e[4 * i + j] += x(i, k) * y(k, j);
        return IntMat4(e);
    }

    friend bool operator==(const IntMat4&, const IntMat4&) = default;

    /// Representative of {g, -g} whose first nonzero entry is positive.
    IntMat4 sign_normalized() const {
        for (auto x : e_)
            if (x != 0) return x > 0 ? *this : -*this;
        return *this;
    }

    std::int64_t l1_distance_to_identity() const {
        std::int64_t d = 0;
        for (int k = 0; k < 16; ++k) {
            const std::int64_t x = e_[k] - (k % 5 == 0 ? 1 : 0);
            d += x < 0 ? -x : x;
        }
        return d;
    }

    /// Fraction-free (Bareiss) elimination, exact for the small entries used here.
    static std::int64_t determinant(const Entries& e) {
        std::array<__int128, 16> m{};
        for (int k = 0; k < 16; ++k) m[k] = e[k];
        __int128 prev = 1;
        int sign = 1;
        for (int k = 0; k < 3; ++k) {
            if (m[5 * k] == 0) {
                int r = k + 1;
                while (r < 4 && m[4 * r + k] == 0) ++r;
                if (r == 4) return 0;
                for (int c = 0; c < 4; ++c) std::swap(m[4 * k + c], m[4 * r + c]);
                sign = -sign;
            }
            for (int i = k + 1; i < 4; ++i)
                for (int j = k + 1; j < 4; ++j) m[4 * i + j] = (m[4 * i + j] * m[5 * k] - m[4 * i + k] * m[4 * k + j]) / prev;
            prev = m[5 * k];
        }
        return static_cast<std::int64_t>(sign * m[15]);
    }

private:
    Entries e_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMat4& g) {
    os << '[';
    for (int r = 0; r < 4; ++r) {
        os << (r ? ",[" : "[");
        for (int c = 0; c < 4; ++c) os << (c ? "," : "") << g(r, c);
        os << ']';
    }
    return os << ']';
}

/// Canonical order on witnesses: the sign-normalized representative closest to
/// Id4 (L1), then lexicographic, then the normalized sign before its negative.
inline bool canonical_less(const IntMat4& x, const IntMat4& y) {
    const IntMat4 nx = x.sign_normalized(), ny = y.sign_normalized();
    return std::make_tuple(nx.l1_distance_to_identity(), nx.entries(), !(nx == x)) <
           std::make_tuple(ny.l1_distance_to_identity(), ny.entries(), !(ny == y));
}

/// Right action A . g = (g11 + A g21)^{-1} (g12 + A g22), so act(act(A, g), h) = act(A, g h).
inline TorusPoint act(const TorusPoint& a, const IntMat4& g) {
    const Mat2& p = a.period();
    const Mat2 m = g.block(0, 0) + p * g.block(1, 0);
    const Mat2 n = g.block(0, 1) + p * g.block(1, 1);
    const double scale = frobenius_norm(m);
    if (std::abs(det(m)) <= 1e-14 * scale * scale) throw std::domain_error("act: g11 + A g21 is singular");
    return TorusPoint(*inverse(m) * n);
}

/// Linear part of the induced biholomorphism C^2 -> C^2, (g11 + A g21)^{-1}.
inline Mat2 linear_part(const TorusPoint& a, const IntMat4& g) {
    const auto inv = inverse(g.block(0, 0) + a.period() * g.block(1, 0));
    if (!inv) throw std::domain_error("linear_part: g11 + A g21 is singular");
    return *inv;
}

inline double act_residual(const TorusPoint& a, const IntMat4& g, const TorusPoint& b) {
    return frobenius_norm(act(a, g).period() - b.period());
}

inline constexpr int max_search_bound = 5;

namespace detail {

using Real2 = std::array<double, 4>;

inline Real2 real_product(const Real2& x, const Real2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline Real2 re(const Mat2& a) { return {a[0].real(), a[1].real(), a[2].real(), a[3].real()}; }
inline Real2 im(const Mat2& a) { return {a[0].imag(), a[1].imag(), a[2].imag(), a[3].imag()}; }

/// Rounds every entry of x if all are within slack of an integer bounded by `bound`.
inline bool round_block(const Real2& x, double slack, int bound, IntMat4::Block& out) {
    for (int k = 0; k < 4; ++k) {
        const double r = std::round(x[k]);
        if (std::abs(x[k] - r) > slack || std::abs(r) > bound) return false;
        out[k] = static_cast<std::int64_t>(r);
    }
    return true;
}

}  // namespace detail

/// Every g in SL4(Z) with entries bounded by `bound` and |act(A, g) - B|_F <= tol,
/// in canonical order.
///
/// (g11 + A g21) B = g12 + A g22 splits, for fixed integer g21 = R and
/// g22 = S, into g11 = Im(AS - ARB) (Im B)^{-1} and g12 = g11 Re B - Re(AS - ARB).
/// Enumerating R and S and rounding the solved blocks is therefore exhaustive
/// within the bound. An empty result means "not found within bound".
inline std::vector<IntMat4> equivalences(const TorusPoint& a, const TorusPoint& b, int bound, double tol = default_tol) {
    if (bound < 1 || bound > max_search_bound) throw std::invalid_argument("equivalences: bound must be in [1, 5]");
    if (!(tol >= 0.0)) throw std::invalid_argument("equivalences: tol must be non-negative");
    using detail::Real2;
    const Mat2& pa = a.period();
    const Mat2& pb = b.period();
    const Mat2 im_b_inv = *inverse(imag_part(pb));
    const Real2 im_b_inv_r = detail::re(im_b_inv);
    const Real2 re_b = detail::re(pb);

    std::vector<IntMat4::Block> blocks;
    for (std::int64_t x0 = -bound; x0 <= bound; ++x0)
        for (std::int64_t x1 = -bound; x1 <= bound; ++x1)
            for (std::int64_t x2 = -bound; x2 <= bound; ++x2)
                for (std::int64_t x3 = -bound; x3 <= bound; ++x3) blocks.push_back({x0, x1, x2, x3});

    struct Solved {
        Real2 im_part;  // Im(.) (Im B)^{-1}
        Real2 re_part;  // Re(.)
    };
    std::vector<Solved> from_r, from_s;
    from_r.reserve(blocks.size());
    from_s.reserve(blocks.size());
    for (const auto& blk : blocks) {
        const Mat2 m{double(blk[0]), double(blk[1]), double(blk[2]), double(blk[3])};
        const Mat2 arb = pa * m * pb;
        const Mat2 as = pa * m;
        from_r.push_back({detail::real_product(detail::im(arb), im_b_inv_r), detail::re(arb)});
        from_s.push_back({detail::real_product(detail::im(as), im_b_inv_r), detail::re(as)});
    }

    const double slack = std::max(1e-6, 100.0 * tol);
    std::vector<IntMat4> found;
    IntMat4::Block g11{}, g12{};
    for (std::size_t ir = 0; ir < blocks.size(); ++ir) {
        const Solved& r = from_r[ir];
        for (std::size_t is = 0; is < blocks.size(); ++is) {
            const Solved& s = from_s[is];
            const Real2 p{s.im_part[0] - r.im_part[0], s.im_part[1] - r.im_part[1], s.im_part[2] - r.im_part[2],
                          s.im_part[3] - r.im_part[3]};
            if (!detail::round_block(p, slack, bound, g11)) continue;
            const Real2 g11r{double(g11[0]), double(g11[1]), double(g11[2]), double(g11[3])};
            Real2 q = detail::real_product(g11r, re_b);
            for (int k = 0; k < 4; ++k) q[k] -= s.re_part[k] - r.re_part[k];
            if (!detail::round_block(q, slack, bound, g12)) continue;
            IntMat4::Entries e{};
            const std::array<const IntMat4::Block*, 4> parts{&g11, &g12, &blocks[ir], &blocks[is]};
            for (int blk = 0; blk < 4; ++blk)
                for (int k = 0; k < 4; ++k) e[4 * (2 * (blk / 2) + k / 2) + 2 * (blk % 2) + k % 2] = (*parts[blk])[k];
            if (IntMat4::determinant(e) != 1) continue;
            const IntMat4 g(e);
            try {
                if (act_residual(a, g, b) <= tol) found.push_back(g);
            } catch (const std::domain_error&) {
            }
        }
    }
    std::sort(found.begin(), found.end(), canonical_less);
    return found;
}

/// Canonical witness of B = A . g within the bound, if any.
inline std::optional<IntMat4> equivalent(const TorusPoint& a, const TorusPoint& b, int bound, double tol = default_tol) {
    auto all = equivalences(a, b, bound, tol);
    if (all.empty()) return std::nullopt;
    return all.front();
}

/// Linear parts of automorphisms: {g : A . g = A}; always contains +-Id4.
inline std::vector<IntMat4> automorphisms(const TorusPoint& a, int bound, double tol = default_tol) {
    return equivalences(a, a, bound, tol);
}

// Flat functions and the two period-matrix families.

inline double flat_h(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

/// sum_p h(t + p) h(1 - t - p); only p = -floor(t) can contribute, neighbours kept for safety.
inline double flat_f(double t) {
    const double p0 = -std::floor(t);
    double s = 0.0;
    for (double p = p0 - 1.0; p <= p0 + 1.0; p += 1.0) s += flat_h(t + p) * flat_h(1.0 - t - p);
    return s;
}

enum class Variant { transpose_split, interval_alternating };

inline const char* to_string(Variant v) {
    return v == Variant::transpose_split ? "transpose_split" : "interval_alternating";
}

/// b = alpha * g, c = beta * g, with g(t) = h(|t|) (transpose_split) or
/// h(|t|) f(log|t|) (interval_alternating, zeros at t_n = e^{-n}).
struct FlatFunctionParams {
    Variant variant = Variant::transpose_split;
    double alpha = std::numbers::pi / 2.0;
    double beta = 1.0;

    static FlatFunctionParams defaults(Variant v) { return {v, std::numbers::pi / 2.0, 1.0}; }

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
            throw std::invalid_argument("FlatFunctionParams: alpha and beta must be positive");
        if (variant == Variant::transpose_split && !(alpha > beta))
            throw std::invalid_argument("FlatFunctionParams: transpose_split needs alpha > beta so that b > c > 0");
        if (variant == Variant::interval_alternating && alpha == beta)
            throw std::invalid_argument("FlatFunctionParams: interval_alternating needs alpha != beta");
    }
};

inline double flat_profile(double t, const FlatFunctionParams& p) {
    const double r = std::abs(t);
    if (p.variant == Variant::transpose_split) return flat_h(r);
    return r == 0.0 ? 0.0 : flat_h(r) * flat_f(std::log(r));
}

inline double flat_b(double t, const FlatFunctionParams& p) { return p.alpha * flat_profile(t, p); }
inline double flat_c(double t, const FlatFunctionParams& p) { return p.beta * flat_profile(t, p); }

/// t_n = e^{-n}.
inline double flat_zero(int n) { return std::exp(-double(n)); }

/// [[i + t, b(t)], [c(t), i + t]].
inline TorusPoint omega1(double t, const FlatFunctionParams& p) {
    const complex d{t, 1.0};
    return TorusPoint(Mat2{d, flat_b(t, p), flat_c(t, p), d});
}

/// Whether omega2 takes the transpose of omega1 at t.
inline bool omega2_transposed(double t, const FlatFunctionParams& p) {
    if (p.variant == Variant::transpose_split) return t > 0.0;
    if (t == 0.0) return false;
    // |t| in [t_{2n}, t_{2n+1}] keeps omega1; [t_{2n-1}, t_{2n}] transposes.
    const double n = std::floor(-std::log(std::abs(t)));
    return std::fmod(std::abs(n), 2.0) == 1.0;
}

inline TorusPoint omega2(double t, const FlatFunctionParams& p) {
    const TorusPoint w = omega1(t, p);
    return omega2_transposed(t, p) ? TorusPoint(w.period().transpose()) : w;
}

/// Largest Ridders estimate of |b^(k)|, |c^(k)| over k = 1..max_order at t.
inline DerivativeEstimate flatness_defect(double t, const FlatFunctionParams& p, int max_order = 8, double h0 = 1e-3) {
    DerivativeEstimate worst{0.0, 0.0};
    for (int k = 1; k <= max_order; ++k) {
        for (int which = 0; which < 2; ++which) {
            const auto fn = [&](double x) { return which ? flat_c(x, p) : flat_b(x, p); };
            const auto d = ridders_derivative(fn, t, k, h0);
            if (std::abs(d.value) >= std::abs(worst.value)) worst = {d.value, d.error};
        }
    }
    return worst;
}

}  // namespace moduli_lab::torus
