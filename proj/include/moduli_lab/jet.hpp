#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "moduli_lab/mat2.hpp"

namespace moduli_lab::jet {

inline constexpr int default_order = 12;
inline constexpr double zero_tol = 1e-12;

/// Truncated power series sum_k c_k z^k, k <= order, with coefficients in C^dim.
class Jet {
public:
    using Coefficients = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic>;

    explicit Jet(int dim = 1, int order = default_order) {
        if (dim < 1) throw std::invalid_argument("Jet: dim must be positive");
        if (order < 1) throw std::invalid_argument("Jet: truncation order must be at least 1");
        c_ = Coefficients::Zero(dim, order + 1);
    }

    /// Scalar jet from its first coefficients; missing ones are zero, extra ones dropped.
    static Jet scalar(const std::vector<complex>& coeffs, int order = default_order) {
        Jet j(1, order);
        for (std::size_t k = 0; k < coeffs.size() && int(k) <= order; ++k) j.c_(0, k) = coeffs[k];
        return j;
    }

    /// c z^n.
    static Jet monomial(int n, int order = default_order, complex c = 1.0) {
        Jet j(1, order);
        if (n <= order) j.c_(0, n) = c;
        return j;
    }

    int dim() const { return int(c_.rows()); }
    int order() const { return int(c_.cols()) - 1; }

    complex& operator()(int i, int k) { return c_(i, k); }
    complex operator()(int i, int k) const { return c_(i, k); }
    /// Scalar coefficient access.
    complex operator[](int k) const { return c_(0, k); }
    Eigen::Matrix<complex, Eigen::Dynamic, 1> coefficient(int k) const { return c_.col(k); }
    const Coefficients& coefficients() const { return c_; }

    /// Same series cut (or zero-padded) to another order.
    Jet truncated(int order) const {
        Jet j(dim(), order);
        const int m = std::min(order, this->order());
        j.c_.leftCols(m + 1) = c_.leftCols(m + 1);
        return j;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        check_dims(a, b);
        Jet r = a.truncated(std::min(a.order(), b.order()));
        r.c_ += b.c_.leftCols(r.order() + 1);
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-1.0) * b; }
    friend Jet operator*(complex s, const Jet& a) {
        Jet r = a;
        r.c_ *= s;
        return r;
    }

    /// Product of a scalar jet with a jet of any dimension.
    friend Jet operator*(const Jet& s, const Jet& a) {
        if (s.dim() != 1) throw std::invalid_argument("Jet product: left factor must be scalar");
        const int n = std::min(s.order(), a.order());
        Jet r(a.dim(), n);
        for (int i = 0; i <= n; ++i) {
            if (s.c_(0, i) == complex{0.0}) continue;
            for (int j = 0; i + j <= n; ++j) r.c_.col(i + j) += s.c_(0, i) * a.c_.col(j);
        }
        return r;
    }

    /// max_k |c_k|_2.
    double max_norm() const {
        double m = 0.0;
        for (int k = 0; k <= order(); ++k) m = std::max(m, c_.col(k).norm());
        return m;
    }

private:
    static void check_dims(const Jet& a, const Jet& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("Jet: dimension mismatch");
    }

    Coefficients c_;
};

/// Coefficient-wise modulus.
inline Jet abs(const Jet& a) {
    Jet r(a.dim(), a.order());
    for (int i = 0; i < a.dim(); ++i)
        for (int k = 0; k <= a.order(); ++k) r(i, k) = std::abs(a(i, k));
    return r;
}

/// F o g truncated to min(order F, order g); g scalar with g(0) = 0.
inline Jet compose(const Jet& f, const Jet& g) {
    if (g.dim() != 1) throw std::invalid_argument("compose: inner jet must be scalar");
    if (std::abs(g[0]) > zero_tol) throw std::domain_error("compose: inner jet must vanish at 0");
    const int n = std::min(f.order(), g.order());
    Jet inner = g.truncated(n);
    inner(0, 0) = 0.0;
    Jet result(f.dim(), n);
    Jet power = Jet::monomial(0, n);  // g^k
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i < f.dim(); ++i) {
            const complex fk = f(i, k);
            if (fk == complex{0.0}) continue;
            for (int d = k; d <= n; ++d) result(i, d) += fk * power[d];
        }
        power = inner * power;
    }
    return result;
}

/// Index of the first coefficient past the constant term with norm above zero_tol;
/// empty when every such coefficient vanishes within the truncation.
inline std::optional<int> vanishing_order(const Jet& f) {
    for (int k = 1; k <= f.order(); ++k)
        if (f.coefficient(k).norm() > zero_tol) return k;
    return std::nullopt;
}

/// w^p for a scalar jet with w(0) != 0, principal branch, by the J. C. P. Miller recurrence.
inline Jet power(const Jet& w, complex p) {
    if (w.dim() != 1) throw std::invalid_argument("power: scalar jet expected");
    if (std::abs(w[0]) <= zero_tol) throw std::domain_error("power: w(0) must be nonzero");
    Jet y(1, w.order());
    y(0, 0) = std::exp(p * std::log(w[0]));
    for (int k = 1; k <= w.order(); ++k) {
        complex s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((p + 1.0) * double(j) - double(k)) * w[j] * y[k - j];
        y(0, k) = s / (double(k) * w[0]);
    }
    return y;
}

/// f(u(z)) = z^n with u(0) = 0, u'(0) != 0.
struct CoveringNormalForm {
    int degree = 0;
    Jet u;
    /// max coefficient of f(u(z)) - z^n.
    double residual = 0.0;
};

/// Writes f = z^n g and solves v = g(z v)^{-1/n} by fixed-point iteration, one
/// coefficient per pass; u = z v. Only coefficients of u through degree
/// order - n + 1 are determined by the truncation of f, the rest are zero.
inline CoveringNormalForm normalize_covering(const Jet& f) {
    if (f.dim() != 1) throw std::invalid_argument("normalize_covering: scalar jet expected");
    if (std::abs(f[0]) > zero_tol) throw std::domain_error("normalize_covering: f(0) must be 0");
    const auto n = vanishing_order(f);
    if (!n) throw std::domain_error("normalize_covering: f vanishes identically within the truncation");
    const int order = f.order();
    const int rest = order - *n;  // valid order of g

    CoveringNormalForm out;
    out.degree = *n;
    out.u = Jet(1, order);
    if (rest == 0) {
        out.u(0, 1) = std::exp(std::log(f[*n]) / double(*n));
    } else {
        Jet g(1, rest);
        for (int k = 0; k <= rest; ++k) g(0, k) = f[*n + k];
        const complex exponent = -1.0 / double(*n);
        Jet v = Jet::monomial(0, rest, std::exp(exponent * std::log(g[0])));
        for (int pass = 0; pass < rest; ++pass) {
            const Jet zv = Jet::monomial(1, rest) * v;
            v = power(compose(g, zv), exponent);
        }
        for (int k = 0; k <= rest; ++k) out.u(0, k + 1) = v[k];
    }
    const Jet back = compose(f, out.u) - Jet::monomial(*n, order);
    out.residual = back.max_norm();
    // Cancellation in f(u) is bounded by the size of the summed terms, |f|(|u|).
    const Jet magnitude = compose(abs(f), abs(out.u));
    for (int k = 0; k <= order; ++k) {
        if (std::abs(back[k]) > 1e-10 * std::abs(magnitude[k]) + 1e-12)
            throw model_inconsistency("normalize_covering: back-composition does not reproduce z^n");
    }
    return out;
}

enum class Type2Verdict { Equivalent, NotEquivalent };

inline const char* to_string(Type2Verdict v) { return v == Type2Verdict::Equivalent ? "Equivalent" : "NotEquivalent"; }

/// Pull-backs of one jumping family by coverings of degrees n and m.
inline Type2Verdict type2_verdict(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("type2_verdict: degrees must be positive");
    return n == m ? Type2Verdict::Equivalent : Type2Verdict::NotEquivalent;
}

/// Angles 2 pi frac(l (m/n)^k), 1 <= k <= K, 0 <= l <= L, in [0, 2 pi).
inline std::vector<double> density_angles(std::int64_t n, std::int64_t m, int depth, std::int64_t range) {
    if (m < 1 || depth < 0 || range < 0) throw std::invalid_argument("density_gap: bad arguments");
    const std::int64_t g = std::gcd(n, m);
    n /= g;
    m /= g;
    if (n <= m) throw std::invalid_argument("density_gap: need n > m after reduction");
    std::vector<double> angles;
    unsigned __int128 nk = 1, mk = 1;
    bool exact = true;
    for (int k = 1; k <= depth; ++k) {
        nk *= n;
        mk *= m;
        if (nk > (unsigned __int128)1 << 62) exact = false;
        const long double ratio = std::pow((long double)m / n, k);
        for (std::int64_t l = 0; l <= range; ++l) {
            long double frac;
            if (exact) {
                frac = (long double)((unsigned __int128)l * mk % nk) / (long double)nk;
            } else {
                const long double x = ratio * l;
                frac = x - std::floor(x);
            }
            angles.push_back(double(2.0L * std::numbers::pi_v<long double> * frac));
        }
    }
    return angles;
}

/// Largest gap on the unit circle left by exp(2 pi i l (m/n)^k); 2 pi for an empty set.
inline double density_gap(std::int64_t n, std::int64_t m, int depth, std::int64_t range) {
    auto angles = density_angles(n, m, depth, range);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (angles.empty()) return two_pi;
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + two_pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap;
}

}  // namespace moduli_lab::jet
