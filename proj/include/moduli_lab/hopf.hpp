#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "moduli_lab/conjugacy.hpp"
#include "moduli_lab/mat2.hpp"

namespace moduli_lab::hopf {

/// Membership in the Kuranishi region of the Hopf surface C^2 \ {0} / <2 Id>:
/// |Tr A| > 3 and |(Tr A)^2 - 4 det A| < 1.
inline bool in_kuranishi(const Mat2& a) {
    return std::abs(trace(a)) > 3.0 && std::abs(discriminant(a)) < 1.0;
}

/// A contraction matrix inside the Kuranishi region.
class HopfPoint {
public:
    explicit HopfPoint(const Mat2& a) : m_(a) {
        if (!in_kuranishi(a)) throw std::domain_error("HopfPoint: matrix outside the Kuranishi region");
    }
    const Mat2& matrix() const { return m_; }

private:
    Mat2 m_;
};

enum class Stratum { K4, K2 };

inline const char* to_string(Stratum s) { return s == Stratum::K4 ? "K4" : "K2"; }

/// Relative scalar-detection tolerance used for strata.
inline constexpr double scalar_tol = 1e-9;

using PhiValue = std::pair<complex, complex>;

/// (Tr A, Delta(A)); leaves of the foliation are its level sets.
inline PhiValue phi(const HopfPoint& a) { return {trace(a.matrix()), discriminant(a.matrix())}; }

inline Stratum stratum(const HopfPoint& a) {
    return is_scalar(a.matrix(), scalar_tol) ? Stratum::K4 : Stratum::K2;
}

/// Dimension of the space of holomorphic vector fields on the fiber.
inline int h0(const HopfPoint& a) { return stratum(a) == Stratum::K4 ? 4 : 2; }

/// Dimension of the Kuranishi space of the fiber.
inline int kuranishi_dim(const HopfPoint& a) { return stratum(a) == Stratum::K4 ? 4 : 2; }

inline bool phi_close(const PhiValue& x, const PhiValue& y, double tol) {
    const double scale = std::max({1.0, std::abs(x.first), std::abs(y.first)});
    return std::abs(x.first - y.first) <= tol * scale && std::abs(x.second - y.second) <= tol * scale * scale;
}

/// Whether A and B define the same Hopf surface, i.e. are conjugate in GL2(C).
///
/// Decided on the leaf invariants: equal phi, and not exactly one of the two
/// scalar. The answer is cross-checked against the conjugacy solver and a
/// disagreement raises `model_inconsistency`.
inline bool same_hopf_surface(const HopfPoint& a, const HopfPoint& b, double tol = default_tol) {
    const bool sa = is_scalar(a.matrix(), scalar_tol);
    const bool sb = is_scalar(b.matrix(), scalar_tol);
    const bool by_leaf = phi_close(phi(a), phi(b), tol) && sa == sb;
    const bool by_solver = !solve_conjugacy(a.matrix(), b.matrix(), ConjugacyOptions{tol, false}).empty;
    if (by_leaf != by_solver) {
        throw model_inconsistency("same_hopf_surface: leaf invariants and conjugacy solver disagree");
    }
    return by_leaf;
}

/// Complex Jacobian of phi (2 x 4, row-major vec(A) columns) by central differences.
inline Eigen::Matrix<complex, 2, 4> phi_jacobian(const Mat2& a, double step = 1e-6) {
    Eigen::Matrix<complex, 2, 4> jac;
    for (int k = 0; k < 4; ++k) {
        std::array<complex, 4> plus = a.entries();
        std::array<complex, 4> minus = a.entries();
        plus[k] += step;
        minus[k] -= step;
        const Mat2 ap{plus[0], plus[1], plus[2], plus[3]};
        const Mat2 am{minus[0], minus[1], minus[2], minus[3]};
        jac(0, k) = (trace(ap) - trace(am)) / (2.0 * step);
        jac(1, k) = (discriminant(ap) - discriminant(am)) / (2.0 * step);
    }
    return jac;
}

/// Implicit description of the leaf through a point.
struct HopfLeaf {
    PhiValue phi_value;
    /// delta = 0: the fiber also contains the scalar point sigma/2 Id, which is
    /// a different surface.
    bool contains_scalar_exception = false;
    int leaf_dim = 0;
    int jacobian_rank = 0;
    /// Basis of ker d(phi) at the point, for leaves of dimension 2.
    std::optional<std::array<Mat2, 2>> tangent;
};

inline HopfLeaf leaf_of(const HopfPoint& a, double tol = default_tol) {
    HopfLeaf leaf;
    leaf.phi_value = phi(a);
    const double scale = std::max(1.0, std::norm(leaf.phi_value.first));
    leaf.contains_scalar_exception = std::abs(leaf.phi_value.second) <= tol * scale;

    const auto jac = phi_jacobian(a.matrix());
    Eigen::JacobiSVD<Eigen::Matrix<complex, 2, 4>> svd(jac, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    leaf.jacobian_rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-6 * std::max(1.0, sv(0))) ++leaf.jacobian_rank;

    if (stratum(a) == Stratum::K4) {
        leaf.leaf_dim = 0;
        return leaf;
    }
    if (leaf.jacobian_rank < 2) {
        throw model_inconsistency("leaf_of: phi is not a submersion at a non-scalar point");
    }
    leaf.leaf_dim = 2;
    const auto& v = svd.matrixV();
    leaf.tangent = std::array<Mat2, 2>{Mat2{v(0, 2), v(1, 2), v(2, 2), v(3, 2)},
                                       Mat2{v(0, 3), v(1, 3), v(2, 3), v(3, 3)}};
    return leaf;
}

/// Random points of the Kuranishi region, by leaf type.
///
/// Points on delta = 0 leaves are built from dyadic data and integer
/// conjugators so the Jordan structure survives floating point exactly.
template <class Rng>
class PointSampler {
public:
    explicit PointSampler(Rng& rng) : rng_(rng) {}

    /// (sigma, delta) with 3.3 <= |sigma| <= 6 and 0.01 <= |delta| <= 0.9.
    PhiValue leaf_value() {
        return {std::polar(uniform(3.3, 6.0), angle()), std::polar(uniform(0.01, 0.9), angle())};
    }

    /// Random point on the leaf phi^{-1}(sigma, delta), delta != 0.
    HopfPoint on_leaf(const PhiValue& v) {
        const complex root = std::sqrt(v.second);
        const Mat2 d = Mat2::diag((v.first + root) / 2.0, (v.first - root) / 2.0);
        for (;;) {
            const Mat2 p{entry(), entry(), entry(), entry()};
            if (std::abs(det(p)) < 0.3) continue;
            const Mat2 a = p * d * *inverse(p);
            if (in_kuranishi(a)) return HopfPoint(a);
        }
    }

    /// Dyadic eigenvalue lambda with |2 lambda| in [3.3, 6].
    complex dyadic_eigenvalue() {
        for (;;) {
            const complex z = std::polar(uniform(1.65, 3.0), angle());
            const complex lam{std::round(z.real() * 1024.0) / 1024.0, std::round(z.imag() * 1024.0) / 1024.0};
            if (std::abs(2.0 * lam) > 3.3) return lam;
        }
    }

    /// Non-scalar point with a double eigenvalue lambda.
    HopfPoint jordan(complex lambda) {
        std::uniform_int_distribution<int> k(-2, 2);
        Mat2 u = Mat2::identity();
        for (int i = 0; i < 2; ++i) {
            u = u * Mat2{1.0, double(k(rng_)), 0.0, 1.0};
            u = u * Mat2{1.0, 0.0, double(k(rng_)), 1.0};
        }
        std::uniform_int_distribution<int> s(1, 64);
        const double scale = s(rng_) / 32.0;
        const Mat2 n = u * Mat2{0.0, scale, 0.0, 0.0} * *inverse(u);
        return HopfPoint(Mat2::scalar(lambda) + n);
    }

    HopfPoint scalar(complex lambda) { return HopfPoint(Mat2::scalar(lambda)); }

private:
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }
    complex entry() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

    Rng& rng_;
};

}  // namespace moduli_lab::hopf
