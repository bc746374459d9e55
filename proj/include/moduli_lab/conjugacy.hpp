#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moduli_lab/detail/linear_algebra.hpp"
#include "moduli_lab/mat2.hpp"

namespace moduli_lab {

/// Shape of the set {P : AP = PB, det P = 1}.
enum class Det1Kind {
    empty,      ///< no invertible intertwiner
    points,     ///< finitely many matrices (no free parameter)
    lines,      ///< affine lines P_j + q K, q free
    hyperbola,  ///< alpha E1 + alpha^{-1} E2, alpha != 0 free
    full_sl2,   ///< A = B scalar: all of SL2
};

inline const char* to_string(Det1Kind k) {
    switch (k) {
        case Det1Kind::empty: return "empty";
        case Det1Kind::points: return "points";
        case Det1Kind::lines: return "lines";
        case Det1Kind::hyperbola: return "hyperbola";
        case Det1Kind::full_sl2: return "full-sl2";
    }
    return "?";
}

/// Parametric description of the determinant-one intertwiners.
///
/// Both square-root branches are kept as separate representatives; for
/// `lines` each branch is `representatives[j] + q * direction`, for
/// `hyperbola` the single branch is `alpha * e1 + e2 / alpha`.
struct Det1Family {
    Det1Kind kind = Det1Kind::empty;
    std::vector<Mat2> representatives;
    int free_parameters = 0;
    Mat2 direction;
    Mat2 e1;
    Mat2 e2;

    bool empty() const { return kind == Det1Kind::empty; }
    std::size_t branch_count() const { return representatives.size(); }

    /// Member of branch `branch` at free parameter `param`.
    Mat2 member(std::size_t branch, complex param) const {
        if (branch >= representatives.size()) throw std::out_of_range("Det1Family::member: branch");
        switch (kind) {
            case Det1Kind::points: return representatives[branch];
            case Det1Kind::lines: return representatives[branch] + param * direction;
            case Det1Kind::hyperbola:
                if (param == complex{0.0}) throw std::domain_error("Det1Family::member: alpha = 0");
                return param * e1 + (1.0 / param) * e2;
            case Det1Kind::full_sl2: return representatives[branch];
            case Det1Kind::empty: break;
        }
        throw std::logic_error("Det1Family::member: empty family");
    }
};

struct ConjugacySolution {
    /// Canonical (reduced echelon) basis of {P : AP = PB}.
    std::vector<Mat2> basis;
    Det1Family det1_family;
    /// No invertible P with AP = PB, i.e. A and B are not conjugate.
    bool empty = true;
    /// A = B is scalar and every matrix intertwines.
    bool full_space = false;
    /// Computed in exact Gaussian-rational arithmetic.
    bool exact = false;
};

struct ConjugacyOptions {
    double tol = default_tol;
    /// Use exact arithmetic when every input entry is a short dyadic rational.
    bool allow_exact = true;
};

namespace detail {

inline bool all_short_dyadic(const Mat2& a, const Mat2& b) {
    for (const Mat2* m : {&a, &b}) {
        for (const auto& z : m->entries()) {
            if (!is_short_dyadic(z.real()) || !is_short_dyadic(z.imag())) return false;
        }
    }
    return true;
}

// Row (i,j) -> 2i+j of the operator P -> AP - PB on row-major vec(P).
template <class T, class GetA, class GetB>
dense<T> sylvester_operator(GetA a, GetB b) {
    dense<T> m(4, std::vector<T>(4, T{}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    T v{};
                    if (j == l) v = v + a(i, k);
                    if (i == k) v = v - b(l, j);
                    m[2 * i + j][2 * k + l] = v;
                }
    return m;
}

inline Mat2 to_mat2(const std::vector<complex>& v) { return {v[0], v[1], v[2], v[3]}; }

// Binary quadratic form det(s P1 + u P2) = a s^2 + b s u + c u^2.
struct quad_form {
    complex a, b, c;
    bool zero = false;
    bool degenerate = false;
};

inline bool is_negligible_entry(complex x, double scale) { return std::abs(x) <= 64.0 * 2.2e-16 * scale; }

inline std::optional<std::size_t> first_significant(const Mat2& p) {
    const double scale = max_norm(p);
    for (std::size_t k = 0; k < 4; ++k)
        if (!is_negligible_entry(p[k], scale) && std::abs(p[k]) > 1e-12 * scale) return k;
    return std::nullopt;
}

// Among equal-norm minimizers prefer the one whose first significant entry
// has the largest real part, then the largest imaginary part.
inline bool phase_preferred(const Mat2& x, const Mat2& y) {
    const auto k = first_significant(x);
    const auto l = first_significant(y);
    if (!k || !l) return static_cast<bool>(k);
    if (*k != *l) return *k < *l;
    const double tie = 1e-12 * std::max(max_norm(x), max_norm(y));
    if (std::abs(x[*k].real() - y[*l].real()) > tie) return x[*k].real() > y[*l].real();
    return x[*k].imag() > y[*l].imag() + tie;
}

inline Det1Family build_det1_family(const std::vector<Mat2>& basis, const quad_form& q) {
    Det1Family fam;
    switch (basis.size()) {
        case 0: return fam;
        case 4:
            fam.kind = Det1Kind::full_sl2;
            fam.free_parameters = 3;
            fam.representatives = {Mat2::identity()};
            return fam;
        case 1: {
            if (q.zero) return fam;
            const complex r = 1.0 / std::sqrt(q.a);
            fam.kind = Det1Kind::points;
            fam.representatives = {r * basis[0], -r * basis[0]};
            return fam;
        }
        case 2: break;
        default:
            throw model_inconsistency("solve_conjugacy: intertwiner space of dimension 3");
    }
    if (q.zero) return fam;
    const Mat2& p1 = basis[0];
    const Mat2& p2 = basis[1];
    const bool a_zero = q.a == complex{0.0};
    if (q.degenerate) {
        fam.kind = Det1Kind::lines;
        fam.free_parameters = 1;
        if (!a_zero) {
            const complex r = 1.0 / std::sqrt(q.a);
            fam.representatives = {r * p1, -r * p1};
            fam.direction = (-q.b / (2.0 * q.a)) * p1 + p2;
        } else {
            const complex r = 1.0 / std::sqrt(q.c);
            fam.representatives = {r * p2, -r * p2};
            fam.direction = p1;
        }
        return fam;
    }
    fam.kind = Det1Kind::hyperbola;
    fam.free_parameters = 1;
    if (!a_zero) {
        const complex sq = std::sqrt(q.b * q.b - 4.0 * q.a * q.c);
        // Pick the larger-magnitude root first to avoid cancellation.
        const complex num = (std::real(std::conj(q.b) * sq) >= 0.0) ? -q.b - sq : -q.b + sq;
        const complex r1 = num / (2.0 * q.a);
        const complex r2 = q.c / (q.a * r1);
        const Mat2 w = r1 * p1 + p2;
        fam.e1 = p1 + (1.0 / (r2 - r1)) * w;
        fam.e2 = (-1.0 / (q.a * (r2 - r1))) * w;
    } else {
        fam.e1 = p2 - (q.c / q.b) * p1;
        fam.e2 = (1.0 / q.b) * p1;
    }
    fam.representatives = {fam.e1 + fam.e2};
    return fam;
}

inline ConjugacySolution solve_exact(const Mat2& a, const Mat2& b) {
    auto ga = [&](std::size_t i, std::size_t j) { return gaussian_rational::from(a(i, j)); };
    auto gb = [&](std::size_t i, std::size_t j) { return gaussian_rational::from(b(i, j)); };
    auto op = sylvester_operator<gaussian_rational>(ga, gb);
    auto negligible = [](const gaussian_rational& x) { return x.is_zero(); };
    auto magnitude = [](const gaussian_rational& x) { return std::abs(x.to_complex()); };
    const auto pivots = rref(op, negligible, magnitude);
    auto kernel = kernel_from_rref(op, pivots, 4);
    rref(kernel, negligible, magnitude);

    auto det_of = [](const std::vector<gaussian_rational>& v) { return v[0] * v[3] - v[1] * v[2]; };

    ConjugacySolution sol;
    sol.exact = true;
    for (const auto& v : kernel) {
        sol.basis.push_back({v[0].to_complex(), v[1].to_complex(), v[2].to_complex(), v[3].to_complex()});
    }
    quad_form q{};
    if (kernel.size() == 1) {
        const auto d = det_of(kernel[0]);
        q.a = d.to_complex();
        q.zero = d.is_zero();
    } else if (kernel.size() == 2) {
        std::vector<gaussian_rational> sum(4);
        for (std::size_t k = 0; k < 4; ++k) sum[k] = kernel[0][k] + kernel[1][k];
        const auto qa = det_of(kernel[0]);
        const auto qc = det_of(kernel[1]);
        const auto qb = det_of(sum) - qa - qc;
        const auto disc = qb * qb - gaussian_rational(rational(4)) * qa * qc;
        q.a = qa.to_complex();
        q.b = qb.to_complex();
        q.c = qc.to_complex();
        q.zero = qa.is_zero() && qb.is_zero() && qc.is_zero();
        q.degenerate = disc.is_zero();
        // Keep the exact zero pattern of the form.
        if (qa.is_zero()) q.a = 0.0;
        if (qc.is_zero()) q.c = 0.0;
    }
    sol.full_space = kernel.size() == 4;
    sol.det1_family = build_det1_family(sol.basis, q);
    sol.empty = sol.det1_family.empty();
    return sol;
}

inline ConjugacySolution solve_float(const Mat2& a, const Mat2& b, double tol) {
    Eigen::Matrix4cd op;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    complex v = 0.0;
                    if (j == l) v += a(i, k);
                    if (i == k) v -= b(l, j);
                    op(2 * i + j, 2 * k + l) = v;
                }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(op, Eigen::ComputeFullV);
    const double threshold = tol * (frobenius_norm(a) + frobenius_norm(b));
    const auto& sv = svd.singularValues();
    dense<complex> kernel;
    for (int k = 0; k < 4; ++k) {
        if (sv(k) <= threshold) {
            std::vector<complex> v(4);
            for (int r = 0; r < 4; ++r) v[r] = svd.matrixV()(r, k);
            kernel.push_back(std::move(v));
        }
    }
    // Orthonormal rows: a fixed pivot threshold is scale-free here.
    rref(kernel, [](const complex& x) { return std::abs(x) <= 1e-10; },
         [](const complex& x) { return std::abs(x); });
    for (auto& row : kernel) {
        double scale = 0.0;
        for (const auto& x : row) scale = std::max(scale, std::abs(x));
        for (auto& x : row) {
            if (std::abs(x.real()) <= 64.0 * 2.2e-16 * scale) x.real(0.0);
            if (std::abs(x.imag()) <= 64.0 * 2.2e-16 * scale) x.imag(0.0);
        }
    }

    ConjugacySolution sol;
    for (const auto& v : kernel) sol.basis.push_back(to_mat2(v));
    quad_form q{};
    if (sol.basis.size() == 1) {
        q.a = det(sol.basis[0]);
        q.zero = std::abs(q.a) <= tol * std::norm(frobenius_norm(sol.basis[0]));
    } else if (sol.basis.size() == 2) {
        const Mat2& p1 = sol.basis[0];
        const Mat2& p2 = sol.basis[1];
        const double n1 = frobenius_norm(p1);
        const double n2 = frobenius_norm(p2);
        q.a = det(p1);
        q.c = det(p2);
        q.b = det(p1 + p2) - q.a - q.c;
        const bool a0 = std::abs(q.a) <= tol * n1 * n1;
        const bool c0 = std::abs(q.c) <= tol * n2 * n2;
        const bool b0 = std::abs(q.b) <= tol * n1 * n2;
        if (a0) q.a = 0.0;
        if (c0) q.c = 0.0;
        if (b0) q.b = 0.0;
        q.zero = a0 && b0 && c0;
        const double scale = std::abs(q.a) + std::abs(q.b) + std::abs(q.c);
        q.degenerate = std::abs(q.b * q.b - 4.0 * q.a * q.c) <= tol * scale * scale;
    }
    sol.full_space = sol.basis.size() == 4;
    sol.det1_family = build_det1_family(sol.basis, q);
    sol.empty = sol.det1_family.empty();
    return sol;
}

}  // namespace detail

/// Solves AP = PB (so B = P^{-1} A P) for 2x2 complex A, B.
///
/// The basis is the reduced echelon basis of the solution space in row-major
/// vec(P) coordinates. Inputs made only of short dyadic rationals are solved
/// exactly; everything else by SVD with rank threshold
/// tol * (||A||_F + ||B||_F).
inline ConjugacySolution solve_conjugacy(const Mat2& a, const Mat2& b, ConjugacyOptions opts = {}) {
    if (opts.tol < 0.0) throw std::invalid_argument("solve_conjugacy: negative tolerance");
    if (opts.allow_exact && detail::all_short_dyadic(a, b)) return detail::solve_exact(a, b);
    return detail::solve_float(a, b, opts.tol);
}

inline ConjugacySolution solve_conjugacy(const Mat2& a, const Mat2& b, double tol) {
    return solve_conjugacy(a, b, ConjugacyOptions{tol, true});
}

/// ||AP - PB||_F.
inline double conjugacy_residual(const Mat2& a, const Mat2& b, const Mat2& p) {
    return frobenius_norm(a * p - p * b);
}

struct MinNormConjugator {
    Mat2 matrix;
    double norm = 0.0;
    /// Which branch of the det-1 family the minimizer lies on.
    std::size_t branch = 0;
    Det1Kind kind = Det1Kind::empty;
};

/// Minimum-Frobenius-norm det-1 intertwiner of a conjugacy solution family.
inline std::optional<MinNormConjugator> min_norm_member(const Det1Family& fam) {
    using detail::phase_preferred;
    switch (fam.kind) {
        case Det1Kind::empty: return std::nullopt;
        case Det1Kind::full_sl2:
            // ||P||_F^2 >= 2 |det P| with equality on SU(2); Id is the canonical choice.
            return MinNormConjugator{Mat2::identity(), std::sqrt(2.0), 0, fam.kind};
        case Det1Kind::points:
        case Det1Kind::lines: {
            std::optional<MinNormConjugator> best;
            for (std::size_t j = 0; j < fam.representatives.size(); ++j) {
                Mat2 p = fam.representatives[j];
                if (fam.kind == Det1Kind::lines) {
                    const double kk = std::norm(frobenius_norm(fam.direction));
                    p = p + (-inner(fam.direction, p) / kk) * fam.direction;
                }
                const double n = frobenius_norm(p);
                const bool better = !best || n < best->norm * (1.0 - 1e-12) ||
                                    (n <= best->norm * (1.0 + 1e-12) && phase_preferred(p, best->matrix));
                if (better) best = MinNormConjugator{p, n, j, fam.kind};
            }
            return best;
        }
        case Det1Kind::hyperbola: {
            const double a = std::norm(frobenius_norm(fam.e1));
            const double c = std::norm(frobenius_norm(fam.e2));
            const complex g = inner(fam.e1, fam.e2);
            const double rho = std::pow(c / a, 0.25);
            std::vector<double> thetas;
            if (std::abs(g) > 1e-12 * std::sqrt(a * c)) {
                const double theta = 0.5 * (std::arg(g) - std::numbers::pi);
                thetas = {theta, theta + std::numbers::pi};
            } else {
                // Circle of minimizers: rotate the first significant entry onto
                // the positive real axis.
                double theta = 0.0;
                for (std::size_t k = 0; k < 4; ++k) {
                    const complex w = rho * fam.e1[k] + std::conj(fam.e2[k]) / rho;
                    if (std::abs(w) > 1e-12 * (rho * max_norm(fam.e1) + max_norm(fam.e2) / rho)) {
                        theta = -std::arg(w);
                        break;
                    }
                }
                thetas = {theta};
            }
            std::optional<MinNormConjugator> best;
            for (double th : thetas) {
                const Mat2 p = fam.member(0, std::polar(rho, th));
                const double n = frobenius_norm(p);
                const bool better = !best || n < best->norm * (1.0 - 1e-12) ||
                                    (n <= best->norm * (1.0 + 1e-12) && phase_preferred(p, best->matrix));
                if (better) best = MinNormConjugator{p, n, 0, fam.kind};
            }
            return best;
        }
    }
    return std::nullopt;
}

/// Det-1 conjugator (AP = PB) of minimal Frobenius norm, if A and B are conjugate.
inline std::optional<MinNormConjugator> min_norm_conjugator(const Mat2& a, const Mat2& b,
                                                            ConjugacyOptions opts = {}) {
    return min_norm_member(solve_conjugacy(a, b, opts).det1_family);
}

}  // namespace moduli_lab
