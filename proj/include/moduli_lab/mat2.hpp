#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace moduli_lab {

using complex = std::complex<double>;

/// Default relative tolerance shared by the numeric routines.
inline constexpr double default_tol = 1e-9;

/// Raised when a computation contradicts the structure the model guarantees
/// (e.g. a Jacobian that should have full rank does not).
class model_inconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A 2x2 complex matrix, stored row-major as (a11, a12, a21, a22).
///
/// Entries are always finite; invertibility is a query, not an invariant.
class Mat2 {
public:
    constexpr Mat2() = default;

    Mat2(complex a11, complex a12, complex a21, complex a22) : e_{a11, a12, a21, a22} {
        for (const auto& x : e_) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
                throw std::domain_error("Mat2: non-finite entry");
            }
        }
    }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 scalar(complex s) { return {s, 0.0, 0.0, s}; }
    static Mat2 diag(complex a, complex b) { return {a, 0.0, 0.0, b}; }
    static Mat2 zero() { return {}; }

    const complex& operator()(std::size_t i, std::size_t j) const { return e_[2 * i + j]; }
    const complex& operator[](std::size_t k) const { return e_[k]; }
    const std::array<complex, 4>& entries() const { return e_; }

    Mat2 transpose() const { return {e_[0], e_[2], e_[1], e_[3]}; }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
    }
    friend Mat2 operator-(const Mat2& a) { return {-a[0], -a[1], -a[2], -a[3]}; }
    friend Mat2 operator*(complex s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;

private:
    std::array<complex, 4> e_{};
};

inline complex trace(const Mat2& a) { return a[0] + a[3]; }

inline complex det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

/// (Tr A)^2 - 4 det A; vanishes exactly on matrices with a double eigenvalue.
inline complex discriminant(const Mat2& a) {
    const complex t = trace(a);
    return t * t - 4.0 * det(a);
}

inline double frobenius_norm(const Mat2& a) {
    double s = 0.0;
    for (const auto& x : a.entries()) s += std::norm(x);
    return std::sqrt(s);
}

/// Largest entry modulus.
inline double max_norm(const Mat2& a) {
    double m = 0.0;
    for (const auto& x : a.entries()) m = std::max(m, std::abs(x));
    return m;
}

/// Frobenius inner product <a, b> = sum conj(a_ij) b_ij.
inline complex inner(const Mat2& a, const Mat2& b) {
    complex s = 0.0;
    for (std::size_t k = 0; k < 4; ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline std::optional<Mat2> inverse(const Mat2& a) {
    const complex d = det(a);
    if (d == complex{0.0}) return std::nullopt;
    return Mat2{a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}

inline Mat2 real_part(const Mat2& a) {
    return {a[0].real(), a[1].real(), a[2].real(), a[3].real()};
}

inline Mat2 imag_part(const Mat2& a) {
    return {a[0].imag(), a[1].imag(), a[2].imag(), a[3].imag()};
}

/// True iff both off-diagonal moduli and the diagonal difference are at most
/// rel_tol * ||A||_F.
inline bool is_scalar(const Mat2& a, double rel_tol = default_tol) {
    const double bound = rel_tol * frobenius_norm(a);
    return std::abs(a[1]) <= bound && std::abs(a[2]) <= bound && std::abs(a[0] - a[3]) <= bound;
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& a) {
    return os << "[[" << a[0] << ", " << a[1] << "], [" << a[2] << ", " << a[3] << "]]";
}

}  // namespace moduli_lab
