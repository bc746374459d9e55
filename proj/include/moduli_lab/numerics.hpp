#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace moduli_lab {

struct DerivativeEstimate {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

/// Central difference of order k at step h:
/// sum_j (-1)^j C(k,j) f(x + (k/2 - j) h) / h^k.
template <class F>
double central_difference(const F& f, double x, int order, double h) {
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        sum += ((j % 2) ? -binom : binom) * f(x + (0.5 * order - j) * h);
        binom = binom * (order - j) / (j + 1);
    }
    return sum / std::pow(h, order);
}

/// Ridders extrapolation of central differences, halving the step from h0.
/// The whole tableau is built and the entry with the smallest error estimate
/// is returned; at high order the estimates are not monotone in the step.
template <class F>
DerivativeEstimate ridders_derivative(const F& f, double x, int order, double h0 = 1e-3, int levels = 10) {
    if (order < 1 || levels < 2 || !(h0 > 0.0)) throw std::invalid_argument("ridders_derivative: bad arguments");
    std::vector<std::vector<double>> a(levels);
    DerivativeEstimate best;
    double h = h0;
    for (int i = 0; i < levels; ++i, h *= 0.5) {
        a[i].resize(i + 1);
        a[i][0] = central_difference(f, x, order, h);
        double factor = 1.0;
        for (int j = 1; j <= i; ++j) {
            factor *= 4.0;
            a[i][j] = (factor * a[i][j - 1] - a[i - 1][j - 1]) / (factor - 1.0);
            const double err = std::max(std::abs(a[i][j] - a[i][j - 1]), std::abs(a[i][j] - a[i - 1][j - 1]));
            if (err < best.error) best = {a[i][j], err};
        }
    }
    return best;
}

}  // namespace moduli_lab
