#pragma once

#include <span>

namespace butterfly::detail {

struct GaussRule {
    std::span<const double> nodes;    // on [-1, 1]
    std::span<const double> weights;
};

/// Gauss-Legendre rule with n points (cached after the first call).
GaussRule gauss_legendre(int n);

struct Quadrature {
    double value = 0.0;
    double error = 0.0;
};

/// integral_0^inf exp(-a*t - c*e^t) dt for c > 0 and a >= -1, with an error estimate.
Quadrature log_exp_integral(double a, double c);

}  // namespace butterfly::detail
