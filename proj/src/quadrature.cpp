#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace butterfly::detail {

namespace {

struct Rule {
    std::vector<double> nodes, weights;
};

Rule build_rule(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

// Exact integral over [0, t1] from the exponential series of exp(-c e^t),
// valid while c*e^{t1} is small.
Quadrature plateau_series(double a, double c, double t1) {
    const double log_c = std::log(c);
    double sum = 0.0, last = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double r = k - a;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        double term;
        if (r * t1 > 50.0) {
            term = sign * std::exp(k * log_c - std::lgamma(k + 1.0) + r * t1 - std::log(r));
        } else {
            const double e = (r == 0.0) ? t1 : std::expm1(r * t1) / r;
            const double ck = (k == 0) ? 1.0 : std::exp(k * log_c - std::lgamma(k + 1.0));
            term = sign * ck * e;
        }
        sum += term;
        last = term;
        if (k > a + 1.0 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return {sum, 2.0 * std::abs(last) + 4e-16 * std::abs(sum)};
}

Quadrature panels(double a, double c, double lo, double hi, double width) {
    const auto fine = gauss_legendre(16);
    const auto coarse = gauss_legendre(8);
    const int count = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    const double h = (hi - lo) / count;
    auto f = [&](double t) { return std::exp(-a * t - c * std::exp(t)); };
    double q16 = 0.0, q8 = 0.0;
    for (int p = 0; p < count; ++p) {
        const double mid = lo + (p + 0.5) * h, half = 0.5 * h;
        for (std::size_t i = 0; i < fine.nodes.size(); ++i)
            q16 += half * fine.weights[i] * f(mid + half * fine.nodes[i]);
        for (std::size_t i = 0; i < coarse.nodes.size(); ++i)
            q8 += half * coarse.weights[i] * f(mid + half * coarse.nodes[i]);
    }
    return {q16, std::abs(q16 - q8) + 4e-16 * std::abs(q16)};
}

}  // namespace

GaussRule gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return {it->second.nodes, it->second.weights};
}

Quadrature log_exp_integral(double a, double c) {
    constexpr double plateau = 1e-2;  // c*e^t below this: series region
    constexpr double cutoff = 80.0;   // c*e^t above this: negligible
    if (c >= cutoff) {
        const double span = 60.0 / (c + a);
        return panels(a, c, 0.0, span, std::min(0.5, 1.0 / (c + std::abs(a))));
    }
    const double t_end = std::log(cutoff / c);
    const double width = std::min(0.5, 1.0 / (1.0 + std::abs(a)));
    if (c >= plateau) return panels(a, c, 0.0, t_end, width);
    const double t1 = std::log(plateau / c);
    auto head = plateau_series(a, c, t1);
    auto rest = panels(a, c, t1, t_end, width);
    return {head.value + rest.value, head.error + rest.error};
}

}  // namespace butterfly::detail
