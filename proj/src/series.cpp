#include "butterfly/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace butterfly {

namespace {

constexpr double kBernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
constexpr int kEmOrder = 6;
constexpr long kDirectBudget = 3000;
// Direct sums run to this tail when it is affordable.
constexpr double kRoundingTarget = 1e-17;

double accepted(double tolerance, double value) { return tolerance * std::max(1.0, std::abs(value)); }

double term(Exponent s, double rate, long n) {
    return std::exp(-s.value * std::log1p(static_cast<double>(n)) - rate * static_cast<double>(n));
}

// Bound on sum_{n > N} (n+1)^{-s} e^{-n rate}; infinity when neither bound applies.
double tail_after(Exponent s, double rate, long N) {
    double bound = std::numeric_limits<double>::infinity();
    if (rate > 0.0)
        bound = term(s, rate, N + 1) / -std::expm1(-rate);
    if (s.excess > 0.0)
        bound = std::min(bound, std::exp(-s.excess * std::log(N + 1.0)) / s.excess);
    return bound;
}

// Terms needed for direct summation to reach `target`, estimated from the tail bounds.
double direct_terms_needed(Exponent s, double rate, double target) {
    double needed = std::numeric_limits<double>::infinity();
    if (rate > 0.0)
        needed = (std::log(1.0 / target) - std::log(-std::expm1(-rate))) / rate;
    if (s.excess > 0.0)
        needed = std::min(needed,
                          std::exp((std::log(1.0 / target) - std::log(s.excess)) / s.excess));
    return needed;
}

SeriesEval direct_sum(Exponent s, double rate, double tolerance, long cap) {
    SeriesEval e;
    double sum = 0.0, comp = 0.0;
    for (long n = 1;; ++n) {
        const double y = term(s, rate, n) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        const double tail = tail_after(s, rate, n);
        if (tail <= accepted(tolerance, sum) || n >= cap) {
            e.value = sum;
            e.tail_bound = tail;
            e.terms_used = n;
            e.hit_cap = tail > accepted(tolerance, sum);
            return e;
        }
    }
}

// j-th derivative of f(x) = (x+1)^{-s} e^{-rate x}.  Every Leibniz term has
// sign (-1)^j, so magnitudes add without cancellation.
double em_derivative(int j, double s, double rate, double x) {
    double sum = 0.0, binom = 1.0, rising = 1.0;
    for (int i = 0; i <= j; ++i) {
        if (i > 0) {
            binom *= static_cast<double>(j - i + 1) / i;
            rising *= s + i - 1;
        }
        sum += binom * std::pow(rate, j - i) * rising * std::pow(x + 1.0, -s - i);
    }
    return ((j % 2 == 0) ? 1.0 : -1.0) * std::exp(-rate * x) * sum;
}

SeriesEval euler_maclaurin(Exponent s, double rate, double tolerance) {
    SeriesEval e;
    for (long start = 32;; start *= 2) {
        double head = 0.0;
        for (long n = 1; n < start; ++n) head += term(s, rate, n);

        const double M = static_cast<double>(start + 1);
        double integral, quad_err;
        if (rate == 0.0) {
            integral = std::exp(-s.excess * std::log(M)) / s.excess;
            quad_err = 0.0;
        } else {
            auto h = detail::log_exp_integral(s.excess, rate * M);
            const double scale = std::exp(rate - s.excess * std::log(M));
            integral = scale * h.value;
            quad_err = scale * h.error;
        }

        const double x = static_cast<double>(start);
        double corr = 0.5 * term(s, rate, start);
        double factorial = 1.0;
        for (int k = 1; k <= kEmOrder; ++k) {
            factorial *= (2.0 * k - 1.0) * (2.0 * k);
            corr -= kBernoulli[k - 1] / factorial * em_derivative(2 * k - 1, s.value, rate, x);
        }
        // |R_p| <= 2 zeta(2p)/(2 pi)^{2p} * |f^{(2p-1)}(N)| for completely monotone f.
        const double zeta12 = 1.000246086553308;
        const double remainder = 2.0 * zeta12 / std::pow(2.0 * std::numbers::pi, 2 * kEmOrder) *
                                 std::abs(em_derivative(2 * kEmOrder - 1, s.value, rate, x));

        e.value = head + integral + corr;
        e.tail_bound = remainder + quad_err;
        e.terms_used = start;
        if (e.tail_bound <= accepted(tolerance, e.value) || start >= 4096) {
            e.hit_cap = e.tail_bound > accepted(tolerance, e.value);
            return e;
        }
    }
}

// sum_{n>=1} n (n+1)^{-s} e^{-n rate}
SeriesEval weighted_power_exp(Exponent s, double rate, const SeriesOptions& options) {
    if (rate < 0.0 || (rate == 0.0 && s.excess <= 1.0)) return SeriesEval::diverging();
    if (s.value >= 1.0) {
        auto hi = power_exp_series(s.minus_one(), rate, options);
        auto lo = power_exp_series(s, rate, options);
        if (hi.divergent || lo.divergent) return SeriesEval::diverging();
        return {hi.value - lo.value, hi.tail_bound + lo.tail_bound,
                std::max(hi.terms_used, lo.terms_used), false, hi.hit_cap || lo.hit_cap};
    }
    // s < 1 and rate > 0: terms eventually decrease with ratio at most (1 + 1/n) e^{-rate}.
    SeriesEval e;
    double sum = 0.0;
    for (long n = 1;; ++n) {
        const double t = static_cast<double>(n) * term(s, rate, n);
        sum += t;
        const double ratio = (1.0 + 1.0 / (n + 1.0)) * std::exp(-rate);
        double tail = std::numeric_limits<double>::infinity();
        if (ratio < 1.0 && static_cast<double>(n + 1) * term(s, rate, n + 1) <= t)
            tail = static_cast<double>(n + 1) * term(s, rate, n + 1) / (1.0 - ratio);
        if (tail <= accepted(options.tolerance, sum) || n >= options.max_terms) {
            e.value = sum;
            e.tail_bound = tail;
            e.terms_used = n;
            e.hit_cap = tail > accepted(options.tolerance, sum);
            return e;
        }
    }
}

}  // namespace

DomainPoint DomainPoint::above_wing(const ModelParams& params, double beta, double gap,
                                    std::optional<double> excess) {
    return {beta, wing_pressure(params, beta) + gap, gap, excess};
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double wing_pressure(const ModelParams& params, double beta) {
    return params.gamma * beta + softplus(params.delta * beta);
}

double wing_gap(const ModelParams& params, const DomainPoint& point) {
    return point.wing_gap ? *point.wing_gap : point.z - wing_pressure(params, point.beta);
}

Exponent wing_exponent(const ModelParams& params, const DomainPoint& point) {
    if (point.wing_excess) return Exponent::above_one(*point.wing_excess);
    return {params.epsilon * point.beta, std::fma(params.epsilon, point.beta, -1.0)};
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::domain_error("riemann_zeta requires s > 1");
    return riemann_zeta_above_one(s - 1.0);
}

double riemann_zeta_above_one(double excess) {
    if (!(excess > 0.0)) throw std::domain_error("riemann_zeta requires s > 1");
    return 1.0 + power_exp_series(Exponent::above_one(excess), 0.0, {1e-16}).value;
}

SeriesEval power_exp_series(Exponent s, double rate, const SeriesOptions& options) {
    if (s.value < 0.0) throw PreconditionError("power_exp_series requires s >= 0");
    if (rate < 0.0 || (rate == 0.0 && s.excess <= 0.0)) return SeriesEval::diverging();
    if (options.mode == SummationMode::direct)
        return direct_sum(s, rate, options.tolerance, options.max_terms);
    if (direct_terms_needed(s, rate, kRoundingTarget) <= kDirectBudget)
        return direct_sum(s, rate, std::min(options.tolerance, kRoundingTarget), options.max_terms);
    if (direct_terms_needed(s, rate, options.tolerance) <= kDirectBudget)
        return direct_sum(s, rate, options.tolerance, options.max_terms);
    return euler_maclaurin(s, rate, options.tolerance);
}

SeriesEval power_exp_partial(Exponent s, double rate, long n_terms) {
    if (s.value < 0.0) throw PreconditionError("power_exp_partial requires s >= 0");
    SeriesEval e;
    double comp = 0.0;
    for (long n = 1; n <= n_terms; ++n) {
        const double y = term(s, rate, n) - comp;
        const double t = e.value + y;
        comp = (t - e.value) - y;
        e.value = t;
    }
    e.terms_used = n_terms;
    e.tail_bound = tail_after(s, rate, n_terms);
    e.divergent = !std::isfinite(e.tail_bound);
    return e;
}

SeriesEval sigma1(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options) {
    const double x = std::log(static_cast<double>(params.L)) - params.alpha * point.beta - point.z;
    if (x >= 0.0) return SeriesEval::diverging();
    const double r = std::exp(-params.alpha * point.beta - point.z);
    const double ratio = std::exp(x);  // L * r
    if (options.mode == SummationMode::automatic) return {r / -std::expm1(x), 0.0, 0, false, false};

    SeriesEval e;
    double t = r;
    for (long n = 1;; ++n) {
        e.value += t;
        t *= ratio;
        const double tail = t / -std::expm1(x);
        if (tail <= accepted(options.tolerance, e.value) || n >= options.max_terms) {
            e.tail_bound = tail;
            e.terms_used = n;
            e.hit_cap = tail > accepted(options.tolerance, e.value);
            return e;
        }
    }
}

SeriesEval sigma2(const ModelParams&, const DomainPoint& point, const SeriesOptions& options) {
    if (point.beta < 0.0) throw PreconditionError("beta must be nonnegative");
    return power_exp_series(Exponent::of(point.beta), point.z, options);
}

SeriesEval sigma3(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options) {
    if (point.beta < 0.0) throw PreconditionError("beta must be nonnegative");
    const double w = wing_gap(params, point);
    const Exponent s = wing_exponent(params, point);
    auto core = power_exp_series(s, w, options);
    if (core.divergent) return core;
    const double log_q = softplus(params.delta * point.beta);
    const double inv_q2 = std::exp(-2.0 * log_q);
    // (q - 1)/q^2: the single-"3" block, expressed relative to the n >= 2 normalisation.
    const double single = std::exp(params.delta * point.beta - 2.0 * log_q - s.value * std::numbers::ln2 - w);
    core.value = inv_q2 * core.value + single;
    core.tail_bound *= inv_q2;
    return core;
}

SeriesEval dsigma_dz(SeriesId which, const ModelParams& params, const DomainPoint& point,
                     const SeriesOptions& options) {
    switch (which) {
        case SeriesId::one: {
            auto s = sigma1(params, point, options);
            if (s.divergent) return s;
            const double x = std::log(static_cast<double>(params.L)) - params.alpha * point.beta - point.z;
            const double one_minus = -std::expm1(x);
            const double r = std::exp(-params.alpha * point.beta - point.z);
            return {-r / (one_minus * one_minus), s.tail_bound, s.terms_used, false, s.hit_cap};
        }
        case SeriesId::two: {
            auto s = weighted_power_exp(Exponent::of(point.beta), point.z, options);
            if (!s.divergent) s.value = -s.value;
            return s;
        }
        case SeriesId::three: {
            const double w = wing_gap(params, point);
            const Exponent s = wing_exponent(params, point);
            auto core = weighted_power_exp(s, w, options);
            if (core.divergent) return core;
            const double log_q = softplus(params.delta * point.beta);
            const double inv_q2 = std::exp(-2.0 * log_q);
            const double single =
                std::exp(params.delta * point.beta - 2.0 * log_q - s.value * std::numbers::ln2 - w);
            core.value = -(inv_q2 * core.value + single);
            core.tail_bound *= inv_q2;
            return core;
        }
    }
    return SeriesEval::diverging();
}

}  // namespace butterfly
