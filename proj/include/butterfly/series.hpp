#pragma once

#include <optional>

#include "butterfly/model.hpp"

namespace butterfly {

/// Result of a convergent-or-not series.  When divergent is set the other
/// fields carry no meaning.
struct SeriesEval {
    double value = 0.0;
    double tail_bound = 0.0;
    long terms_used = 0;
    bool divergent = false;
    bool hit_cap = false;

    static SeriesEval diverging() {
        SeriesEval e;
        e.divergent = true;
        return e;
    }
};

enum class SummationMode {
    automatic,  // closed forms, direct sums or Euler-Maclaurin, whichever is cheapest
    direct,     // plain partial sums with a certified tail; used for cross-checks
};

struct SeriesOptions {
    /// Target for tail_bound, relative to max(1, |value|).
    double tolerance = 1e-13;
    long max_terms = 10'000'000;
    SummationMode mode = SummationMode::automatic;
};

/// An exponent s together with s - 1.  Near s = 1 the sums behave like
/// 1/(s - 1) and the excess must not be recovered by subtraction.
struct Exponent {
    double value = 0.0;
    double excess = -1.0;

    static Exponent of(double s) { return {s, s - 1.0}; }
    static Exponent above_one(double excess) { return {1.0 + excess, excess}; }
    Exponent minus_one() const { return {value - 1.0, excess - 1.0}; }
};

/// (beta, Z), optionally with the wing gap Z - P34(beta) and the excess
/// epsilon*beta - 1 given exactly.  The series use the exact values when
/// present; solvers that work next to the wing boundary supply them.
struct DomainPoint {
    double beta = 0.0;
    double z = 0.0;
    std::optional<double> wing_gap;
    std::optional<double> wing_excess;

    static DomainPoint at(double beta, double z) { return {beta, z, std::nullopt, std::nullopt}; }
    /// Z = P34(beta) + gap.
    static DomainPoint above_wing(const ModelParams& params, double beta, double gap,
                                  std::optional<double> excess = std::nullopt);
};

/// log(1 + e^x) without overflow.
double softplus(double x);
/// P34(beta) = gamma*beta + log(1 + e^{delta*beta}); the pressure of the wing {3,4}.
double wing_pressure(const ModelParams& params, double beta);
double wing_gap(const ModelParams& params, const DomainPoint& point);
Exponent wing_exponent(const ModelParams& params, const DomainPoint& point);

double riemann_zeta(double s);
/// zeta(1 + excess), accurate when the excess is tiny.
double riemann_zeta_above_one(double excess);

/// sum_{n>=1} (n+1)^{-s} e^{-n*rate}; requires s >= 0.
SeriesEval power_exp_series(Exponent s, double rate, const SeriesOptions& options = {});
/// The first n_terms terms, with a certified bound on everything after them.
SeriesEval power_exp_partial(Exponent s, double rate, long n_terms);

SeriesEval sigma1(const ModelParams& params, const DomainPoint& point,
                  const SeriesOptions& options = {});
SeriesEval sigma2(const ModelParams& params, const DomainPoint& point,
                  const SeriesOptions& options = {});
/// Wing block series.  Block lengths n >= 2 contribute e^{n*P34}(n+1)^{-eps*beta}/q^2
/// (q = 1 + e^{delta*beta}); a single "3" contributes e^{gamma*beta}2^{-eps*beta}.
SeriesEval sigma3(const ModelParams& params, const DomainPoint& point,
                  const SeriesOptions& options = {});

enum class SeriesId { one, two, three };
/// Term-wise Z-derivative of the given series.
SeriesEval dsigma_dz(SeriesId which, const ModelParams& params, const DomainPoint& point,
                     const SeriesOptions& options = {});

}  // namespace butterfly
