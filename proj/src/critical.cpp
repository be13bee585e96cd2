#include "butterfly/critical.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "roots.hpp"

namespace butterfly {

namespace {

constexpr double kSmallestGap = 1e-300;
constexpr double kSmallestExcess = 1e-300;
constexpr double kExcessCap = 65536.0;

DomainPoint floor_point(const ModelParams& params, double excess) {
    const double beta = (1.0 + excess) / params.epsilon;
    return DomainPoint::above_wing(params, beta, 0.0, excess);
}

double composition_product(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options) {
    const auto s3 = sigma3(params, point, options);
    const auto s2 = sigma2(params, point, options);
    if (s2.divergent || s3.divergent) return std::numeric_limits<double>::infinity();
    return params.wing_count() * s2.value * s3.value;
}

// Bisection in log(excess) for a predicate that holds below the root.
template <class Above>
detail::Bracket solve_excess(Above above, double lo) {
    double hi = std::max(1.0, 2.0 * lo);
    while (above(hi)) {
        hi *= 2.0;
        if (hi > kExcessCap) throw std::runtime_error("no sign change below the bracket cap");
    }
    return detail::bisect_positive(above, lo, hi);
}

PressureLevel solve_full(const ModelParams& params, double beta, const SeriesOptions& options) {
    const double p34 = wing_pressure(params, beta);
    double floor_gap = std::max(0.0, std::log(static_cast<double>(params.L)) - params.alpha * beta - p34);
    if (auto comp = composition_gap(params, beta, params.wing_count(), options))
        floor_gap = std::max(floor_gap, *comp);

    auto above = [&](double gap) {
        const auto lam = lambda_1(params, DomainPoint::above_wing(params, beta, gap), options);
        return !lam.defined || lam.value >= 1.0;
    };
    if (floor_gap == 0.0 && !above(0.0)) return {p34, 0.0};
    const double start = std::max(floor_gap, kSmallestGap);
    if (!above(start)) return {p34 + floor_gap, floor_gap};
    double hi = std::max(1.0, 2.0 * start);
    while (above(hi)) hi *= 2.0;
    const double gap = detail::bisect_positive(above, start, hi).hi;
    return {p34 + gap, gap};
}

}  // namespace

double pressure_34(const ModelParams& params, double beta) { return wing_pressure(params, beta); }

std::optional<PressureLevel> ztilde_c(const ModelParams& params, double beta, const SeriesOptions& options) {
    const auto gap = composition_gap(params, beta, params.wing_count(), options);
    if (!gap) return std::nullopt;
    return PressureLevel{wing_pressure(params, beta) + *gap, *gap};
}

CriticalSet critical_set(const ModelParams& params, const SeriesOptions& options) {
    params.validate();
    CriticalSet c;

    auto lo_above = [&](double u) { return composition_product(params, floor_point(params, u), options) >= 1.0; };
    const auto lo = solve_excess(lo_above, kSmallestExcess);
    const double u_lo = lo.hi;
    c.excess_lo = u_lo;
    c.beta_lo = (1.0 + u_lo) / params.epsilon;
    c.residual_lo = composition_product(params, floor_point(params, u_lo), options) - 1.0;
    c.bracket_lo = {(1.0 + lo.lo) / params.epsilon, (1.0 + lo.hi) / params.epsilon};

    auto hi_above = [&](double u) {
        const auto lam = lambda_1(params, floor_point(params, u), options);
        return !lam.defined || lam.value >= 1.0;
    };
    const auto hi = solve_excess(hi_above, lo.lo);
    c.excess_hi = hi.hi;
    c.beta_hi = (1.0 + hi.hi) / params.epsilon;
    c.residual_hi = lambda_1(params, floor_point(params, hi.hi), options).value - 1.0;
    c.bracket_hi = {(1.0 + hi.lo) / params.epsilon, (1.0 + hi.hi) / params.epsilon};
    return c;
}

double beta_lo(const ModelParams& params, const SeriesOptions& options) {
    return critical_set(params, options).beta_lo;
}

double beta_hi(const ModelParams& params, const SeriesOptions& options) {
    return critical_set(params, options).beta_hi;
}

PressureLevel pressure_full(const ModelParams& params, double beta, const SeriesOptions& options) {
    if (beta < 0.0) throw PreconditionError("beta must be nonnegative");
    return solve_full(params, beta, options);
}

PressureLevel pressure_full(const ModelParams& params, double beta, const CriticalSet& critical,
                            const SeriesOptions& options) {
    if (beta < 0.0) throw PreconditionError("beta must be nonnegative");
    if (beta >= critical.beta_hi) return {wing_pressure(params, beta), 0.0};
    return solve_full(params, beta, options);
}

PressureLevel pressure_mid(const ModelParams& params, double beta, const SeriesOptions& options) {
    if (beta < 0.0) throw PreconditionError("beta must be nonnegative");
    if (auto z = ztilde_c(params, beta, options)) return *z;
    return {wing_pressure(params, beta), 0.0};
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::below_lo: return "BelowLo";
        case Regime::between: return "Between";
        case Regime::above_hi: return "AboveHi";
    }
    return "?";
}

std::vector<PressureSample> pressure_curve(const ModelParams& params, const CriticalSet& critical,
                                           std::span<const double> betas, Execution execution,
                                           const SeriesOptions& options) {
    params.validate();
    for (double b : betas)
        if (!(b >= 0.0)) throw PreconditionError("beta grid must be nonnegative");

    std::vector<PressureSample> out(betas.size());
    auto fill = [&](std::size_t i) {
        PressureSample& s = out[i];
        s.beta = betas[i];
        s.p34 = wing_pressure(params, s.beta);
        if (auto z = ztilde_c(params, s.beta, options)) {
            s.ztilde = z->value;
            s.p_mid = z->value;
            s.gap_mid = z->gap;
        } else {
            s.p_mid = s.p34;
        }
        const auto full = pressure_full(params, s.beta, critical, options);
        s.p_full = full.value;
        s.gap_full = full.gap;
        s.regime = s.beta < critical.beta_lo   ? Regime::below_lo
                   : s.beta < critical.beta_hi ? Regime::between
                                               : Regime::above_hi;
    };

    const auto n = static_cast<std::ptrdiff_t>(betas.size());
    if (execution == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
    }
    return out;
}

EquilibriumReport equilibrium_report(const ModelParams& params, const CriticalSet& critical, Transition which,
                                     const SeriesOptions& options) {
    EquilibriumReport r;
    const bool upper = which == Transition::upper;
    r.eps_beta_excess = upper ? critical.excess_hi : critical.excess_lo;
    r.beta_star = upper ? critical.beta_hi : critical.beta_lo;
    r.eps_beta = 1.0 + r.eps_beta_excess;
    r.cylinder = upper ? Cylinder::one : Cylinder::three_two;
    const auto d = dsigma_dz(SeriesId::three, params, floor_point(params, r.eps_beta_excess), options);
    r.return_time_derivative_finite = !d.divergent;

    std::ostringstream v;
    if (params.variant == Variant::A) {
        r.weight_on_cylinder = r.return_time_derivative_finite;
        r.count_lower_bound = (upper && r.weight_on_cylinder) ? 2 : 1;
        if (upper) {
            if (r.weight_on_cylinder)
                v << "eps*beta_c>2: at least two equilibrium states, one gives weight to [1]";
            else
                v << "eps*beta_c<2: no equilibrium gives weight to [1]";
        } else {
            v << (r.weight_on_cylinder ? "eps*beta_1>2: two equilibrium states for the subsystem without [1]"
                                       : "eps*beta_1<2: unique equilibrium state for the subsystem without [1]");
        }
    } else {
        r.weight_on_cylinder = r.return_time_derivative_finite;
        r.count_lower_bound = 2;
        v << "two equilibria (wing symmetry); "
          << (r.weight_on_cylinder ? "the inducing cylinder is charged" : "the inducing cylinder is not charged");
    }
    r.verdict = v.str();
    return r;
}

EquilibriumReport equilibrium_report_at(const ModelParams& params, const CriticalSet& critical, double beta_star,
                                        const SeriesOptions& options) {
    if (beta_star < 0.0) throw PreconditionError("beta must be nonnegative");
    if (beta_star == critical.beta_hi) return equilibrium_report(params, critical, Transition::upper, options);
    EquilibriumReport r;
    r.beta_star = beta_star;
    r.eps_beta = params.epsilon * beta_star;
    r.eps_beta_excess = std::fma(params.epsilon, beta_star, -1.0);
    r.cylinder = Cylinder::one;
    if (beta_star < critical.beta_hi) {
        const auto p = pressure_full(params, beta_star, critical, options);
        const auto d = dsigma_dz(SeriesId::three, params, DomainPoint::above_wing(params, beta_star, p.gap), options);
        r.return_time_derivative_finite = !d.divergent;
        r.count_lower_bound = 1;
        r.weight_on_cylinder = true;
        r.verdict = "P>P34: unique equilibrium state, it gives weight to [1]";
    } else {
        const auto d = dsigma_dz(SeriesId::three, params, DomainPoint::above_wing(params, beta_star, 0.0), options);
        r.return_time_derivative_finite = !d.divergent;
        r.weight_on_cylinder = false;
        if (params.variant == Variant::A) {
            r.count_lower_bound = 1;
            r.verdict = "P=P34: equilibrium state carried by the wing {3,4}, no weight on [1]";
        } else {
            r.count_lower_bound = 2;
            r.verdict = "two equilibria (wing symmetry); pressure analytic";
        }
    }
    return r;
}

GateauxReport gateaux_check(const ModelParams& params, double beta, std::span<const double> t_values,
                            const SeriesOptions& options) {
    if (params.variant != Variant::B) throw PreconditionError("gateaux_check needs variant B");
    const auto critical = critical_set(params, options);
    if (!(beta > critical.beta_hi)) throw PreconditionError("gateaux_check needs beta above the upper transition");

    GateauxReport r;
    const double p0 = pressure_full(params, beta, options).value;
    const double w0 = wing_pressure(params, beta);
    double best_left = -std::numeric_limits<double>::infinity();
    double best_right = std::numeric_limits<double>::infinity();
    for (double t : t_values) {
        if (t == 0.0) continue;
        ModelParams shifted = params;
        shifted.gamma = params.gamma + t;
        shifted.validate();

        const double sym = (pressure_full(shifted, beta, options).value - p0) / t;

        const double wt = wing_pressure(shifted, beta);
        const double z = std::max(wt, w0);
        const double asym = (z - w0) / t;

        // The [1]-operator with unequal wings: each wing series sits at its own gap.
        const auto point = DomainPoint::at(beta, z);
        const auto s1 = sigma1(params, point, options);
        const auto s2 = sigma2(params, point, options);
        const auto sa = sigma3(params, DomainPoint::above_wing(shifted, beta, z - wt), options);
        const auto sb = sigma3(params, DomainPoint::above_wing(params, beta, z - w0), options);
        const double comp = s2.value * (sa.value + sb.value);
        const bool frozen = !s1.divergent && !s2.divergent && !sa.divergent && !sb.divergent && comp < 1.0 &&
                            s1.value + s2.value * std::exp(-params.alpha * beta - z) / (1.0 - comp) < 1.0;
        r.asymmetric_frozen = r.asymmetric_frozen && frozen;

        r.t.push_back(t);
        r.symmetric.push_back(sym);
        r.asymmetric.push_back(asym);
        if (t < 0.0 && t > best_left) {
            best_left = t;
            r.symmetric_left = sym;
            r.asymmetric_left = asym;
        }
        if (t > 0.0 && t < best_right) {
            best_right = t;
            r.symmetric_right = sym;
            r.asymmetric_right = asym;
        }
    }
    if (!std::isfinite(best_left) || !std::isfinite(best_right))
        throw PreconditionError("t values must include both signs");
    return r;
}

std::size_t kink_index(std::span<const double> values) {
    std::size_t best = 0;
    double worst = -1.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double d2 = std::abs(values[i + 1] - 2.0 * values[i] + values[i - 1]);
        if (d2 > worst) {
            worst = d2;
            best = i;
        }
    }
    return best;
}

}  // namespace butterfly
