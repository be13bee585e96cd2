#include "butterfly/spectral.hpp"

#include <cmath>

#include "roots.hpp"

namespace butterfly {

namespace {

constexpr double kSmallestGap = 1e-300;

struct Pieces {
    SeriesEval s1, s2, s3;
    SpectralFailure failure = SpectralFailure::none;
};

Pieces constituents(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options,
                    bool with_one_family) {
    Pieces p;
    if (with_one_family) {
        p.s1 = sigma1(params, point, options);
        if (p.s1.divergent) {
            p.failure = SpectralFailure::one_family_diverges;
            return p;
        }
    }
    p.s2 = sigma2(params, point, options);
    if (p.s2.divergent) {
        p.failure = SpectralFailure::two_string_diverges;
        return p;
    }
    p.s3 = sigma3(params, point, options);
    if (p.s3.divergent) p.failure = SpectralFailure::wing_diverges;
    return p;
}

}  // namespace

SpectralValue lambda_1(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options) {
    SpectralValue out;
    auto p = constituents(params, point, options, true);
    out.constituents = {p.s1, p.s2, p.s3};
    out.failure = p.failure;
    if (p.failure != SpectralFailure::none) return out;

    const double m = params.wing_count();
    const double product = m * p.s2.value * p.s3.value;
    if (product >= 1.0) {
        out.failure = SpectralFailure::composition;
        return out;
    }
    const double prefactor = std::exp(-params.alpha * point.beta - point.z);
    const double denom = 1.0 - product;
    out.value = p.s1.value + p.s2.value * prefactor / denom;
    out.defined = true;
    out.tail_bound = p.s1.tail_bound + prefactor / denom * p.s2.tail_bound +
                     p.s2.value * prefactor * m / (denom * denom) *
                         (p.s3.value * p.s2.tail_bound + p.s2.value * p.s3.tail_bound);
    return out;
}

SpectralValue lambda_32(const ModelParams& params, const DomainPoint& point, const SeriesOptions& options) {
    SpectralValue out;
    auto p = constituents(params, point, options, false);
    out.constituents = {p.s1, p.s2, p.s3};
    out.failure = p.failure;
    if (p.failure != SpectralFailure::none) return out;

    const double product = p.s2.value * p.s3.value;
    const double dproduct = p.s3.value * p.s2.tail_bound + p.s2.value * p.s3.tail_bound;
    if (params.variant == Variant::A) {
        out.value = product;
        out.tail_bound = dproduct;
    } else {
        if (product >= 1.0) {
            out.failure = SpectralFailure::composition;
            return out;
        }
        out.value = product / (1.0 - product);
        out.tail_bound = dproduct / ((1.0 - product) * (1.0 - product));
    }
    out.defined = true;
    return out;
}

std::optional<double> composition_gap(const ModelParams& params, double beta, int multiplicity,
                                      const SeriesOptions& options) {
    auto above = [&](double gap) {
        const auto point = DomainPoint::above_wing(params, beta, gap);
        const auto s3 = sigma3(params, point, options);
        if (s3.divergent) return true;
        const auto s2 = sigma2(params, point, options);
        return s2.divergent || multiplicity * s2.value * s3.value >= 1.0;
    };
    if (!above(0.0)) return std::nullopt;
    if (!above(kSmallestGap)) return 0.0;
    double hi = 1.0;
    while (above(hi)) hi *= 2.0;
    return detail::bisect_positive(above, kSmallestGap, hi).hi;
}

AbscissaReport abscissa(const ModelParams& params, double beta, const SeriesOptions& options) {
    AbscissaReport r;
    const double p34 = wing_pressure(params, beta);
    const double one = std::log(static_cast<double>(params.L)) - params.alpha * beta;
    const auto gap = composition_gap(params, beta, params.wing_count(), options);
    const double wing = p34 + gap.value_or(0.0);
    if (one > wing) {
        r.z_c = one;
        r.binding = AbscissaBinding::geometric_one_family;
        r.converges_at_zc = false;
    } else if (gap) {
        r.z_c = wing;
        r.binding = AbscissaBinding::wing_composition;
        r.converges_at_zc = false;
    } else {
        r.z_c = p34;
        r.binding = AbscissaBinding::pressure_floor;
        r.converges_at_zc = lambda_1(params, DomainPoint::above_wing(params, beta, 0.0), options).defined;
    }
    return r;
}

}  // namespace butterfly
