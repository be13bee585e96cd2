#pragma once

#include <optional>

#include "butterfly/series.hpp"

namespace butterfly {

enum class SpectralFailure {
    none,
    one_family_diverges,  // Sigma1
    two_string_diverges,  // Sigma2
    wing_diverges,        // Sigma3
    composition,          // m * Sigma2 * Sigma3 >= 1
};

struct SpectralValue {
    double value = 0.0;
    bool defined = false;
    SpectralFailure failure = SpectralFailure::none;
    struct {
        SeriesEval s1, s2, s3;
    } constituents;
    /// Sum of the constituent tail bounds propagated through the formula (first order).
    double tail_bound = 0.0;
};

/// Spectral radius of the operator induced on [1].
SpectralValue lambda_1(const ModelParams& params, const DomainPoint& point,
                       const SeriesOptions& options = {});
/// Spectral radius of the operator induced on [32] (the subsystem without the 1-family).
SpectralValue lambda_32(const ModelParams& params, const DomainPoint& point,
                        const SeriesOptions& options = {});

enum class AbscissaBinding { geometric_one_family, wing_composition, pressure_floor };

struct AbscissaReport {
    double z_c = 0.0;
    AbscissaBinding binding = AbscissaBinding::pressure_floor;
    bool converges_at_zc = false;
};

/// Gap W > 0 above P34(beta) at which multiplicity * Sigma2 * Sigma3 = 1, if the
/// product exceeds 1 at the wing boundary.  Returns 0 when the root lies below
/// the smallest representable gap.
std::optional<double> composition_gap(const ModelParams& params, double beta, int multiplicity,
                                      const SeriesOptions& options = {});

AbscissaReport abscissa(const ModelParams& params, double beta, const SeriesOptions& options = {});

}  // namespace butterfly
