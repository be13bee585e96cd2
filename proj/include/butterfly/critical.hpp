#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "butterfly/parallel.hpp"
#include "butterfly/spectral.hpp"

namespace butterfly {

/// A pressure value Z = P34(beta) + gap with the gap kept separately.  Near
/// epsilon*beta = 1 the gap can be far below the spacing of doubles at Z.
struct PressureLevel {
    double value = 0.0;
    double gap = 0.0;
};

/// The two transitions: beta_lo (wing composition reaches 1 at the wing
/// floor) and beta_hi (the [1]-operator reaches 1 there).  Both are solved in
/// the excess u = epsilon*beta - 1, which is also reported.
struct CriticalSet {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double excess_lo = 0.0;
    double excess_hi = 0.0;
    double residual_lo = 0.0;
    double residual_hi = 0.0;
    std::pair<double, double> bracket_lo{};
    std::pair<double, double> bracket_hi{};

    double eps_beta_lo(const ModelParams& p) const { return p.epsilon * beta_lo; }
    double eps_beta_hi(const ModelParams& p) const { return p.epsilon * beta_hi; }
};

double pressure_34(const ModelParams& params, double beta);

/// Z at which multiplicity * Sigma2 * Sigma3 = 1 above the wing floor; absent
/// once the product is at most 1 on the floor itself (beta >= beta_lo).
std::optional<PressureLevel> ztilde_c(const ModelParams& params, double beta,
                                      const SeriesOptions& options = {});

CriticalSet critical_set(const ModelParams& params, const SeriesOptions& options = {});
double beta_lo(const ModelParams& params, const SeriesOptions& options = {});
double beta_hi(const ModelParams& params, const SeriesOptions& options = {});

/// Root of lambda_1 = 1, or P34 when lambda_1 < 1 on the wing floor.
PressureLevel pressure_full(const ModelParams& params, double beta, const SeriesOptions& options = {});
/// Same, with the frozen branch decided by a precomputed critical set.
PressureLevel pressure_full(const ModelParams& params, double beta, const CriticalSet& critical,
                            const SeriesOptions& options = {});
/// Pressure of the subsystem without the 1-family.
PressureLevel pressure_mid(const ModelParams& params, double beta, const SeriesOptions& options = {});

enum class Regime { below_lo, between, above_hi };
const char* to_string(Regime r);

struct PressureSample {
    double beta = 0.0;
    double p34 = 0.0;
    double p_mid = 0.0;
    double p_full = 0.0;
    double gap_mid = 0.0;
    double gap_full = 0.0;
    std::optional<double> ztilde;
    Regime regime = Regime::below_lo;
};

std::vector<PressureSample> pressure_curve(const ModelParams& params, const CriticalSet& critical,
                                           std::span<const double> betas,
                                           Execution execution = Execution::parallel,
                                           const SeriesOptions& options = {});

enum class Transition { lower, upper };
enum class Cylinder { one, three_two };

struct EquilibriumReport {
    double beta_star = 0.0;
    double eps_beta = 0.0;
    double eps_beta_excess = 0.0;
    bool return_time_derivative_finite = false;
    int count_lower_bound = 1;
    Cylinder cylinder = Cylinder::one;
    /// Whether an equilibrium state charges the cylinder the analysis induces on.
    bool weight_on_cylinder = false;
    std::string verdict;
};

EquilibriumReport equilibrium_report(const ModelParams& params, const CriticalSet& critical,
                                     Transition which, const SeriesOptions& options = {});
EquilibriumReport equilibrium_report_at(const ModelParams& params, const CriticalSet& critical,
                                        double beta_star, const SeriesOptions& options = {});

struct GateauxReport {
    std::vector<double> t;
    std::vector<double> symmetric;   // (P(t) - P(0))/t with gamma + t on both wings
    std::vector<double> asymmetric;  // gamma + t on the unprimed wing only
    double symmetric_left = 0.0, symmetric_right = 0.0;
    double asymmetric_left = 0.0, asymmetric_right = 0.0;
    /// lambda_1 of the asymmetric system stays below 1 at the larger wing pressure,
    /// so the 1-family is not charged and P(t) is the max of the two wing pressures.
    bool asymmetric_frozen = true;
};

GateauxReport gateaux_check(const ModelParams& params, double beta, std::span<const double> t_values,
                            const SeriesOptions& options = {});

/// Index of the largest |second difference|; a kink in sampled values shows up there.
std::size_t kink_index(std::span<const double> values);

}  // namespace butterfly
