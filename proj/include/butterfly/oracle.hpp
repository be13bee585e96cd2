#pragma once

#include <cstdint>
#include <vector>

#include "butterfly/parallel.hpp"
#include "butterfly/spectral.hpp"

namespace butterfly {

struct ReturnWord {
    Word word;
    int tau = 0;
    double weight = 0.0;
};

struct OracleComparison {
    double analytic = 0.0;
    double enumerated_partial = 0.0;
    int horizon = 0;
    std::int64_t enumeration_count = 0;
    double gap = 0.0;             // analytic - enumerated_partial
    double certified_tail = 0.0;  // bound on the weight of returns longer than the horizon
    /// Slack on both sides of [0, certified_tail] for rounding in the two sums.
    static constexpr double slack = 1e-10;

    bool passed() const { return gap >= -slack && gap <= certified_tail + slack; }
};

struct EnumerationOptions {
    ExecutionOptions exec{};
    /// Graph to enumerate on; defaults to the model's own graph.  Tests pass
    /// deliberately wrong graphs here.
    const TransitionGraph* graph = nullptr;
    /// Prefix depth at which the DFS tree is split into parallel tasks.
    int split_depth = 7;
};

constexpr int kMaxRawHorizon = 30;

/// Exhaustive first-return words to [1] with return time <= horizon, compared with lambda_1.
OracleComparison enumerate_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                        const EnumerationOptions& options = {});
/// First-return words to the pattern 3,2 on the graph without the 1-family, compared with lambda_32.
OracleComparison enumerate_returns_to_32(const ModelParams& params, double beta, double z, int horizon,
                                         const EnumerationOptions& options = {});
/// Returns to [1] summed over (2-run, wing-block) compositions instead of
/// symbols; reaches horizons in the thousands.
OracleComparison compressed_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                         const TransitionGraph* graph = nullptr);

/// The individual words behind enumerate_returns_to_1 (small horizons only).
std::vector<ReturnWord> collect_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                             const TransitionGraph* graph = nullptr);
std::vector<ReturnWord> collect_returns_to_32(const ModelParams& params, double beta, double z, int horizon,
                                              const TransitionGraph* graph = nullptr);

struct LnRow {
    int n = 0;
    double enumerated = 0.0;
    double closed_form = 0.0;
    double relative_error = 0.0;
};

/// Sum over wing words of length n that start and end with 3 of
/// exp(beta * (per-symbol weights)), against e^{n beta gamma}(1+e^{beta delta})^{n-2}.
std::vector<LnRow> check_ln(const ModelParams& params, double beta, int n_max,
                            Execution execution = Execution::parallel);

enum class Subsystem { full, without_one_family, wing };

TransitionGraph subsystem_graph(const ModelParams& params, Subsystem which);
/// log spectral radius of the 0/1 incidence matrix.
double incidence_entropy(const ModelParams& params, Subsystem which = Subsystem::full);
double incidence_entropy(const TransitionGraph& graph);

constexpr int kMaxPeriod = 14;

/// exp(beta * S_n phi) for the periodic point with period word `cycle`.
double periodic_weight(const ModelParams& params, const std::vector<Symbol>& cycle, double beta);
/// (1/n) log of the sum of periodic_weight over all admissible period-n cycles.
double periodic_orbit_pressure(const ModelParams& params, double beta, int n,
                               Subsystem which = Subsystem::full,
                               const ExecutionOptions& exec = {});
/// Extrapolation from periods n and n-2: (n p_n - (n-2) p_{n-2}) / 2.
double richardson_pressure(const ModelParams& params, double beta, int n, Subsystem which = Subsystem::full,
                           const ExecutionOptions& exec = {});

}  // namespace butterfly
