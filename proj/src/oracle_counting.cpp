#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "butterfly/oracle.hpp"

namespace butterfly {

namespace {

struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

constexpr double kCycleBudget = 5e9;

double closed_walks(const TransitionGraph& g, int n) {
    // trace(A^n) by propagating each unit vector; the graphs are tiny.
    double total = 0.0;
    std::vector<double> cur(g.size()), next(g.size());
    for (std::size_t s = 0; s < g.size(); ++s) {
        std::fill(cur.begin(), cur.end(), 0.0);
        cur[s] = 1.0;
        for (int k = 0; k < n; ++k) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t a = 0; a < g.size(); ++a)
                if (cur[a] != 0.0)
                    for (auto b : g.successors(a)) next[b] += cur[a];
            cur.swap(next);
        }
        total += cur[s];
    }
    return total;
}

class CycleEnumerator {
public:
    CycleEnumerator(const ModelParams& params, const TransitionGraph& g, double beta, int n)
        : params_(params), g_(g), beta_(beta), n_(n) {}

    // Sum over cycles whose first `prefix.size()` symbols are given.
    double sum_with_prefix(const std::vector<std::uint32_t>& prefix) const {
        std::array<std::uint32_t, kMaxPeriod> path{};
        std::copy(prefix.begin(), prefix.end(), path.begin());
        Neumaier acc;
        extend(path, static_cast<int>(prefix.size()), acc);
        return acc.value();
    }

private:
    void extend(std::array<std::uint32_t, kMaxPeriod>& path, int len, Neumaier& acc) const {
        if (len == n_) {
            if (!g_.allows(path[n_ - 1], path[0])) return;
            std::vector<Symbol> cycle(n_);
            for (int i = 0; i < n_; ++i) cycle[i] = g_.symbol(path[i]);
            acc.add(periodic_weight(params_, cycle, beta_));
            return;
        }
        for (auto c : g_.successors(path[len - 1])) {
            path[len] = static_cast<std::uint32_t>(c);
            extend(path, len + 1, acc);
        }
    }

    const ModelParams& params_;
    const TransitionGraph& g_;
    double beta_;
    int n_;
};

double cycle_sum(const ModelParams& params, const TransitionGraph& g, double beta, int n,
                 const ExecutionOptions& exec) {
    const CycleEnumerator e(params, g, beta, n);
    // Prefixes of length min(n, 3) are the parallel tasks.
    std::vector<std::vector<std::uint32_t>> tasks;
    const int depth = std::min(n, 3);
    std::vector<std::vector<std::uint32_t>> layer;
    for (std::size_t s = 0; s < g.size(); ++s) layer.push_back({static_cast<std::uint32_t>(s)});
    for (int d = 1; d < depth; ++d) {
        std::vector<std::vector<std::uint32_t>> next;
        for (const auto& p : layer)
            for (auto c : g.successors(p.back())) {
                auto q = p;
                q.push_back(static_cast<std::uint32_t>(c));
                next.push_back(std::move(q));
            }
        layer.swap(next);
    }
    tasks.swap(layer);

    const auto count = static_cast<std::ptrdiff_t>(tasks.size());
    if (exec.execution == Execution::serial) {
        Neumaier acc;
        for (std::ptrdiff_t i = 0; i < count; ++i) acc.add(e.sum_with_prefix(tasks[static_cast<std::size_t>(i)]));
        return acc.value();
    }
    if (exec.deterministic) {
        std::vector<double> partial(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < count; ++i)
            partial[static_cast<std::size_t>(i)] = e.sum_with_prefix(tasks[static_cast<std::size_t>(i)]);
        Neumaier acc;
        for (double p : partial) acc.add(p);
        return acc.value();
    }
    double total = 0.0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total)
    for (std::ptrdiff_t i = 0; i < count; ++i) total += e.sum_with_prefix(tasks[static_cast<std::size_t>(i)]);
    return total;
}

}  // namespace

std::vector<LnRow> check_ln(const ModelParams& params, double beta, int n_max, Execution execution) {
    params.validate();
    if (n_max < 2 || n_max > 20) throw PreconditionError("check_ln needs 2 <= n_max <= 20");
    const double w3 = beta * wing_potential(params, Letter::three, 0);
    const double w4 = beta * wing_potential(params, Letter::four, 0);

    std::vector<LnRow> rows;
    for (int n = 2; n <= n_max; ++n) {
        const int free = n - 2;
        const std::int64_t words = std::int64_t{1} << free;
        // Words 3 x_1 ... x_{n-2} 3, bit i of the mask selects 4 at position i + 1.
        auto weight = [&](std::int64_t mask) {
            double s = 2.0 * w3;
            for (int i = 0; i < free; ++i) s += ((mask >> i) & 1) ? w4 : w3;
            return std::exp(s);
        };
        constexpr std::int64_t chunks = 64;
        std::vector<double> partial(chunks, 0.0);
        auto run_chunk = [&](std::int64_t c) {
            Neumaier acc;
            const std::int64_t lo = words * c / chunks, hi = words * (c + 1) / chunks;
            for (std::int64_t m = lo; m < hi; ++m) acc.add(weight(m));
            partial[static_cast<std::size_t>(c)] = acc.value();
        };
        if (execution == Execution::serial) {
            for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
        } else {
#pragma omp parallel for schedule(static)
            for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
        }
        Neumaier total;
        for (double p : partial) total.add(p);

        LnRow row;
        row.n = n;
        row.enumerated = total.value();
        row.closed_form = std::exp(n * beta * params.gamma + free * softplus(beta * params.delta));
        row.relative_error = std::abs(row.enumerated - row.closed_form) / row.closed_form;
        rows.push_back(row);
    }
    return rows;
}

TransitionGraph subsystem_graph(const ModelParams& params, Subsystem which) {
    const auto g = TransitionGraph::butterfly(params);
    switch (which) {
        case Subsystem::full: return g;
        case Subsystem::without_one_family:
            return g.restricted([](const Symbol& s) { return !s.in_one_family(); });
        case Subsystem::wing:
            return g.restricted([](const Symbol& s) { return s.is_wing() && !s.is_primed(); });
    }
    return g;
}

double incidence_entropy(const ModelParams& params, Subsystem which) {
    return incidence_entropy(subsystem_graph(params, which));
}

double incidence_entropy(const TransitionGraph& g) {
    const std::size_t n = g.size();
    if (n == 0) throw PreconditionError("empty graph");
    // Power iteration on A + I (primitive when A is irreducible) with
    // Collatz-Wielandt bounds min/max (Bx)_i / x_i around the Perron root.
    std::vector<double> x(n, 1.0), y(n);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < 100000; ++it) {
        for (std::size_t a = 0; a < n; ++a) {
            double s = x[a];
            for (auto b : g.successors(a)) s += x[b];
            y[a] = s;
        }
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        double norm = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double r = y[a] / x[a];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            norm = std::max(norm, y[a]);
        }
        for (std::size_t a = 0; a < n; ++a) x[a] = y[a] / norm;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return std::log(0.5 * (lo + hi) - 1.0);
}

double periodic_weight(const ModelParams& params, const std::vector<Symbol>& cycle, double beta) {
    const int n = static_cast<int>(cycle.size());
    if (n == 0 || n > 64) throw PreconditionError("cycle length out of range");
    bool has_two = false, all_two = true;
    for (const auto& s : cycle) {
        has_two = has_two || s.is_two();
        all_two = all_two && s.is_two();
    }
    // Backward pass over the doubled word: distance to the next 2 and the
    // remaining length of the current 2-run, resolved cyclically.
    std::array<int, 129> next_two{}, run{};
    next_two[2 * n] = 1 << 20;
    run[2 * n] = 0;
    for (int i = 2 * n - 1; i >= 0; --i) {
        const bool next_is_two = cycle[(i + 1) % n].is_two();
        next_two[i] = next_is_two ? 1 : next_two[i + 1] + 1;
        run[i] = cycle[i % n].is_two() ? (next_is_two ? run[i + 1] + 1 : 1) : 0;
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const Symbol& x = cycle[i];
        if (x.in_one_family())
            s -= params.alpha;
        else if (x.is_two())
            s += two_potential(all_two ? 0 : run[i]);
        else if (x.is_wing())
            s += wing_potential(params, x.letter, has_two ? next_two[i] : 0);
    }
    return std::exp(beta * s);
}

double periodic_orbit_pressure(const ModelParams& params, double beta, int n, Subsystem which,
                               const ExecutionOptions& exec) {
    if (n < 1 || n > kMaxPeriod) throw PreconditionError("period outside 1..14");
    const auto g = subsystem_graph(params, which);
    if (closed_walks(g, n) > kCycleBudget) throw PreconditionError("too many cycles for this period");
    return std::log(cycle_sum(params, g, beta, n, exec)) / n;
}

double richardson_pressure(const ModelParams& params, double beta, int n, Subsystem which,
                           const ExecutionOptions& exec) {
    if (n < 3) throw PreconditionError("richardson_pressure needs n >= 3");
    const double pn = periodic_orbit_pressure(params, beta, n, which, exec);
    const double pm = periodic_orbit_pressure(params, beta, n - 2, which, exec);
    return (n * pn - (n - 2) * pm) / 2.0;
}

}  // namespace butterfly
