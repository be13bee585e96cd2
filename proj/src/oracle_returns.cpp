#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "butterfly/oracle.hpp"

namespace butterfly {

namespace {

enum class Target { one, three_two };
enum Kind : std::uint8_t { k_one_family, k_two, k_wing, k_other };

constexpr double kWalkBudget = 2e10;

struct Accum {
    double sum = 0.0, comp = 0.0;
    std::int64_t count = 0;

    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
        ++count;
    }
    double value() const { return sum + comp; }
};

// Everything the DFS needs, precomputed from the potential's pointwise definitions.
struct Tables {
    std::vector<double> step;        // exp(beta * base(symbol) - z)
    std::vector<Kind> kind;
    std::vector<double> close_two;   // close_two[k]: exp(beta * sum of two_potential over a run of k)
    std::vector<double> close_wing;  // close_wing[m]: exp(beta * sum of wing corrections over a block of m)

    Tables(const ModelParams& params, const TransitionGraph& g, double beta, double z, int horizon) {
        step.resize(g.size());
        kind.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Symbol& s = g.symbol(i);
            if (s.in_one_family()) {
                kind[i] = k_one_family;
                step[i] = std::exp(-beta * params.alpha - z);
            } else if (s.is_two()) {
                kind[i] = k_two;
                step[i] = std::exp(-z);
            } else if (s.is_wing()) {
                kind[i] = k_wing;
                step[i] = std::exp(beta * wing_potential(params, s.letter, 0) - z);
            } else {
                kind[i] = k_other;
                step[i] = std::exp(-z);
            }
        }
        const int size = horizon + 2;
        close_two.assign(size, 1.0);
        close_wing.assign(size, 1.0);
        double two_sum = 0.0, wing_sum = 0.0;
        const double base = wing_potential(params, Letter::three, 0);
        for (int k = 1; k < size; ++k) {
            two_sum += two_potential(k);
            wing_sum += wing_potential(params, Letter::three, k) - base;
            close_two[k] = std::exp(beta * two_sum);
            close_wing[k] = std::exp(beta * wing_sum);
        }
    }
};

struct Node {
    std::uint32_t last = 0;
    int len = 0;
    int run2 = 0;  // open 2-run ending at `last`
    int runw = 0;  // open wing block ending at `last`
    double w = 0.0;
};

class Walker {
public:
    Walker(const TransitionGraph& g, const Tables& t, Target target, int horizon)
        : g_(g), t_(t), target_(target), horizon_(horizon) {
        one_ = g.index_of(Symbol::one()).value_or(npos);
        three_ = g.index_of(Symbol::three()).value_or(npos);
        two_ = g.index_of(Symbol::two()).value_or(npos);
    }

    int horizon() const { return horizon_; }
    const std::vector<std::size_t>& successors(const Node& n) const { return g_.successors(n.last); }
    std::size_t one() const { return one_; }
    std::size_t three() const { return three_; }
    std::size_t two() const { return two_; }

    Node root() const {
        if (target_ == Target::one) {
            if (one_ == npos) throw PreconditionError("graph has no symbol 1");
            return {static_cast<std::uint32_t>(one_), 1, 0, 0, t_.step[one_]};
        }
        if (three_ == npos || two_ == npos || !g_.allows(three_, two_))
            throw PreconditionError("graph has no 3 -> 2 edge");
        const Node first{static_cast<std::uint32_t>(three_), 1, 0, 1, t_.step[three_]};
        Node second;
        advance(first, two_, second);
        return second;
    }

    // Appends symbol c; false if that would re-enter the inducing cylinder.
    bool push(const Node& from, std::size_t c, Node& to) const {
        if (target_ == Target::one && c == one_) return false;
        if (target_ == Target::three_two && c == two_ && from.last == three_) return false;
        advance(from, c, to);
        return true;
    }

    // Weight of `n` as a complete return word, if it can be followed by the re-entry.
    bool leaf(const Node& n, double& weight) const {
        if (target_ == Target::one) {
            if (!g_.allows(n.last, one_)) return false;
            if (n.runw > 0) throw PreconditionError("wing block before [1] has no following 2");
            weight = t_.kind[n.last] == k_two ? n.w * t_.close_two[n.run2] : n.w;
            return true;
        }
        if (!g_.allows(n.last, three_)) return false;
        weight = n.w;
        if (t_.kind[n.last] == k_two) weight *= t_.close_two[n.run2];
        // The re-entry 3,2 puts the next 2 one step further from every pending wing symbol.
        if (n.runw > 0) weight *= t_.close_wing[n.runw + 1] / t_.close_wing[1];
        return true;
    }

    template <class Sink>
    void dfs(const Node& n, Sink& sink) const {
        double w;
        if (leaf(n, w)) sink(n, w);
        if (n.len == horizon_) return;
        for (auto c : g_.successors(n.last)) {
            Node m;
            if (push(n, c, m)) dfs(m, sink);
        }
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    void advance(const Node& from, std::size_t c, Node& to) const {
        const Kind kc = t_.kind[c], kl = t_.kind[from.last];
        to.last = static_cast<std::uint32_t>(c);
        to.len = from.len + 1;
        to.w = from.w * t_.step[c];
        to.run2 = 0;
        to.runw = 0;
        if (kl == k_two && kc != k_two) to.w *= t_.close_two[from.run2];
        if (kc == k_two) {
            to.run2 = (kl == k_two) ? from.run2 + 1 : 1;
            if (from.runw > 0) to.w *= t_.close_wing[from.runw];
        } else if (kc == k_wing) {
            to.runw = from.runw + 1;
        } else if (from.runw > 0) {
            throw PreconditionError("wing block interrupted before reaching a 2");
        }
    }

    const TransitionGraph& g_;
    const Tables& t_;
    Target target_;
    int horizon_;
    std::size_t one_, three_, two_;
};

// Upper bound on the number of DFS nodes: walks of length <= horizon from the
// root that never step into `excluded`.
double walk_count(const TransitionGraph& g, std::size_t start, int horizon,
                  std::size_t excluded = std::numeric_limits<std::size_t>::max()) {
    std::vector<double> cur(g.size(), 0.0), next(g.size());
    cur[start] = 1.0;
    double total = 1.0;
    for (int len = 1; len < horizon; ++len) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < g.size(); ++a)
            if (cur[a] != 0.0)
                for (auto b : g.successors(a))
                    if (b != excluded) next[b] += cur[a];
        cur.swap(next);
        for (double x : cur) total += x;
    }
    return total;
}

struct RawResult {
    double sum = 0.0;
    std::int64_t count = 0;
};

RawResult run_walker(const Walker& walker, const ExecutionOptions& exec, int split_depth) {
    const Node root = walker.root();
    if (exec.execution == Execution::serial) {
        Accum acc;
        auto sink = [&](const Node&, double w) { acc.add(w); };
        walker.dfs(root, sink);
        return {acc.value(), acc.count};
    }

    // Breadth-first expansion to the split depth; interior leaves are counted here.
    Accum prefix;
    std::vector<Node> frontier{root}, next;
    const int depth = std::min(split_depth, walker.horizon());
    while (!frontier.empty() && frontier.front().len < depth) {
        next.clear();
        for (const Node& n : frontier) {
            double w;
            if (walker.leaf(n, w)) prefix.add(w);
            for (auto c : walker.successors(n)) {
                Node m;
                if (walker.push(n, c, m)) next.push_back(m);
            }
        }
        frontier.swap(next);
    }

    const auto tasks = static_cast<std::ptrdiff_t>(frontier.size());
    std::vector<Accum> partial(frontier.size());
    if (exec.deterministic) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < tasks; ++i) {
            auto& acc = partial[static_cast<std::size_t>(i)];
            auto sink = [&](const Node&, double w) { acc.add(w); };
            walker.dfs(frontier[static_cast<std::size_t>(i)], sink);
        }
        Accum total = prefix;
        std::int64_t count = prefix.count;
        for (const auto& p : partial) {
            total.add(p.value());
            count += p.count;
        }
        return {total.value(), count};
    }

    double sum = 0.0;
    std::int64_t count = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : sum, count)
    for (std::ptrdiff_t i = 0; i < tasks; ++i) {
        Accum acc;
        auto sink = [&](const Node&, double w) { acc.add(w); };
        walker.dfs(frontier[static_cast<std::size_t>(i)], sink);
        sum += acc.value();
        count += acc.count;
    }
    return {prefix.value() + sum, prefix.count + count};
}

template <class Lambda>
double chernoff_tail(Lambda lambda_at, double z, double z_floor, int horizon) {
    double best = std::numeric_limits<double>::infinity();
    constexpr int steps = 400;
    for (int k = 1; k < steps; ++k) {
        const double zp = z_floor + (z - z_floor) * k / steps;
        const auto lam = lambda_at(zp);
        if (!lam.defined) continue;
        best = std::min(best, std::exp(-(z - zp) * (horizon + 1.0)) * (lam.value + lam.tail_bound));
    }
    return best;
}

TransitionGraph graph_for(const ModelParams& params, const TransitionGraph* graph, Target target) {
    TransitionGraph g = graph ? *graph : TransitionGraph::butterfly(params);
    if (target == Target::three_two) return g.restricted([](const Symbol& s) { return !s.in_one_family(); });
    return g;
}

void check_horizon(int horizon, int minimum) {
    if (horizon < minimum) throw PreconditionError("horizon too small");
    if (horizon > kMaxRawHorizon) throw PreconditionError("horizon above the raw-enumeration guard");
}

OracleComparison compare(double enumerated, std::int64_t count, int horizon, const SpectralValue& analytic,
                         double tail) {
    OracleComparison c;
    c.analytic = analytic.value;
    c.enumerated_partial = enumerated;
    c.horizon = horizon;
    c.enumeration_count = count;
    c.gap = analytic.value - enumerated;
    c.certified_tail = tail + analytic.tail_bound;
    return c;
}

std::vector<ReturnWord> collect(const ModelParams& params, double beta, double z, int horizon,
                                const TransitionGraph* graph, Target target) {
    check_horizon(horizon, target == Target::one ? 1 : 2);
    const auto g = graph_for(params, graph, target);
    const Tables tables(params, g, beta, z, horizon);
    const Walker walker(g, tables, target, horizon);

    std::vector<ReturnWord> out;
    std::vector<std::uint32_t> path;
    // Rebuild the path of each leaf from parent links kept on an explicit stack.
    struct Frame {
        Node node;
        std::size_t depth;
    };
    std::vector<Frame> stack{{walker.root(), 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        path.resize(f.depth);
        path.push_back(f.node.last);
        double w;
        if (walker.leaf(f.node, w)) {
            ReturnWord rw;
            if (target == Target::three_two) rw.word.symbols.push_back(Symbol::three());
            for (auto i : path) rw.word.symbols.push_back(g.symbol(i));
            rw.word.continuation = target == Target::one ? Continuation::into_one : Continuation::into_three_two;
            rw.tau = f.node.len;
            rw.weight = w;
            out.push_back(std::move(rw));
        }
        if (f.node.len == horizon) continue;
        const auto& succ = g.successors(f.node.last);
        for (auto it = succ.rbegin(); it != succ.rend(); ++it) {
            Node m;
            if (walker.push(f.node, *it, m)) stack.push_back({m, f.depth + 1});
        }
    }
    return out;
}

}  // namespace

OracleComparison enumerate_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                        const EnumerationOptions& options) {
    check_horizon(horizon, 1);
    const auto g = graph_for(params, options.graph, Target::one);
    const auto start = g.index_of(Symbol::one());
    if (!start) throw PreconditionError("graph has no symbol 1");
    if (walk_count(g, *start, horizon, *start) > kWalkBudget)
        throw PreconditionError("enumeration would exceed the node budget");

    const auto report = abscissa(params, beta);
    if (!(z > report.z_c)) throw PreconditionError("Z is not inside the convergence domain of lambda_1");
    const auto analytic = lambda_1(params, DomainPoint::at(beta, z));
    if (!analytic.defined) throw PreconditionError("lambda_1 undefined at the requested point");

    const Tables tables(params, g, beta, z, horizon);
    const Walker walker(g, tables, Target::one, horizon);
    const auto raw = run_walker(walker, options.exec, options.split_depth);
    const double tail = chernoff_tail(
        [&](double zp) { return lambda_1(params, DomainPoint::at(beta, zp)); }, z, report.z_c, horizon);
    return compare(raw.sum, raw.count, horizon, analytic, tail);
}

OracleComparison enumerate_returns_to_32(const ModelParams& params, double beta, double z, int horizon,
                                         const EnumerationOptions& options) {
    check_horizon(horizon, 2);
    const auto g = graph_for(params, options.graph, Target::three_two);
    const auto three = g.index_of(Symbol::three());
    if (!three) throw PreconditionError("graph has no symbol 3");
    if (walk_count(g, *three, horizon) > kWalkBudget)
        throw PreconditionError("enumeration would exceed the node budget");

    double z_floor = wing_pressure(params, beta);
    if (params.variant == Variant::B) z_floor += composition_gap(params, beta, 1).value_or(0.0);
    if (!(z > z_floor)) throw PreconditionError("Z is not inside the convergence domain of lambda_32");
    const auto analytic = lambda_32(params, DomainPoint::at(beta, z));
    if (!analytic.defined) throw PreconditionError("lambda_32 undefined at the requested point");

    const Tables tables(params, g, beta, z, horizon);
    const Walker walker(g, tables, Target::three_two, horizon);
    const auto raw = run_walker(walker, options.exec, options.split_depth);
    const double tail = chernoff_tail(
        [&](double zp) { return lambda_32(params, DomainPoint::at(beta, zp)); }, z, z_floor, horizon);
    return compare(raw.sum, raw.count, horizon, analytic, tail);
}

std::vector<ReturnWord> collect_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                             const TransitionGraph* graph) {
    return collect(params, beta, z, horizon, graph, Target::one);
}

std::vector<ReturnWord> collect_returns_to_32(const ModelParams& params, double beta, double z, int horizon,
                                              const TransitionGraph* graph) {
    return collect(params, beta, z, horizon, graph, Target::three_two);
}

OracleComparison compressed_returns_to_1(const ModelParams& params, double beta, double z, int horizon,
                                         const TransitionGraph* graph) {
    if (horizon < 1) throw PreconditionError("horizon too small");
    const auto g = graph_for(params, graph, Target::one);
    const auto one_idx = g.index_of(Symbol::one());
    if (!one_idx) throw PreconditionError("graph has no symbol 1");
    const std::size_t one = *one_idx;

    const auto report = abscissa(params, beta);
    if (!(z > report.z_c)) throw PreconditionError("Z is not inside the convergence domain of lambda_1");
    const auto analytic = lambda_1(params, DomainPoint::at(beta, z));
    if (!analytic.defined) throw PreconditionError("lambda_1 undefined at the requested point");

    const Tables t(params, g, beta, z, horizon);
    const std::size_t S = g.size();
    const auto H = static_cast<std::size_t>(horizon) + 1;
    // layer[s * H + r]: total weight of words of the current length ending in s
    // with an open run of length r (2-run if s is a 2, wing block if s is a wing symbol).
    std::vector<double> cur(S * H, 0.0), next(S * H, 0.0);
    std::vector<long double> cur_n(S * H, 0.0L), next_n(S * H, 0.0L);
    cur[one * H] = t.step[one];
    cur_n[one * H] = 1.0L;

    Accum acc;
    long double words = 0.0L;
    for (int len = 1; len <= horizon; ++len) {
        for (std::size_t s = 0; s < S; ++s) {
            if (!g.allows(s, one)) continue;
            for (std::size_t r = 0; r < H; ++r) {
                const double w = cur[s * H + r];
                if (w == 0.0) continue;
                if (t.kind[s] == k_wing && r > 0) throw PreconditionError("wing block before [1] has no following 2");
                acc.add(t.kind[s] == k_two ? w * t.close_two[r] : w);
                words += cur_n[s * H + r];
            }
        }
        if (len == horizon) break;
        std::fill(next.begin(), next.end(), 0.0);
        std::fill(next_n.begin(), next_n.end(), 0.0L);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t r = 0; r < H; ++r) {
                const double w = cur[s * H + r];
                if (w == 0.0) continue;
                const long double n = cur_n[s * H + r];
                for (auto c : g.successors(s)) {
                    if (c == one) continue;
                    double nw = w * t.step[c];
                    std::size_t nr = 0;
                    const Kind kc = t.kind[c], ks = t.kind[s];
                    if (ks == k_two && kc != k_two) nw *= t.close_two[r];
                    if (kc == k_two) {
                        nr = ks == k_two ? r + 1 : 1;
                        if (ks == k_wing) nw *= t.close_wing[r];
                    } else if (kc == k_wing) {
                        nr = ks == k_wing ? r + 1 : 1;
                    } else if (ks == k_wing) {
                        throw PreconditionError("wing block interrupted before reaching a 2");
                    }
                    next[c * H + nr] += nw;
                    next_n[c * H + nr] += n;
                }
            }
        }
        cur.swap(next);
        cur_n.swap(next_n);
    }

    const double tail = chernoff_tail(
        [&](double zp) { return lambda_1(params, DomainPoint::at(beta, zp)); }, z, report.z_c, horizon);
    const auto count = words > static_cast<long double>(std::numeric_limits<std::int64_t>::max())
                           ? std::numeric_limits<std::int64_t>::max()
                           : static_cast<std::int64_t>(words);
    return compare(acc.value(), count, horizon, analytic, tail);
}

}  // namespace butterfly
