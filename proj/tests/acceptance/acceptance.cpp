// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion 4   a single criterion (exit status 1 on FAIL)

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "butterfly/critical.hpp"
#include "butterfly/oracle.hpp"

using namespace butterfly;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "  failed: " << what << '\n';
        }
    }
    void note(const std::string& s) { detail << "  " << s << '\n'; }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

ModelParams with_delta(double d) {
    auto p = ModelParams::reference();
    p.delta = d;
    return p;
}

ModelParams with_L(int L) {
    auto p = ModelParams::reference();
    p.L = L;
    return p;
}

// Operator identity on a graph (the model's own unless `graph` is set).
void returns_identity(Outcome& o, const TransitionGraph* graph) {
    const auto p = ModelParams::reference();
    EnumerationOptions eo;
    eo.graph = graph;
    for (double beta : {0.25, 0.5, 1.0, 1.5, 2.5}) {
        const double z = pressure_full(p, beta).value + 0.2;
        const auto r = enumerate_returns_to_1(p, beta, z, 22, eo);
        o.note(fmt("[1]  beta=%.2f  gap=%.3e  tail=%.3e", beta, r.gap, r.certified_tail));
        o.require(r.passed(), fmt("returns to [1] at beta=%.2f: gap %.3e outside [0, %.3e]", beta, r.gap,
                                  r.certified_tail));
    }
    for (double beta : {0.25, 0.5, 1.0, 1.5, 2.5}) {
        const double z = pressure_34(p, beta) + 0.2;
        const auto r = enumerate_returns_to_32(p, beta, z, 20, eo);
        o.note(fmt("[32] beta=%.2f  gap=%.3e  tail=%.3e", beta, r.gap, r.certified_tail));
        o.require(r.passed(), fmt("returns to [32] at beta=%.2f: gap %.3e outside [0, %.3e]", beta, r.gap,
                                  r.certified_tail));
    }
}

void criterion_1(Outcome& o) {
    std::vector<std::pair<ModelParams, double>> sets;
    sets.emplace_back(ModelParams::reference(), 1.0);
    {
        ModelParams p;
        p.gamma = 0.1;
        p.delta = 3.0;
        sets.emplace_back(p, 0.7);
    }
    {
        ModelParams p;
        p.gamma = 2.0;
        p.delta = 0.25;
        sets.emplace_back(p, 2.0);
    }
    for (const auto& [p, beta] : sets) {
        double worst = 0.0;
        const auto rows = check_ln(p, beta, 20);
        o.require(rows.size() == 19, "expected rows n = 2..20");
        for (const auto& r : rows) worst = std::max(worst, r.relative_error);
        o.note(fmt("gamma=%.2f delta=%.2f beta=%.2f", p.gamma, p.delta, beta) +
               fmt("  worst relative error %.3e", worst));
        o.require(worst <= 1e-11, fmt("L_n relative error %.3e > 1e-11", worst));
    }
}

void criterion_2(Outcome& o) { returns_identity(o, nullptr); }

void criterion_3(Outcome& o) {
    const auto p = ModelParams::reference();
    const double pf = pressure_full(p, 0.0).value, hf = incidence_entropy(p, Subsystem::full);
    const double pm = pressure_mid(p, 0.0).value, hm = incidence_entropy(p, Subsystem::without_one_family);
    const double p34 = pressure_34(p, 0.0);
    o.note(fmt("P(0)=%.15g entropy=%.15g", pf, hf));
    o.note(fmt("P_mid(0)=%.15g entropy=%.15g", pm, hm));
    o.require(std::abs(pf - hf) < 1e-8, fmt("|P(0) - entropy| = %.3e", std::abs(pf - hf)));
    o.require(std::abs(pm - hm) < 1e-8, fmt("|P_mid(0) - entropy| = %.3e", std::abs(pm - hm)));
    o.require(std::abs(p34 - std::log(2.0)) < 1e-14, fmt("|P34(0) - log 2| = %.3e", std::abs(p34 - std::log(2.0))));
}

void criterion_4(Outcome& o) {
    const auto p = ModelParams::reference();
    const auto c = critical_set(p);
    o.note(fmt("beta_1=%.15g beta_c=%.15g", c.beta_lo, c.beta_hi));
    o.note(fmt("residuals %.3e %.3e", c.residual_lo, c.residual_hi));
    o.require(c.beta_lo < c.beta_hi, "beta_1 < beta_c");
    o.require(std::abs(c.residual_lo) < 1e-9, fmt("residual at beta_1 %.3e", c.residual_lo));
    o.require(std::abs(c.residual_hi) < 1e-9, fmt("residual at beta_c %.3e", c.residual_hi));

    const double jump = std::abs(pressure_full(p, c.beta_hi - 1e-6).value - pressure_34(p, c.beta_hi));
    o.note(fmt("|P(beta_c - 1e-6) - P34(beta_c)| = %.3e", jump));
    o.require(jump < 1e-4, "continuity at beta_c");

    std::vector<double> grid;
    for (int i = 0; i <= 300; ++i) grid.push_back(0.01 * i);
    const auto samples = pressure_curve(p, c, grid);
    int below = 0, above = 0;
    for (const auto& s : samples) {
        if (s.beta < c.beta_hi - 0.01) {
            ++below;
            o.require(s.gap_full > 0.0, fmt("P - P34 not positive at beta=%.2f", s.beta));
        } else if (s.beta >= c.beta_hi) {
            ++above;
            o.require(std::abs(s.p_full - s.p34) <= 1e-12, fmt("P != P34 at beta=%.2f", s.beta));
        }
    }
    o.note(fmt("grid points below beta_c-0.01: %g, at or above beta_c: %g", below, above));
}

void criterion_5(Outcome& o) {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<int> L(1, 20);
    const int n = 120;
    double min_zeta = INFINITY, min_eb = INFINITY, max_eb = 0.0;
    for (int i = 0; i < n; ++i) {
        ModelParams p;
        p.alpha = log_uniform(rng, 0.1, 10);
        p.gamma = log_uniform(rng, 0.1, 10);
        p.delta = log_uniform(rng, 0.1, 10);
        p.epsilon = log_uniform(rng, 0.1, 10);
        p.L = L(rng);
        const auto c = critical_set(p);
        // eps*beta_1 = 1 + u with u solved directly; for large delta u is below double spacing at 1.
        const double u = c.excess_lo, z = riemann_zeta_above_one(u);
        min_zeta = std::min(min_zeta, z);
        min_eb = std::min(min_eb, u);
        max_eb = std::max(max_eb, u);
        o.require(u > 0.0 && u < 1.0, fmt("eps*beta_1 - 1 = %.6g out of (0, 1) at set %g", u, i));
        o.require(z > 5.0, fmt("zeta(eps*beta_1) = %.6g at set %g", z, i));
    }
    o.note(fmt("%g parameter sets; eps*beta_1 - 1 in [%.3e, %.3e]", n, min_eb, max_eb));
    o.note(fmt("min zeta(eps*beta_1) = %.6f", min_zeta));
}

void criterion_6(Outcome& o) {
    auto check_verdict = [&](const ModelParams& p, const CriticalSet& c, const char* label) {
        const auto r = equilibrium_report(p, c, Transition::upper);
        const bool above_two = r.eps_beta > 2.0;
        o.note(std::string(label) + fmt("  eps*beta_c=%.6f (minus 1: %.3e)  weight on [1]: ", r.eps_beta,
                                        r.eps_beta_excess) +
               (r.weight_on_cylinder ? "yes" : "no") + "  (" + r.verdict + ")");
        o.require(r.weight_on_cylinder == above_two, std::string("verdict mismatch at ") + label);
    };

    double prev = INFINITY;
    for (double d : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        const auto p = with_delta(d);
        const auto c = critical_set(p);
        const double u = c.excess_hi;
        o.require(u < prev, fmt("eps*beta_c not decreasing at delta=%g", d));
        prev = u;
        check_verdict(p, c, fmt("delta=%g", d).c_str());
    }
    o.require(prev < 1.0, fmt("eps*beta_c - 1 = %.6g at delta=20 is not below 1", prev));

    double at50 = 0.0;
    prev = 0.0;
    for (int L : {1, 5, 20, 50}) {
        const auto p = with_L(L);
        const auto c = critical_set(p);
        const double eb = c.eps_beta_hi(p);
        o.require(eb >= prev, fmt("eps*beta_c decreasing at L=%g", L));
        prev = eb;
        if (L == 50) at50 = eb;
        check_verdict(p, c, fmt("L=%g", L).c_str());
    }
    o.require(at50 > 2.0, fmt("eps*beta_c = %.6f at L=50 does not exceed 2", at50));

    const auto p200 = with_L(200);
    check_verdict(p200, critical_set(p200), "L=200 (beyond the required sweep)");
}

void convexity(Outcome& o, const ModelParams& p, const char* label) {
    const auto c = critical_set(p);
    std::vector<double> grid;
    for (int i = 0; 0.01 * i <= c.beta_hi - 0.05 + 1e-12; ++i) grid.push_back(0.01 * i);
    const auto s = pressure_curve(p, c, grid);
    double min_d2 = INFINITY;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double d2 = s[i + 1].p_full - 2 * s[i].p_full + s[i - 1].p_full;
        min_d2 = std::min(min_d2, d2);
        o.require(d2 > 0.0, std::string(label) + fmt(": second difference %.3e at beta=%.2f", d2, s[i].beta));
    }
    o.note(std::string(label) + fmt(": %g points, min second difference %.3e", static_cast<double>(s.size()), min_d2));
}

void criterion_7(Outcome& o) {
    convexity(o, ModelParams::reference(), "reference");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> L(1, 5);
    for (int i = 0; i < 10; ++i) {
        ModelParams p;
        p.alpha = log_uniform(rng, 0.2, 2);
        p.gamma = log_uniform(rng, 0.2, 2);
        p.delta = log_uniform(rng, 0.2, 2);
        p.epsilon = log_uniform(rng, 0.5, 2);
        p.L = L(rng);
        convexity(o, p, fmt("random %g", i).c_str());
    }
}

void criterion_8(Outcome& o) {
    auto p = ModelParams::reference();
    p.variant = Variant::B;
    const auto c = critical_set(p);
    o.note(fmt("beta_2=%.15g beta'_c=%.15g", c.beta_lo, c.beta_hi));
    o.require(c.beta_lo < c.beta_hi, "beta_2 < beta'_c");
    o.require(std::abs(c.residual_lo) < 1e-9 && std::abs(c.residual_hi) < 1e-9, "residuals below 1e-9");

    const double h = 0.01;
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double b = c.beta_hi + 0.01 + i * h;
        const double f0 = pressure_full(p, b - h).value, f1 = pressure_full(p, b).value,
                     f2 = pressure_full(p, b + h).value;
        const double g0 = pressure_34(p, b - h), g1 = pressure_34(p, b), g2 = pressure_34(p, b + h);
        o.require(f1 == g1, fmt("P != P34 at beta=%.3f", b));
        worst = std::max(worst, std::abs((f2 - 2 * f1 + f0) - (g2 - 2 * g1 + g0)));
    }
    o.note(fmt("max second-difference mismatch above beta'_c: %.3e", worst));
    o.require(worst < 1e-8, "second differences match the closed form");

    const double beta = c.beta_hi + 0.5;
    const std::vector<double> t{-1e-3, -1e-4, 1e-4, 1e-3};
    const auto g = gateaux_check(p, beta, t);
    const double sym = std::abs(g.symmetric_right - g.symmetric_left);
    const double asym = g.asymmetric_right - g.asymmetric_left;
    o.note(fmt("symmetric slopes %.12f %.12f", g.symmetric_left, g.symmetric_right));
    o.note(fmt("asymmetric slopes %.12f %.12f (beta=%.6f)", g.asymmetric_left, g.asymmetric_right, beta));
    o.require(sym < 1e-8, fmt("symmetric one-sided slopes differ by %.3e", sym));
    o.require(std::abs(asym - beta) <= 1e-6, fmt("asymmetric slopes differ by %.9f", asym));
    o.require(g.asymmetric_frozen, "asymmetric family charges the 1-family");
}

void criterion_9(Outcome& o) {
    const auto p = ModelParams::reference();
    for (double beta : {0.0, 0.5}) {
        const double est = richardson_pressure(p, beta, 12);
        const double pf = pressure_full(p, beta).value;
        o.note(fmt("beta=%.1f  estimate=%.9f  P=%.9f", beta, est, pf));
        o.require(std::abs(est - pf) <= 0.02, fmt("|estimate - P| = %.3e", std::abs(est - pf)));
    }
}

void criterion_10(Outcome& o) {
    const auto p = ModelParams::reference();
    auto graph = TransitionGraph::butterfly(p);
    graph.add_edge(Symbol::four(), Symbol::two());
    Outcome inner;
    returns_identity(inner, &graph);
    o.note(std::string("criterion 2 with the edge 4->2 added: ") + (inner.pass ? "PASS" : "FAIL"));
    o.require(!inner.pass, "corrupted graph still passes the operator identity");
}

struct Criterion {
    const char* title;
    double budget_s;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"wing block sums L_n", 1, criterion_1},
        {"first-return operator identity", 30, criterion_2},
        {"pressure at beta = 0", 1, criterion_3},
        {"transition structure", 10, criterion_4},
        {"eps*beta_1 bounds", 120, criterion_5},
        {"regime realizability", 60, criterion_6},
        {"strict convexity", 60, criterion_7},
        {"variant B", 10, criterion_8},
        {"periodic orbits", 120, criterion_9},
        {"negative control", 30, criterion_10},
    };
    return list;
}

bool run_one(int k) {
    const auto& c = criteria()[static_cast<std::size_t>(k - 1)];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_s, fmt("runtime %.2f s over budget %.0f s", secs, c.budget_s));
    std::printf("criterion %d: %s  %s (%.2f s)\n", k, o.pass ? "PASS" : "FAIL", c.title, secs);
    std::fputs(o.detail.str().c_str(), stdout);
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    apply_thread_env();
    bool all = true;
    if (only) return run_one(only) ? 0 : 1;
    for (int k = 1; k <= 10; ++k) all = run_one(k) && all;
    return all ? 0 : 1;
}
