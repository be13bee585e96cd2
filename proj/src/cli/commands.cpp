#include "butterfly/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "butterfly/cli/output.hpp"
#include "butterfly/critical.hpp"
#include "butterfly/oracle.hpp"

namespace butterfly::cli {

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    return f;
}

std::string svg_path_for(const std::string& out) {
    if (out.empty()) return "curves.svg";
    const auto dot = out.find_last_of('.');
    const auto slash = out.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".svg";
    return out + ".svg";
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string row(const char* name, double analytic, double oracle, double gap, double bound, const char* status) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-34s %22.15g %22.15g %12.3e %12.3e  %s", name, analytic, oracle, gap, bound,
                  status);
    return buf;
}

void print_report(std::ostream& out, const char* title, const EquilibriumReport& r) {
    out << title << '\n'
        << "  beta                         " << format_number(r.beta_star) << '\n'
        << "  eps*beta                     " << format_number(r.eps_beta) << '\n'
        << "  eps*beta - 1                 " << format_number(r.eps_beta_excess) << '\n'
        << "  return-time derivative finite " << yes_no(r.return_time_derivative_finite) << '\n'
        << "  equilibrium states (>=)      " << r.count_lower_bound << '\n'
        << "  weight on " << (r.cylinder == Cylinder::one ? "[1]                " : "[32]               ")
        << yes_no(r.weight_on_cylinder) << '\n'
        << "  verdict: " << r.verdict << '\n';
}

}  // namespace

std::vector<double> beta_grid(const RunConfig& c) {
    const auto n = static_cast<long>(std::floor((c.beta_stop - c.beta_start) / c.beta_step + 1e-9)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = c.beta_start + static_cast<double>(i) * c.beta_step;
    return grid;
}

int cmd_critical(const RunConfig& config, std::ostream& out) {
    const auto& p = config.params;
    const auto c = critical_set(p, config.series());
    std::ostringstream rec;
    rec << "variant=" << (p.variant == Variant::A ? "A" : "B") << '\n'
        << "beta_lo=" << format_number(c.beta_lo) << '\n'
        << "beta_hi=" << format_number(c.beta_hi) << '\n'
        << "eps_beta_lo=" << format_number(c.eps_beta_lo(p)) << '\n'
        << "eps_beta_hi=" << format_number(c.eps_beta_hi(p)) << '\n'
        << "eps_beta_lo_minus_1=" << format_number(c.excess_lo) << '\n'
        << "eps_beta_hi_minus_1=" << format_number(c.excess_hi) << '\n'
        << "residual_lo=" << format_number(c.residual_lo) << '\n'
        << "residual_hi=" << format_number(c.residual_hi) << '\n'
        << "residuals_ok="
        << ((std::abs(c.residual_lo) < config.root_tol && std::abs(c.residual_hi) < config.root_tol) ? "true"
                                                                                                      : "false")
        << '\n'
        << "bracket_lo=" << format_number(c.bracket_lo.first) << ':' << format_number(c.bracket_lo.second) << '\n'
        << "bracket_hi=" << format_number(c.bracket_hi.first) << ':' << format_number(c.bracket_hi.second) << '\n'
        << "zeta_eps_beta_lo=" << format_number(riemann_zeta_above_one(c.excess_lo)) << '\n';
    out << rec.str();
    if (!config.out.empty()) open_output(config.out) << rec.str();
    return exit_ok;
}

int cmd_curves(const RunConfig& config, std::ostream& out, std::ostream& log) {
    const auto& p = config.params;
    const auto c = critical_set(p, config.series());
    const auto grid = beta_grid(config);
    const auto samples = pressure_curve(p, c, grid, Execution::parallel, config.series());

    if (config.out.empty()) {
        write_curves_csv(out, samples);
    } else {
        auto f = open_output(config.out);
        write_curves_csv(f, samples);
        log << "wrote " << config.out << " (" << samples.size() << " rows)\n";
    }

    if (config.svg) {
        Chart chart;
        chart.title = std::string("Pressure curves, variant ") + (p.variant == Variant::A ? "A" : "B");
        chart.x_label = "beta";
        chart.y_label = "pressure";
        ChartSeries full{"P (full)", "#c0392b", {}, {}}, mid{"P without the 1-family", "#2471a3", {}, {}},
            wing{"P34 (wing)", "#1e8449", {}, {}};
        for (const auto& s : samples) {
            full.x.push_back(s.beta);
            full.y.push_back(s.p_full);
            mid.x.push_back(s.beta);
            mid.y.push_back(s.p_mid);
            wing.x.push_back(s.beta);
            wing.y.push_back(s.p34);
        }
        chart.series = {full, mid, wing};
        chart.verticals = {{c.beta_lo, "beta_lo"}, {c.beta_hi, "beta_hi"}};
        const auto path = svg_path_for(config.out);
        open_output(path) << render_svg(chart);
        log << "wrote " << path << '\n';
    }
    return exit_ok;
}

int cmd_equilibria(const RunConfig& config, std::optional<double> beta_star, std::ostream& out) {
    const auto& p = config.params;
    const auto c = critical_set(p, config.series());
    if (beta_star) {
        print_report(out, "[requested beta]", equilibrium_report_at(p, c, *beta_star, config.series()));
        return exit_ok;
    }
    print_report(out, "[lower transition]", equilibrium_report(p, c, Transition::lower, config.series()));
    print_report(out, "[upper transition]", equilibrium_report(p, c, Transition::upper, config.series()));
    return exit_ok;
}

int cmd_oracle(const RunConfig& config, const std::vector<std::pair<Symbol, Symbol>>& extra_edges,
               std::ostream& out) {
    const auto& p = config.params;
    const auto so = config.series();
    bool all_pass = true;
    auto status = [&](bool ok) {
        all_pass = all_pass && ok;
        return ok ? "PASS" : "FAIL";
    };

    {
        char head[256];
        std::snprintf(head, sizeof head, "%-34s %22s %22s %12s %12s  %s", "check", "analytic", "oracle", "gap",
                      "bound", "status");
        out << head << '\n';
    }
    out << "---- wing blocks L_n (beta = 1) ----\n";
    for (const auto& r : check_ln(p, 1.0, config.n_ln)) {
        const std::string name = "L_" + std::to_string(r.n);
        out << row(name.c_str(), r.closed_form, r.enumerated, r.relative_error, 1e-11,
                   status(r.relative_error <= 1e-11))
            << '\n';
    }

    TransitionGraph graph = TransitionGraph::butterfly(p);
    for (const auto& [a, b] : extra_edges) graph.add_edge(a, b);
    EnumerationOptions eo;
    eo.exec.deterministic = config.deterministic;
    eo.graph = &graph;

    out << "---- first returns to [1], N = " << config.n_return << " ----\n";
    for (double beta : {0.25, 0.5, 1.5}) {
        const double z = pressure_full(p, beta, so).value + 0.2;
        const std::string name = "returns[1] beta=" + format_number(beta);
        try {
            const auto r = enumerate_returns_to_1(p, beta, z, config.n_return, eo);
            out << row(name.c_str(), r.analytic, r.enumerated_partial, r.gap, r.certified_tail, status(r.passed()))
                << '\n';
        } catch (const PreconditionError& e) {
            out << name << "  SKIPPED (" << e.what() << ")\n";
        }
    }
    try {
        const double beta = 0.5, z = pressure_full(p, beta, so).value + 0.2;
        const auto r = compressed_returns_to_1(p, beta, z, 400, &graph);
        out << row("returns[1] compressed N=400", r.analytic, r.enumerated_partial, r.gap, r.certified_tail,
                   status(r.passed()))
            << '\n';
    } catch (const PreconditionError& e) {
        out << "returns[1] compressed N=400  SKIPPED (" << e.what() << ")\n";
    }

    out << "---- first returns to [32], N = " << std::min(config.n_return, 20) << " ----\n";
    for (double beta : {0.5, 1.5}) {
        double z = pressure_34(p, beta) + 0.2;
        if (p.variant == Variant::B) z += composition_gap(p, beta, 1, so).value_or(0.0);
        const std::string name = "returns[32] beta=" + format_number(beta);
        const auto r = enumerate_returns_to_32(p, beta, z, std::min(config.n_return, 20), eo);
        out << row(name.c_str(), r.analytic, r.enumerated_partial, r.gap, r.certified_tail, status(r.passed()))
            << '\n';
    }

    out << "---- beta = 0 against incidence entropy ----\n";
    {
        const double h = incidence_entropy(p, Subsystem::full), pf = pressure_full(p, 0.0, so).value;
        out << row("P(0) vs entropy", pf, h, pf - h, 1e-8, status(std::abs(pf - h) < 1e-8)) << '\n';
        const double hm = incidence_entropy(p, Subsystem::without_one_family), pm = pressure_mid(p, 0.0, so).value;
        out << row("P_mid(0) vs entropy", pm, hm, pm - hm, 1e-8, status(std::abs(pm - hm) < 1e-8)) << '\n';
    }

    out << "---- periodic orbits, n = " << config.n_period << " (Richardson) ----\n";
    for (double beta : {0.0, 0.5}) {
        const std::string name = "periodic beta=" + format_number(beta);
        try {
            ExecutionOptions ex{Execution::parallel, config.deterministic};
            const double est = richardson_pressure(p, beta, config.n_period, Subsystem::full, ex);
            const double pf = pressure_full(p, beta, so).value;
            out << row(name.c_str(), pf, est, pf - est, 0.02, status(std::abs(pf - est) <= 0.02)) << '\n';
        } catch (const PreconditionError& e) {
            out << name << "  SKIPPED (" << e.what() << ")\n";
        }
    }

    out << "overall: " << (all_pass ? "PASS" : "FAIL") << '\n';
    return all_pass ? exit_ok : exit_oracle_fail;
}

int cmd_sweep(const RunConfig& config, const std::string& param, const std::vector<double>& values,
              std::ostream& out) {
    static const char* names[] = {"alpha", "gamma", "delta", "epsilon", "L"};
    if (std::find(std::begin(names), std::end(names), param) == std::end(names))
        throw ConfigError("invalid sweep parameter '" + param + "' (alpha, gamma, delta, epsilon, L)");
    if (values.empty()) throw ConfigError("sweep needs at least one value");

    std::vector<RunConfig> configs;
    for (double v : values) {
        RunConfig c = config;
        std::ostringstream text;
        text << (param == "L" ? std::to_string(static_cast<int>(std::lround(v))) : format_number(v));
        apply_setting(c, param, text.str());
        c.validate();
        configs.push_back(c);
    }

    std::vector<SweepRow> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            const auto& p = configs[k].params;
            SweepRow& r = rows[k];
            r.value = values[k];
            r.critical = critical_set(p, configs[k].series());
            r.eps_beta_lo = r.critical.eps_beta_lo(p);
            r.eps_beta_hi = r.critical.eps_beta_hi(p);
            r.zeta_eps_beta_lo = riemann_zeta_above_one(r.critical.excess_lo);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    if (config.out.empty()) {
        write_sweep_csv(out, rows);
    } else {
        auto f = open_output(config.out);
        write_sweep_csv(f, rows);
    }
    return exit_ok;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pressure functions, transitions and brute-force checks for the butterfly shifts", "butterfly"};
    app.require_subcommand(1);

    struct Overrides {
        std::string config, variant, out;
        std::optional<double> alpha, gamma, delta, epsilon, beta_start, beta_stop, beta_step;
        std::optional<int> L;
        bool svg = false;
    } ov;
    std::optional<double> beta_star;
    std::vector<std::string> extra_edges;
    std::string sweep_param;
    std::vector<double> sweep_values;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", ov.config, "key=value configuration file");
        sub->add_option("--variant", ov.variant, "A or B");
        sub->add_option("--out", ov.out, "output path (default: standard output)");
        sub->add_flag("--svg", ov.svg, "also write an SVG chart (curves)");
        sub->add_option("--alpha", ov.alpha);
        sub->add_option("--gamma", ov.gamma);
        sub->add_option("--delta", ov.delta);
        sub->add_option("--epsilon", ov.epsilon);
        sub->add_option("--L", ov.L);
        sub->add_option("--beta-start", ov.beta_start);
        sub->add_option("--beta-stop", ov.beta_stop);
        sub->add_option("--beta-step", ov.beta_step);
    };
    auto* critical = app.add_subcommand("critical", "solve for beta_lo and beta_hi");
    auto* curves = app.add_subcommand("curves", "pressure curves on the beta grid as CSV");
    auto* equilibria = app.add_subcommand("equilibria", "equilibrium-state reports at the transitions");
    auto* oracle = app.add_subcommand("oracle", "closed forms against brute-force enumeration");
    auto* sweep = app.add_subcommand("sweep", "critical values across one parameter");
    for (auto* s : {critical, curves, equilibria, oracle, sweep}) common(s);
    equilibria->add_option("--beta-star", beta_star, "report at this beta instead");
    oracle->add_option("--extra-edge", extra_edges, "add an edge FROM:TO to the enumeration graph (negative control)");
    sweep->add_option("--param", sweep_param, "alpha, gamma, delta, epsilon or L")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        RunConfig config = ov.config.empty() ? RunConfig{} : load_config(ov.config);
        if (!ov.variant.empty()) config.params.variant = parse_variant(ov.variant);
        if (!ov.out.empty()) config.out = ov.out;
        if (ov.svg) config.svg = true;
        if (ov.alpha) config.params.alpha = *ov.alpha;
        if (ov.gamma) config.params.gamma = *ov.gamma;
        if (ov.delta) config.params.delta = *ov.delta;
        if (ov.epsilon) config.params.epsilon = *ov.epsilon;
        if (ov.L) config.params.L = *ov.L;
        if (ov.beta_start) config.beta_start = *ov.beta_start;
        if (ov.beta_stop) config.beta_stop = *ov.beta_stop;
        if (ov.beta_step) config.beta_step = *ov.beta_step;
        config.validate();
        apply_thread_env();

        if (critical->parsed()) return cmd_critical(config, out);
        if (curves->parsed()) return cmd_curves(config, out, err);
        if (equilibria->parsed()) return cmd_equilibria(config, beta_star, out);
        if (sweep->parsed()) return cmd_sweep(config, sweep_param, sweep_values, out);
        std::vector<std::pair<Symbol, Symbol>> edges;
        for (const auto& e : extra_edges) {
            const auto colon = e.find(':');
            if (colon == std::string::npos) throw ConfigError("--extra-edge expects FROM:TO, got '" + e + "'");
            try {
                edges.emplace_back(parse_symbol(e.substr(0, colon)), parse_symbol(e.substr(colon + 1)));
            } catch (const PreconditionError& pe) {
                throw ConfigError(std::string("--extra-edge: ") + pe.what());
            }
        }
        return cmd_oracle(config, edges, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const PreconditionError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_config_error;
    }
}

}  // namespace butterfly::cli
