#include "butterfly/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace butterfly::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean for '" + key + "': " + value);
}

}  // namespace

double parse_double(const std::string& key, const std::string& value) {
    double x = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError("invalid number for '" + key + "': " + value);
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    int x = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError("invalid integer for '" + key + "': " + value);
    return x;
}

Variant parse_variant(const std::string& value) {
    if (value == "A" || value == "a") return Variant::A;
    if (value == "B" || value == "b") return Variant::B;
    throw ConfigError("invalid value for 'variant': " + value + " (expected A or B)");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "alpha") c.params.alpha = parse_double(key, value);
    else if (key == "gamma") c.params.gamma = parse_double(key, value);
    else if (key == "delta") c.params.delta = parse_double(key, value);
    else if (key == "epsilon") c.params.epsilon = parse_double(key, value);
    else if (key == "L") c.params.L = parse_int(key, value);
    else if (key == "variant") c.params.variant = parse_variant(value);
    else if (key == "beta_start") c.beta_start = parse_double(key, value);
    else if (key == "beta_stop") c.beta_stop = parse_double(key, value);
    else if (key == "beta_step") c.beta_step = parse_double(key, value);
    else if (key == "series_tol") c.series_tol = parse_double(key, value);
    else if (key == "root_tol") c.root_tol = parse_double(key, value);
    else if (key == "n_return") c.n_return = parse_int(key, value);
    else if (key == "n_period") c.n_period = parse_int(key, value);
    else if (key == "n_ln") c.n_ln = parse_int(key, value);
    else if (key == "out") c.out = value;
    else if (key == "svg") c.svg = parse_bool(key, value);
    else if (key == "deterministic") c.deterministic = parse_bool(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    if (!(beta_start >= 0.0)) throw ConfigError("'beta_start' must be >= 0");
    if (!(beta_step > 0.0)) throw ConfigError("'beta_step' must be > 0");
    if (!(beta_stop >= beta_start)) throw ConfigError("'beta_stop' must be >= beta_start");
    if (!(series_tol > 0.0)) throw ConfigError("'series_tol' must be > 0");
    if (!(root_tol > 0.0)) throw ConfigError("'root_tol' must be > 0");
    if (n_return < 1 || n_return > 30) throw ConfigError("'n_return' must be in 1..30");
    if (n_period < 3 || n_period > 14) throw ConfigError("'n_period' must be in 3..14");
    if (n_ln < 2 || n_ln > 20) throw ConfigError("'n_ln' must be in 2..20");
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_setting(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace butterfly::cli
