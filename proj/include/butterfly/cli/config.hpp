#pragma once

#include <stdexcept>
#include <string>

#include "butterfly/model.hpp"
#include "butterfly/series.hpp"

namespace butterfly::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams params = ModelParams::reference();
    double beta_start = 0.0;
    double beta_stop = 3.0;
    double beta_step = 0.01;
    double series_tol = 1e-13;
    double root_tol = 1e-9;  // residual threshold reported by `critical`
    int n_return = 22;
    int n_period = 12;
    int n_ln = 20;
    std::string out;  // empty: standard output
    bool svg = false;
    bool deterministic = true;

    void validate() const;
    SeriesOptions series() const { return {series_tol, 10'000'000, SummationMode::automatic}; }
};

/// Sets one key from its textual value; throws ConfigError naming the key.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
/// Flat "key = value" lines; '#' starts a comment.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

double parse_double(const std::string& key, const std::string& value);
int parse_int(const std::string& key, const std::string& value);
Variant parse_variant(const std::string& value);

}  // namespace butterfly::cli
