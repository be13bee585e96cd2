#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "butterfly/critical.hpp"

namespace butterfly::cli {

/// 15 significant digits, the CSV float format.
std::string format_number(double x);

void write_curves_csv(std::ostream& out, const std::vector<PressureSample>& samples);

struct SweepRow {
    double value = 0.0;
    CriticalSet critical;
    double eps_beta_lo = 0.0;
    double eps_beta_hi = 0.0;
    double zeta_eps_beta_lo = 0.0;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct ChartSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

struct Chart {
    std::string title;
    std::string x_label, y_label;
    std::vector<ChartSeries> series;
    std::vector<std::pair<double, std::string>> verticals;  // x position, label
};

/// Self-contained SVG line chart.
std::string render_svg(const Chart& chart, int width = 800, int height = 520);

}  // namespace butterfly::cli
