#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "butterfly/cli/output.hpp"

namespace butterfly::cli {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Round step for about `target` ticks over [lo, hi].
double tick_step(double lo, double hi, int target) {
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

}  // namespace

std::string render_svg(const Chart& chart, int width, int height) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double pw = width - left - right, ph = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = 0.04 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
      << "</text>\n";

    // Axes and ticks.
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double xs = tick_step(xmin, xmax, 8);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-12; t += xs) {
        o << "<line x1=\"" << fixed(sx(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(sx(t)) << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << fixed(sx(t)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << fixed(t, xs < 0.1 ? 2 : 1) << "</text>\n";
    }
    const double ys = tick_step(ymin, ymax, 6);
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12; t += ys) {
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(sy(t)) << "\" x2=\"" << left << "\" y2=\""
          << fixed(sy(t)) << "\" stroke=\"black\"/>";
        o << "<text x=\"" << left - 8 << "\" y=\"" << fixed(sy(t) + 4) << "\" text-anchor=\"end\">"
          << fixed(t, ys < 0.1 ? 2 : 1) << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << escape(chart.y_label) << "</text>\n";

    for (const auto& [x, label] : chart.verticals) {
        if (x < xmin || x > xmax) continue;
        o << "<line x1=\"" << fixed(sx(x)) << "\" y1=\"" << top << "\" x2=\"" << fixed(sx(x)) << "\" y2=\""
          << top + ph << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>";
        o << "<text x=\"" << fixed(sx(x) + 3) << "\" y=\"" << top + 14 << "\" fill=\"gray\">" << escape(label)
          << "</text>\n";
    }

    for (const auto& s : chart.series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) o << fixed(sx(s.x[i])) << ',' << fixed(sy(s.y[i])) << ' ';
        o << "\"/>\n";
    }

    double ly = top + 16;
    for (const auto& s : chart.series) {
        o << "<line x1=\"" << left + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + 36 << "\" y2=\"" << ly
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
        o << "<text x=\"" << left + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
        ly += 18;
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace butterfly::cli
