#include <cstdio>

#include "butterfly/cli/output.hpp"

namespace butterfly::cli {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

void write_curves_csv(std::ostream& out, const std::vector<PressureSample>& samples) {
    out << "beta,p34,p_mid,p_full,ztilde,regime\n";
    for (const auto& s : samples) {
        out << format_number(s.beta) << ',' << format_number(s.p34) << ',' << format_number(s.p_mid) << ','
            << format_number(s.p_full) << ',' << (s.ztilde ? format_number(*s.ztilde) : std::string()) << ','
            << to_string(s.regime) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "value,beta_lo,beta_hi,eps_beta_lo,eps_beta_hi,zeta_eps_beta_lo,eps_beta_lo_minus_1,eps_beta_hi_minus_1\n";
    for (const auto& r : rows) {
        out << format_number(r.value) << ',' << format_number(r.critical.beta_lo) << ','
            << format_number(r.critical.beta_hi) << ',' << format_number(r.eps_beta_lo) << ','
            << format_number(r.eps_beta_hi) << ',' << format_number(r.zeta_eps_beta_lo) << ','
            << format_number(r.critical.excess_lo) << ',' << format_number(r.critical.excess_hi) << '\n';
    }
}

}  // namespace butterfly::cli
