#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mckv::cli {

/// Parses argv-style arguments (program name excluded) and runs the selected
/// subcommand, writing machine-readable output to `out`. Returns 0 on
/// success, 2 on configuration errors, 3 on numerical failures.
int parse_and_dispatch(std::vector<std::string> args, std::ostream& out);

/// Phase-transition data product: rows sigma, count, m_star_on_M2,
/// zeta_prime0, f_c over a uniform sigma grid.
void emit_phase_diagram(double sigma_min, double sigma_max, int n, std::ostream& out);

}  // namespace mckv::cli
