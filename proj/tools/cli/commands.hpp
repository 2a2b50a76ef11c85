#pragma once

#include <iosfwd>

#include "config.hpp"
#include "report.hpp"

namespace twosex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitOutOfScope = 3;

/// Per-n analytic tail/cdf bounds, optional chain bounds with certificates,
/// and mean-time bounds.
Report cmd_bounds(const RunConfig& config);

/// The 12-cell comparison (i in {2,5,10}, n in {2,5,7,10}) for the litter-3
/// sex-multinomial law under promiscuous mating, with exact- and
/// Monte Carlo-matrix chain bounds.
Report cmd_table1(double alpha, const RunConfig& config);

/// Monte Carlo P(T <= n) with standard errors and comparison columns.
Report cmd_simulate(const RunConfig& config);

/// Grid checks of superadditivity and female domination (grid cap = config.cap).
Report cmd_check(const RunConfig& config);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twosex::cli
