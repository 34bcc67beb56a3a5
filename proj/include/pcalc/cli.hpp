#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcalc::cli {

/// Runs one command line (without the program name). Exit codes: 0 on
/// success, 1 on usage errors, 2 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double v);

}  // namespace pcalc::cli
