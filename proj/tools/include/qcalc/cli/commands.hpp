#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qcalc/cli/report.hpp"

namespace qcalc::cli {

/// Runs one command line (without the program name) and returns the process
/// exit code. Tables go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The reports behind `verify` and `scenario run`, for callers that want the
// data without the printing.
Report verify_report(const std::string& suite, const RunConfig& cfg, std::size_t random_count,
                     std::size_t instances = 200);
Report scenario_report(const std::string& name, const RunConfig& cfg);

}  // namespace qcalc::cli
