#pragma once

#include <iosfwd>

#include "setgap/config.hpp"
#include "setgap/report.hpp"

namespace setgap {

// Builds the data, model and provider described by `cfg`, runs the pipeline
// and, for built-in problems, scores every ranked function on fresh
// noiseless samples. Throws ConfigError for unusable settings.
RunOutcome execute_run(const RunConfig& cfg, const ProgressFn& log = {});

// Command-line entry point. Exit codes: 0 success, 1 runtime failure,
// 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace setgap
