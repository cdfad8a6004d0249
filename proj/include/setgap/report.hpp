#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "setgap/config.hpp"
#include "setgap/pipeline.hpp"

namespace setgap {

// Held-out scores of one ranked candidate against a known ground truth.
struct Evaluation {
  double interpolation_mse = 0.0;
  double extrapolation_mse = 0.0;  // NaN when the domain has no flanks
  bool form_match = false;
};

struct RunOutcome {
  RunConfig config;
  PipelineResult result;
  std::vector<Evaluation> evaluations;  // empty without ground truth
};

// Stage-by-stage JSON report. Contains no timings, so identical seeds give
// identical bytes.
nlohmann::ordered_json report_json(const RunOutcome& o);
std::string report_text(const RunOutcome& o);  // dump(2) plus newline

std::string summary_text(const RunOutcome& o);

}  // namespace setgap
