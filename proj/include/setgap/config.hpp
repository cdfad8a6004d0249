#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "setgap/pipeline.hpp"

namespace setgap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Settings for one `run`. Read from `key = value` lines; see
// docs/config.md for the key list.
struct RunConfig {
  std::string problem;   // built-in benchmark id
  std::string dataset;   // CSV path, used when no problem is given
  std::string provider = "truth";  // truth | file | grammar
  std::string provider_file;
  std::string grammar_ops = "add,mul,div,pow,sin,exp,log,sqrt";
  int grammar_max_ops = 3;
  std::string model = "exact";  // exact | knn
  int knn_k = 3;
  std::size_t dataset_size = 10000;
  double noise = 0.0;
  std::size_t eval_size = 10000;
  std::uint64_t seed = 0;
  PipelineConfig pipeline;

  void validate() const;
};

RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
std::string describe(const RunConfig& c);  // key = value dump, same format

}  // namespace setgap
