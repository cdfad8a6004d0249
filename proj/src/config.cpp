#include "setgap/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "setgap/bench.hpp"

namespace setgap {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T number(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(fmt::format("config key '{}': '{}' is not a valid number", key, v));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T>
Setter num(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = number<T>(k, v); };
}

template <class T>
Setter pipe(T PipelineConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.*field = number<T>(k, v); };
}

template <class T>
Setter ga(GaConfig PipelineConfig::*which, T GaConfig::*field) {
  return [which, field](RunConfig& c, const std::string& k, const std::string& v) {
    (c.pipeline.*which).*field = number<T>(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"problem", [](RunConfig& c, const std::string&, const std::string& v) { c.problem = v; }},
      {"dataset", [](RunConfig& c, const std::string&, const std::string& v) { c.dataset = v; }},
      {"provider", [](RunConfig& c, const std::string&, const std::string& v) { c.provider = v; }},
      {"provider_file", [](RunConfig& c, const std::string&, const std::string& v) { c.provider_file = v; }},
      {"grammar_ops", [](RunConfig& c, const std::string&, const std::string& v) { c.grammar_ops = v; }},
      {"grammar_max_ops", num(&RunConfig::grammar_max_ops)},
      {"model", [](RunConfig& c, const std::string&, const std::string& v) { c.model = v; }},
      {"knn_k", num(&RunConfig::knn_k)},
      {"dataset_size", num(&RunConfig::dataset_size)},
      {"noise", num(&RunConfig::noise)},
      {"eval_size", num(&RunConfig::eval_size)},
      {"seed", num(&RunConfig::seed)},
      {"n", pipe(&PipelineConfig::n)},
      {"n_sets", pipe(&PipelineConfig::n_sets)},
      {"n_beam", pipe(&PipelineConfig::n_beam)},
      {"n_cand", pipe(&PipelineConfig::n_cand)},
      {"max_resample", pipe(&PipelineConfig::max_resample)},
      {"estimation_rows", pipe(&PipelineConfig::estimation_rows)},
      {"pool_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.pool.max_size = number<int>(k, v); }},
      {"pool_patience", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.pool.patience = number<int>(k, v); }},
      {"rep", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.evolve.rep = number<int>(k, v); }},
      {"max_gen", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.evolve.max_generations = number<int>(k, v); }},
      {"tie_tolerance", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.evolve.tie_tolerance = number<double>(k, v); }},
      {"fit.population", ga(&PipelineConfig::univariate_fit, &GaConfig::population_size)},
      {"fit.max_generations", ga(&PipelineConfig::univariate_fit, &GaConfig::max_generations)},
      {"estimate.population", ga(&PipelineConfig::estimate, &GaConfig::population_size)},
      {"estimate.max_generations", ga(&PipelineConfig::estimate, &GaConfig::max_generations)},
      {"estimate.stagnation_generations", ga(&PipelineConfig::estimate, &GaConfig::stagnation_generations)},
  };
  return m;
}

}  // namespace

void RunConfig::validate() const {
  if (problem.empty() == dataset.empty()) throw ConfigError("config needs exactly one of 'problem' or 'dataset'");
  if (!problem.empty()) {
    try {
      find_problem(problem);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (provider != "truth" && provider != "file" && provider != "grammar")
    throw ConfigError("provider must be truth, file or grammar");
  if (provider == "truth" && problem.empty()) throw ConfigError("provider 'truth' needs a built-in problem");
  if (provider == "file" && provider_file.empty()) throw ConfigError("provider 'file' needs 'provider_file'");
  if (model != "exact" && model != "knn") throw ConfigError("model must be exact or knn");
  if (model == "exact" && problem.empty()) throw ConfigError("model 'exact' needs a built-in problem");
  if (knn_k < 1) throw ConfigError("knn_k must be positive");
  if (noise < 0) throw ConfigError("noise must be non-negative");
  if (dataset_size < 2 || eval_size < 2) throw ConfigError("dataset_size and eval_size must be at least 2");
  try {
    pipeline.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected 'key = value'", lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(fmt::format("config line {}: unknown key '{}'", lineno, key));
    it->second(c, key, value);
  }
  namespace fs = std::filesystem;
  auto resolve = [&](std::string& p) {
    if (!p.empty() && fs::path(p).is_relative()) p = (fs::path(base_dir) / p).lexically_normal().string();
  };
  resolve(c.dataset);
  resolve(c.provider_file);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse_config(ss.str(), dir.empty() ? "." : dir);
}

std::string describe(const RunConfig& c) {
  const auto& p = c.pipeline;
  std::string s;
  auto line = [&](const std::string& k, const auto& v) { s += fmt::format("{} = {}\n", k, v); };
  if (!c.problem.empty()) line("problem", c.problem);
  if (!c.dataset.empty()) line("dataset", c.dataset);
  line("provider", c.provider);
  if (!c.provider_file.empty()) line("provider_file", c.provider_file);
  if (c.provider == "grammar") {
    line("grammar_ops", c.grammar_ops);
    line("grammar_max_ops", c.grammar_max_ops);
  }
  line("model", c.model);
  if (c.model == "knn") line("knn_k", c.knn_k);
  line("dataset_size", c.dataset_size);
  line("noise", c.noise);
  line("eval_size", c.eval_size);
  line("seed", c.seed);
  line("n", p.n);
  line("n_sets", p.n_sets);
  line("n_beam", p.n_beam);
  line("n_cand", p.n_cand);
  line("pool_max", p.pool.max_size);
  line("pool_patience", p.pool.patience);
  line("rep", p.evolve.rep);
  line("max_gen", p.evolve.max_generations);
  line("estimation_rows", p.estimation_rows);
  return s;
}

}  // namespace setgap
