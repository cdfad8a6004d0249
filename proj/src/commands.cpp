#include "setgap/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "setgap/bench.hpp"
#include "setgap/equiv.hpp"
#include "setgap/kernels.hpp"
#include "setgap/merge.hpp"

namespace setgap {

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::unique_ptr<SkeletonProvider> make_provider(const RunConfig& cfg, const Problem* prob) {
  if (cfg.provider == "truth") return std::make_unique<FileProvider>(truth_provider(prob->truth, int(prob->arity())));
  if (cfg.provider == "file") {
    try {
      return std::make_unique<FileProvider>(FileProvider::load(cfg.provider_file));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  GrammarOptions opt;
  try {
    opt = GrammarOptions::parse_ops(cfg.grammar_ops);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  opt.max_ops = cfg.grammar_max_ops;
  return std::make_unique<GrammarProvider>(opt);
}

double held_out_mse(const Expr& f, const Dataset& d) {
  auto pred = Program::compile(f).evaluate(d.X, {});
  return mse(pred, d.y);
}

void ensure_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw UsageError(fmt::format("{} exists; pass --force to overwrite", path));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

RunOutcome execute_run(const RunConfig& cfg, const ProgressFn& log) {
  cfg.validate();
  RunOutcome o;
  o.config = cfg;
  const Problem* prob = cfg.problem.empty() ? nullptr : &find_problem(cfg.problem);

  Dataset data;
  if (prob) {
    data = sample_problem(*prob, cfg.dataset_size, cfg.noise, derive_seed(cfg.seed, hash_label("dataset")));
  } else {
    try {
      data = read_csv(cfg.dataset);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  std::vector<Interval> domain = prob ? prob->domain : data_domain(data);

  std::unique_ptr<Predictor> model;
  if (cfg.model == "exact")
    model = std::make_unique<ExactPredictor>(prob->truth);
  else
    model = std::make_unique<KnnPredictor>(data, cfg.knn_k);
  auto provider = make_provider(cfg, prob);

  o.result = run_setgap(data, *model, domain, *provider, cfg.pipeline, cfg.seed, log);

  if (prob) {
    std::uint64_t eval_seed = derive_seed(cfg.seed, hash_label("evaluation"));
    Dataset inside = sample_problem(*prob, cfg.eval_size, 0.0, eval_seed, Region::Interpolation);
    std::optional<Dataset> outside;
    try {
      outside = sample_problem(*prob, cfg.eval_size, 0.0, eval_seed, Region::Extrapolation);
    } catch (const std::invalid_argument&) {
    }
    for (const auto& f : o.result.ranked) {
      Evaluation e;
      e.interpolation_mse = held_out_mse(f.expression, inside);
      e.extrapolation_mse = outside ? held_out_mse(f.expression, *outside) : std::nan("");
      e.form_match = functional_form_match(f.expression, prob->truth);
      o.evaluations.push_back(e);
    }
  }
  return o;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic regression by merging univariate skeletons", "setgap"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)")->check(CLI::PositiveNumber);

  // run
  auto* run = app.add_subcommand("run", "Run the pipeline described by a config file");
  std::string config_path, run_out;
  std::uint64_t seed = 0;
  bool force = false, verbose = false, timings = false;
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  auto* run_seed = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", run_out, "Write the JSON report here");
  run->add_flag("--force", force, "Overwrite an existing --out file");
  run->add_flag("--verbose", verbose, "Log stage progress to stderr");
  run->add_flag("--timings", timings, "Print the wall time after the summary");

  // merge
  auto* merge = app.add_subcommand("merge", "Build the pool of merges of two skeletons");
  std::string left, right, merge_out;
  long attempts = 10000;
  int pool_max = 5000;
  int patience = -1;
  merge->add_option("left", left, "First skeleton, e.g. 'c1*sin(c2*x0) + c3'")->required();
  merge->add_option("right", right, "Second skeleton over other variables")->required();
  merge->add_option("--attempts", attempts, "Number of merge attempts")->check(CLI::PositiveNumber);
  merge->add_option("--pool-max", pool_max, "Pool size cap")->check(CLI::PositiveNumber);
  merge->add_option("--patience", patience, "Stop after this many attempts without a new member (default: never)");
  merge->add_option("--seed", seed, "Random seed");
  merge->add_option("--out", merge_out, "Write the pool as JSON here");
  merge->add_flag("--force", force, "Overwrite an existing --out file");

  // equiv
  auto* equiv = app.add_subcommand("equiv", "Compare two skeletons after normalization");
  std::string ea, eb;
  equiv->add_option("a", ea, "First skeleton")->required();
  equiv->add_option("b", eb, "Second skeleton")->required();

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Sample a built-in problem to CSV");
  std::string problem_id, data_out, region = "interpolation";
  std::size_t rows = 10000;
  double noise = 0.0;
  dataset->add_option("problem", problem_id, "Problem id, e.g. E10")->required();
  dataset->add_option("--rows", rows, "Number of samples")->check(CLI::PositiveNumber);
  dataset->add_option("--noise", noise, "Noise level relative to std(y)")->check(CLI::NonNegativeNumber);
  dataset->add_option("--region", region, "interpolation or extrapolation")
      ->check(CLI::IsMember({"interpolation", "extrapolation"}));
  dataset->add_option("--seed", seed, "Random seed");
  dataset->add_option("--out", data_out, "Output CSV path")->required();
  dataset->add_flag("--force", force, "Overwrite an existing file");

  // rules
  auto* rules = app.add_subcommand("rules", "List the normalization rewrite rules");

  // problems
  auto* problems = app.add_subcommand("problems", "List the built-in benchmark problems");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the pipeline over several built-in problems");
  std::vector<std::string> bench_ids{"E10", "E11", "E12", "E13"};
  std::string bench_config, bench_out;
  bench->add_option("--problems", bench_ids, "Problem ids")->delimiter(',');
  bench->add_option("--config", bench_config, "Base config; its problem key is replaced");
  auto* bench_seed = bench->add_option("--seed", seed, "Override the config seed");
  bench->add_option("--out", bench_out, "Write a JSON summary here");
  bench->add_flag("--force", force, "Overwrite an existing --out file");
  bench->add_flag("--timings", timings, "Show wall time per problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  ProgressFn log;
  if (verbose) log = [&err](const std::string& m) { err << m << '\n'; };

  try {
    if (*run) {
      RunConfig cfg = load_config(config_path);
      if (*run_seed) cfg.seed = seed;
      if (!run_out.empty()) ensure_writable(run_out, force);
      auto t0 = std::chrono::steady_clock::now();
      RunOutcome o = execute_run(cfg, log);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out << summary_text(o);
      if (timings) out << fmt::format("wall time: {:.2f} s\n", secs);
      if (!run_out.empty()) write_file(run_out, report_text(o));
    } else if (*merge) {
      if (!merge_out.empty()) ensure_writable(merge_out, force);
      Skeleton a, b;
      try {
        a = parse_skeleton(left);
        b = parse_skeleton(right);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      PoolOptions opt;
      opt.max_size = pool_max;
      opt.patience = patience > 0 ? patience : std::numeric_limits<int>::max();
      opt.max_attempts = attempts;
      Pool pool;
      try {
        pool = generate_pool(a, b, opt, seed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      int bad = 0;
      for (const auto& m : pool.members)
        if (!preserves_skeleton(m, a) || !preserves_skeleton(m, b)) ++bad;
      out << fmt::format("{} attempts, {} distinct merges, {} preservation violations\n", pool.attempts,
                         pool.members.size(), bad);
      for (const auto& m : pool.members) out << m.str() << '\n';
      if (!merge_out.empty()) {
        nlohmann::ordered_json j;
        j["left"] = a.str();
        j["right"] = b.str();
        j["attempts"] = pool.attempts;
        j["preservation_violations"] = bad;
        j["pool"] = nlohmann::ordered_json::array();
        for (const auto& m : pool.members) j["pool"].push_back(m.str());
        write_file(merge_out, j.dump(2) + "\n");
      }
    } else if (*equiv) {
      Skeleton a, b;
      try {
        a = parse_skeleton(ea);
        b = parse_skeleton(eb);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      out << "normalized a: " << to_infix(normalize(a.expr)) << '\n';
      out << "normalized b: " << to_infix(normalize(b.expr)) << '\n';
      out << "equivalent: " << (equivalent(a.expr, b.expr) ? "yes" : "no") << '\n';
      out << "same core: " << (core_equivalent(a.expr, b.expr) ? "yes" : "no") << '\n';
    } else if (*dataset) {
      const Problem* p;
      try {
        p = &find_problem(problem_id);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      ensure_writable(data_out, force);
      Region r = region == "extrapolation" ? Region::Extrapolation : Region::Interpolation;
      Dataset d;
      try {
        d = sample_problem(*p, rows, noise, seed, r);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      write_csv(data_out, d);
      out << fmt::format("wrote {} rows of {} to {}\n", d.rows(), p->id, data_out);
    } else if (*rules) {
      for (const auto& rule : rewrite_rules())
        out << fmt::format("{:>2}  {:<36} {}  ->  {}{}\n", rule.row, rule.name, rule.lhs, rule.rhs,
                           rule.reversed ? "  (applied right to left)" : "");
    } else if (*problems) {
      for (const auto& p : benchmark_problems()) {
        std::string dom;
        for (std::size_t i = 0; i < p.domain.size(); ++i)
          dom += fmt::format("{}x{} in [{}, {}]", i ? ", " : "", i, p.domain[i].lo, p.domain[i].hi);
        out << fmt::format("{:<4} {}    {}\n", p.id, p.formula, dom);
      }
    } else if (*bench) {
      RunConfig base;
      if (!bench_config.empty()) base = load_config(bench_config);
      if (*bench_seed) base.seed = seed;
      if (!bench_out.empty()) ensure_writable(bench_out, force);
      base.dataset.clear();
      nlohmann::ordered_json summary = nlohmann::ordered_json::array();
      out << fmt::format("{:<5} {:<6} {:>12} {:>12}  {}\n", "id", "form", "interp mse", "extrap mse", "best");
      for (const auto& id : bench_ids) {
        RunConfig cfg = base;
        cfg.problem = id;
        auto t0 = std::chrono::steady_clock::now();
        RunOutcome o = execute_run(cfg, log);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto& best = o.result.best();
        const auto& ev = o.evaluations.front();
        out << fmt::format("{:<5} {:<6} {:>12.4g} {:>12.4g}  {}", id, ev.form_match ? "match" : "miss",
                           ev.interpolation_mse, ev.extrapolation_mse, to_infix(best.expression));
        if (timings) out << fmt::format("  ({:.1f} s)", secs);
        out << '\n';
        summary.push_back(report_json(o));
      }
      if (!bench_out.empty()) write_file(bench_out, summary.dump(2) + "\n");
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}

}  // namespace setgap
