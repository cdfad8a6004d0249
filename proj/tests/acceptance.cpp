// One PASS/FAIL line per acceptance criterion. Usage: setgap_acceptance --criterion N

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "setgap/canonical.hpp"
#include "setgap/commands.hpp"
#include "setgap/equiv.hpp"
#include "setgap/ga.hpp"
#include "setgap/kernels.hpp"
#include "setgap/merge.hpp"
#include "support.hpp"

using namespace setgap;

namespace {

const std::string kData = SETGAP_TEST_DATA;

struct Verdict {
  bool pass;
  std::string detail;
};

void note(const std::string& s) { std::cout << "  " << s << std::endl; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunOutcome run_config(const std::string& name, double* secs = nullptr) {
  auto t0 = std::chrono::steady_clock::now();
  RunOutcome o = execute_run(load_config(kData + "/" + name));
  if (secs) *secs = seconds_since(t0);
  return o;
}

int run_cli_quiet(std::vector<std::string> args) {
  args.insert(args.begin(), "setgap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) note("cli error: " + err.str());
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::vector<std::string> kRecovery = {"E3", "E10", "E11", "E12", "E13"};

Verdict recovery() {
  bool ok = true;
  for (const auto& id : kRecovery) {
    double secs = 0;
    RunOutcome o = run_config("run_" + id + ".cfg", &secs);
    const Evaluation& e = o.evaluations.front();
    bool good = e.form_match && e.interpolation_mse <= 1e-3 && secs <= 300;
    note(fmt::format("{}: form {} interpolation mse {:.3g} time {:.0f} s  {}", id, e.form_match ? "match" : "miss",
                     e.interpolation_mse, secs, to_infix(o.result.best().expression)));
    ok = ok && good;
  }
  return {ok, "form match, interpolation MSE <= 1e-3, <= 300 s on E3 E10 E11 E12 E13"};
}

// value and slope of a univariate affine argument
std::pair<double, double> affine(const Expr& arg, int var) {
  std::vector<double> x0(static_cast<std::size_t>(var) + 1, 0.0), x1 = x0;
  x1[static_cast<std::size_t>(var)] = 1.0;
  double a = evaluate(arg, x0), b = evaluate(arg, x1);
  return {a, b - a};
}

Verdict coefficients() {
  RunOutcome o = run_config("run_E3.cfg");
  CanonicalForm cf = to_canonical(o.result.best().expression);
  double scale = NAN, rate = NAN, amp = NAN, freq = NAN;
  for (const auto& t : cf.terms) {
    if (t.factors.size() != 1 || !t.coeff.is(NodeKind::Constant)) continue;
    const auto& f = t.factors[0];
    if (f.op == UnaryOp::Exp) {
      auto [k, b] = affine(f.arg, 0);
      scale = t.coeff.value() * std::exp(k);
      rate = b;
    } else if (f.op == UnaryOp::Sin || f.op == UnaryOp::Cos) {
      amp = std::fabs(t.coeff.value());
      freq = std::fabs(affine(f.arg, 1).second);
    }
  }
  note(fmt::format("fitted {}", to_infix(o.result.best().expression)));
  note(fmt::format("exp scale {:.5f} rate {:.5f}, wave amplitude {:.5f} frequency {:.5f}", scale, rate, amp, freq));
  bool ok = std::fabs(scale - 0.15) <= 1e-2 && std::fabs(rate - 1.5) <= 1e-2 && std::fabs(amp - 0.5) <= 1e-2 &&
            std::fabs(freq - 3) <= 1e-2;
  return {ok, "E3 coefficients within 1e-2 of (0.15, 1.5, 0.5, 3)"};
}

Verdict sine_merge() {
  auto out = (std::filesystem::temp_directory_path() / "setgap_acceptance_pool.json").string();
  int code = run_cli_quiet({"merge", "c1*sin(c2*x0*x1 + c3)", "c1*sin(c2*x2 + c3)", "--attempts", "10000", "--seed",
                            "0", "--out", out, "--force"});
  if (code != 0) return {false, "merge command failed"};
  auto j = nlohmann::json::parse(slurp(out));
  std::filesystem::remove(out);
  Skeleton a = parse_skeleton("c1*sin(c2*x0*x1 + c3)"), b = parse_skeleton("c1*sin(c2*x2 + c3)");
  int violations = 0;
  std::vector<Skeleton> pool;
  for (const auto& s : j["pool"]) {
    pool.push_back(parse_skeleton(s.get<std::string>()));
    if (!preserves_skeleton(pool.back(), a) || !preserves_skeleton(pool.back(), b)) ++violations;
  }
  bool all = true;
  for (const char* form : {"c1*(c2 + sin(c3*x0*x1 + c4))*(c5 + sin(c6*x2 + c7))", "c1*sin(c2*x0*x1 + c3*x2 + c4)",
                           "c1*sin(c2*x0*x1*x2 + c3)"}) {
    bool found = false;
    for (const auto& m : pool) found = found || equivalent(m.expr, parse_skeleton(form).expr);
    note(fmt::format("{}: {}", form, found ? "found" : "missing"));
    all = all && found;
  }
  note(fmt::format("{} attempts, pool of {}, {} violations", j["attempts"].get<long>(), pool.size(), violations));
  return {all && violations == 0, "10000 attempts reach all three sine-example forms, no preservation violations"};
}

Verdict random_merges() {
  auto sources = testing::benchmark_univariate_skeletons();
  Rng pick(2024);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    Skeleton a = sources[pick() % sources.size()];
    Skeleton b = Skeleton::from(testing::rename_variables(sources[pick() % sources.size()].expr, 1));
    Rng rng = make_rng(7, "random-merge", static_cast<std::uint64_t>(i));
    Skeleton m = Skeleton::from(normalize(merge_pair(a, b, rng).expr));
    if (!preserves_skeleton(m, a) || !preserves_skeleton(m, b)) {
      ++violations;
      note(fmt::format("violation: {} + {} -> {}", a.str(), b.str(), m.str()));
    }
  }
  note(fmt::format("{} violations in 200 merges", violations));
  return {violations == 0, "200 random merges of benchmark skeletons preserve both inputs"};
}

Verdict canonical_round_trip() {
  Rng rng(31337);
  double worst = 0;
  int done = 0, drawn = 0;
  while (done < 500) {
    ++drawn;
    Expr e = testing::random_expr(rng, 5);
    std::vector<std::vector<double>> pts;
    for (int t = 0; t < 400 && pts.size() < 20; ++t) {
      std::vector<double> x{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
      double y = evaluate(e, x);
      if (std::isfinite(y) && std::fabs(y) < 1e12) pts.push_back(x);
    }
    if (pts.size() < 20) continue;
    Expr r = to_canonical(e).reconstruct();
    for (const auto& x : pts) {
      double a = evaluate(e, x), b = evaluate(r, x);
      double err = std::isfinite(b) ? std::fabs(a - b) / std::max(1.0, std::fabs(a)) : INFINITY;
      worst = std::max(worst, err);
    }
    ++done;
  }
  note(fmt::format("{} expressions ({} drawn), worst relative error {:.3g}", done, drawn, worst));
  return {worst <= 1e-9, "500 random expressions reconstruct with relative error <= 1e-9"};
}

Verdict ga_oracles() {
  struct Basis {
    const char* skeleton;
    std::function<double(double)> g;
  };
  const std::vector<Basis> basis = {
      {"c1*x0 + c2", [](double x) { return x; }},
      {"c1*x0^2 + c2", [](double x) { return x * x; }},
      {"c1*x0^3 + c2", [](double x) { return x * x * x; }},
      {"c1*sin(x0) + c2", [](double x) { return std::sin(x); }},
      {"c1*exp(x0) + c2", [](double x) { return std::exp(x); }},
      {"c1*log(x0 + 3) + c2", [](double x) { return std::log(x + 3); }},
  };
  Rng task(77);
  double worst_gap = -INFINITY;
  for (int t = 0; t < 50; ++t) {
    const Basis& bs = basis[static_cast<std::size_t>(t) % basis.size()];
    double a = uniform(task, -5, 5), b = uniform(task, -5, 5);
    Matrix X(200, 1);
    std::vector<double> y(200), g(200);
    for (std::size_t r = 0; r < 200; ++r) {
      X(r, 0) = uniform(task, -2, 2);
      g[r] = bs.g(X(r, 0));
      y[r] = a * g[r] + b + 0.1 * standard_normal(task);
    }
    double mg = 0, my = 0;
    for (std::size_t r = 0; r < 200; ++r) {
      mg += g[r] / 200;
      my += y[r] / 200;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t r = 0; r < 200; ++r) {
      sxy += (g[r] - mg) * (y[r] - my);
      sxx += (g[r] - mg) * (g[r] - mg);
    }
    double ah = sxy / sxx, bh = my - ah * mg, opt = 0;
    for (std::size_t r = 0; r < 200; ++r) opt += std::pow(ah * g[r] + bh - y[r], 2) / 200;
    Rng rng = make_rng(5, "linear-task", static_cast<std::uint64_t>(t));
    double got = fit_coefficients(Skeleton::from(parse_infix(bs.skeleton)), X, y, Objective::MinMse, GaConfig{}, rng).objective;
    worst_gap = std::max(worst_gap, got - opt);
  }
  note(fmt::format("linear tasks: worst GA MSE minus least-squares MSE {:.3g}", worst_gap));

  double worst_sin = -INFINITY;
  for (int t = 0; t < 10; ++t) {
    double amp = uniform(task, 0.5, 3), w = uniform(task, 0.5, 4.5);
    Matrix X(300, 1);
    std::vector<double> y(300);
    for (std::size_t r = 0; r < 300; ++r) {
      X(r, 0) = uniform(task, -3, 3);
      y[r] = amp * std::sin(w * X(r, 0)) + 0.05 * standard_normal(task);
    }
    double grid = 0;
    for (int k = -500; k <= 500; ++k) {
      if (k == 0) continue;
      std::vector<double> p(300);
      for (std::size_t r = 0; r < 300; ++r) p[r] = std::sin(k * 0.01 * X(r, 0));
      grid = std::max(grid, objective_value(Objective::MaxAbsCorrelation, fitness(Objective::MaxAbsCorrelation, p, y)));
    }
    Rng rng = make_rng(5, "sine-task", static_cast<std::uint64_t>(t));
    double got =
        fit_coefficients(parse_skeleton("c1*sin(c2*x0)"), X, y, Objective::MaxAbsCorrelation, GaConfig{}, rng).objective;
    worst_sin = std::max(worst_sin, grid - got);
  }
  note(fmt::format("sine tasks: worst grid |corr| minus GA |corr| {:.3g}", worst_sin));
  return {worst_gap <= 1e-6 && worst_sin <= 1e-4,
          "GA within 1e-6 MSE of least squares on 50 tasks and within 1e-4 |corr| of a grid search"};
}

Verdict rule_witnesses() {
  bool ok = true;
  for (const auto& rule : rewrite_rules()) {
    Expr source = canonicalize(parse_infix(rule.reversed ? rule.rhs : rule.lhs));
    Skeleton target = Skeleton::from(parse_infix(rule.reversed ? rule.lhs : rule.rhs));
    double worst = 1.0;
    for (int k = 0; k < 5; ++k) {
      Rng rng = make_rng(11, "rule-witness", static_cast<std::uint64_t>(rule.row * 10 + k));
      std::vector<double> params(static_cast<std::size_t>(max_placeholder_id(source)));
      for (auto& p : params) p = uniform(rng, 0.5, 2.0);
      Matrix X(300, 1);
      std::vector<double> y(300);
      for (std::size_t r = 0; r < 300; ++r) {
        X(r, 0) = uniform(rng, rule.lo, rule.hi);
        y[r] = evaluate(source, X.row(r), params);
      }
      double corr = fit_coefficients(target, X, y, Objective::MaxAbsCorrelation, GaConfig{}, rng).objective;
      worst = std::min(worst, corr);
    }
    note(fmt::format("row {:>2} {:<36} worst |corr| 1 - {:.2g}", rule.row, rule.name, 1 - worst));
    ok = ok && worst > 1 - 1e-6;
  }
  return {ok, "every rewrite rule has |corr| > 1 - 1e-6 at 5 parameterizations"};
}

Verdict noise_robustness() {
  bool ok = true;
  for (const char* id : {"E10", "E12"}) {
    RunOutcome o = run_config(std::string("knn_") + id + ".cfg");
    const Evaluation& e = o.evaluations.front();
    note(fmt::format("{}: form {} interpolation mse {:.3g}  {}", id, e.form_match ? "match" : "miss",
                     e.interpolation_mse, to_infix(o.result.best().expression)));
    ok = ok && e.form_match && e.interpolation_mse <= 5e-3;
  }
  return {ok, "E10 and E12 at noise 0.01 with a nearest-neighbour model: form match, MSE <= 5e-3"};
}

Verdict extrapolation() {
  RunOutcome o = run_config("run_E8.cfg");
  const Evaluation& e = o.evaluations.front();
  note(fmt::format("recovered {}  form {}  extrapolation mse {:.3g}", to_infix(o.result.best().expression),
                   e.form_match ? "match" : "miss", e.extrapolation_mse));

  const Problem& p = find_problem("E8");
  const RunConfig& cfg = o.config;
  Dataset data = sample_problem(p, cfg.dataset_size, cfg.noise, derive_seed(cfg.seed, hash_label("dataset")));
  Skeleton wrong = parse_skeleton("c1*x0^2 + c2*x1^2 + c3");
  auto fit = estimate_functions({{wrong, 0.0}}, data, cfg.pipeline, cfg.seed).front();
  Dataset outside = sample_problem(p, cfg.eval_size, 0.0, derive_seed(cfg.seed, hash_label("evaluation")),
                                   Region::Extrapolation);
  double wrong_mse = mse(Program::compile(fit.expression).evaluate(outside.X, {}), outside.y);
  note(fmt::format("wrong-form baseline {}  extrapolation mse {:.3g}", to_infix(fit.expression), wrong_mse));
  return {e.form_match && e.extrapolation_mse <= 1e-4 && wrong_mse >= 1e-2,
          "E8 correct form extrapolates with MSE <= 1e-4, wrong form >= 1e-2"};
}

Verdict determinism() {
  bool ok = true;
  auto dir = std::filesystem::temp_directory_path();
  for (const auto& id : kRecovery) {
    std::string cfg = kData + "/run_" + id + ".cfg";
    std::string a = (dir / ("setgap_det_a_" + id + ".json")).string();
    std::string b = (dir / ("setgap_det_b_" + id + ".json")).string();
    bool same = run_cli_quiet({"--threads", "1", "run", "--config", cfg, "--out", a, "--force"}) == 0 &&
                run_cli_quiet({"--threads", "1", "run", "--config", cfg, "--out", b, "--force"}) == 0 &&
                slurp(a) == slurp(b) && !slurp(a).empty();
    note(fmt::format("{}: reports {}", id, same ? "identical" : "differ"));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    ok = ok && same;
  }
  return {ok, "same seed with --threads 1 gives byte-identical reports"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "Criterion number 1-10")->required()->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Verdict()>> checks = {recovery,        coefficients,     sine_merge,  random_merges,
                                                        canonical_round_trip, ga_oracles, rule_witnesses,
                                                        noise_robustness, extrapolation, determinism};
  Verdict v;
  try {
    v = checks[static_cast<std::size_t>(criterion - 1)]();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << v.detail << std::endl;
  return v.pass ? 0 : 1;
}
