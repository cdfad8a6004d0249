#include "setgap/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace setgap {

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json scored(const std::vector<ScoredSkeleton>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back({{"skeleton", s.skeleton.str()}, {"abs_corr", number(s.score)}});
  return a;
}

}  // namespace

json report_json(const RunOutcome& o) {
  const RunConfig& c = o.config;
  const PipelineConfig& p = c.pipeline;
  json r;
  r["config"] = {
      {"problem", c.problem},        {"dataset", c.dataset},         {"provider", c.provider},
      {"provider_file", c.provider_file}, {"model", c.model},       {"knn_k", c.knn_k},
      {"dataset_size", c.dataset_size},   {"noise", c.noise},       {"eval_size", c.eval_size},
      {"seed", c.seed},              {"n", p.n},                     {"n_sets", p.n_sets},
      {"n_beam", p.n_beam},          {"n_cand", p.n_cand},           {"pool_max", p.pool.max_size},
      {"pool_patience", p.pool.patience}, {"rep", p.evolve.rep},    {"max_gen", p.evolve.max_generations},
      {"estimation_rows", p.estimation_rows},
  };

  json uni = json::array();
  for (const auto& u : o.result.univariate)
    uni.push_back({{"variable", u.var}, {"proposed", u.proposed}, {"candidates", scored(u.candidates)}});
  r["univariate"] = uni;

  json cascade = json::array();
  for (const auto& s : o.result.cascade) {
    json pairs = json::array();
    for (const auto& pr : s.pairs) {
      pairs.push_back({{"left", pr.left},
                       {"right", pr.right},
                       {"pool_size", pr.pool_size},
                       {"attempts", pr.attempts},
                       {"preservation_violations", pr.preservation_violations},
                       {"winner", pr.winner},
                       {"abs_corr", number(pr.fitness)},
                       {"generations", pr.generations}});
    }
    cascade.push_back({{"merged_vars", s.merged_vars},
                       {"added_var", s.added_var},
                       {"pairs", pairs},
                       {"survivors", scored(s.survivors)}});
  }
  r["merge"] = cascade;

  json fin = json::array();
  for (std::size_t i = 0; i < o.result.ranked.size(); ++i) {
    const auto& f = o.result.ranked[i];
    json e = {{"skeleton", f.skeleton.str()},
              {"expression", to_infix(f.expression)},
              {"coefficients", f.coefficients},
              {"mse", number(f.mse)}};
    if (i < o.evaluations.size()) {
      e["interpolation_mse"] = number(o.evaluations[i].interpolation_mse);
      e["extrapolation_mse"] = number(o.evaluations[i].extrapolation_mse);
      e["form_match"] = o.evaluations[i].form_match;
    }
    fin.push_back(e);
  }
  r["estimate"] = fin;
  if (!o.result.ranked.empty()) r["best"] = fin.front();
  return r;
}

std::string report_text(const RunOutcome& o) { return report_json(o).dump(2) + "\n"; }

std::string summary_text(const RunOutcome& o) {
  std::string s;
  const auto& c = o.config;
  s += fmt::format("data: {}  provider: {}  model: {}  seed: {}\n", c.problem.empty() ? c.dataset : c.problem,
                   c.provider, c.model, c.seed);
  for (const auto& u : o.result.univariate) {
    s += fmt::format("x{} candidates:\n", u.var);
    for (const auto& cand : u.candidates) s += fmt::format("  {:.9f}  {}\n", cand.score, cand.skeleton.str());
  }
  for (const auto& st : o.result.cascade) {
    s += fmt::format("merge step adding x{}:\n", st.added_var);
    for (const auto& sv : st.survivors) s += fmt::format("  {:.9f}  {}\n", sv.score, sv.skeleton.str());
  }
  s += "ranked functions:\n";
  for (std::size_t i = 0; i < o.result.ranked.size(); ++i) {
    const auto& f = o.result.ranked[i];
    s += fmt::format("  mse {:.6g}  {}\n", f.mse, to_infix(f.expression));
    if (i < o.evaluations.size()) {
      const auto& e = o.evaluations[i];
      s += fmt::format("    interpolation {:.6g}  extrapolation {:.6g}  form match {}\n", e.interpolation_mse,
                       e.extrapolation_mse, e.form_match ? "yes" : "no");
    }
  }
  return s;
}

}  // namespace setgap
