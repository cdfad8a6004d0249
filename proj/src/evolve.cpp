#include "setgap/evolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace setgap {

void EvolveConfig::validate() const {
  if (rep < 2) throw std::invalid_argument("rep must be at least 2");
  if (max_generations < 1) throw std::invalid_argument("max generations must be positive");
  if (tie_tolerance < 0) throw std::invalid_argument("tie tolerance must be non-negative");
  GaConfig g = operators;
  g.population_size = rep;
  g.validate();
}

namespace {

struct SubPopulation {
  Program program;
  std::vector<Genome> pop{};
  Rng rng;
  double best = -std::numeric_limits<double>::infinity();
  double reference = -std::numeric_limits<double>::infinity();
  Genome best_genome{};
  int stall = 0;
  bool active = true;
};

}  // namespace

EvolveResult select_combination(std::span<const Skeleton> candidates, const Matrix& X, std::span<const double> y,
                                const EvolveConfig& cfg, std::uint64_t seed, const GenerationHook& hook) {
  if (candidates.empty()) throw std::invalid_argument("no candidate skeletons to evolve");
  if (X.rows() != y.size()) throw std::invalid_argument("input rows and responses differ in length");
  cfg.validate();
  GaConfig ops = cfg.operators;
  ops.population_size = cfg.rep;

  const std::uint64_t stream = hash_label("subpopulation");
  std::vector<SubPopulation> subs;
  subs.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    SubPopulation s{.program = Program::compile(candidates[i].expr), .rng = Rng(derive_seed(seed, stream, i))};
    int dim = candidates[i].placeholder_count;
    s.pop = random_population(cfg.rep, dim, ops, s.rng);
    s.best_genome = s.pop[0];
    if (s.program.max_variable() >= static_cast<int>(X.cols()))
      throw std::invalid_argument("candidate uses a variable outside the test data");
    subs.push_back(std::move(s));
  }

  std::vector<double> best(subs.size());
  int gen = 0;
  for (; gen < cfg.max_generations; ++gen) {
    bool any = false;
    const long n = static_cast<long>(subs.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
      SubPopulation& s = subs[static_cast<std::size_t>(k)];
      if (!s.active) continue;
      std::vector<double> fit = score_population(s.program, X, y, s.pop, Objective::MaxAbsCorrelation, ops, false);
      for (std::size_t i = 0; i < s.pop.size(); ++i) {
        if (fit[i] > s.best) {
          s.best = fit[i];
          s.best_genome = s.pop[i];
        }
      }
      bool improved = std::isfinite(s.best) &&
                      (!std::isfinite(s.reference) || s.best - s.reference > cfg.stall_tolerance);
      if (improved) {
        s.reference = s.best;
        s.stall = 0;
      } else {
        ++s.stall;
      }
      // a skeleton without placeholders has nothing to evolve
      if (s.stall >= cfg.stall_generations || s.best >= cfg.perfect || s.pop[0].empty()) {
        s.active = false;
      } else {
        s.pop = next_generation(s.pop, fit, ops, s.rng);
      }
    }
    for (std::size_t k = 0; k < subs.size(); ++k) {
      best[k] = objective_value(Objective::MaxAbsCorrelation, subs[k].best);
      any = any || subs[k].active;
    }
    if (hook) hook(gen, best);
    if (!any) {
      ++gen;
      break;
    }
  }

  double top = -1.0;
  for (double b : best) top = std::max(top, b);
  std::size_t pick = 0;
  bool found = false;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (best[k] < top - cfg.tie_tolerance) continue;
    if (!found || candidates[k].placeholder_count < candidates[pick].placeholder_count) {
      pick = k;
      found = true;
    }
  }
  EvolveResult r;
  r.index = pick;
  r.skeleton = candidates[pick];
  r.fitness = best[pick];
  r.coefficients = subs[pick].best_genome;
  r.candidate_fitness = best;
  r.generations = std::min(gen, cfg.max_generations);
  return r;
}

}  // namespace setgap
