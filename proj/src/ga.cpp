#include "setgap/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace setgap {

namespace {
constexpr double kWorst = -std::numeric_limits<double>::infinity();
}

void GaConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("GA population size must be at least 2");
  if (tournament_size < 1) throw std::invalid_argument("tournament size must be positive");
  if (elitism < 0 || elitism >= population_size) throw std::invalid_argument("elitism must be in [0, population)");
  if (max_generations < 1) throw std::invalid_argument("max generations must be positive");
  if (stagnation_generations < 1) throw std::invalid_argument("stagnation window must be positive");
  if (!(init_low < init_high)) throw std::invalid_argument("initial coefficient range is empty");
  if (crossover_rate < 0 || crossover_rate > 1 || mutation_rate < 0 || mutation_rate > 1)
    throw std::invalid_argument("GA rates must lie in [0, 1]");
}

double standard_normal(Rng& rng) {
  double u1 = to_unit(rng());
  double u2 = to_unit(rng());
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double fitness(Objective obj, std::span<const double> pred, std::span<const double> y, double undefined_limit) {
  std::size_t bad = count_undefined(pred);
  if (static_cast<double>(bad) > undefined_limit * static_cast<double>(pred.size())) return kWorst;
  if (obj == Objective::MaxAbsCorrelation) {
    auto r = pearson(pred, y);
    return r ? std::fabs(*r) : kWorst;
  }
  double m = mse(pred, y);
  return std::isfinite(m) ? -m : kWorst;
}

double objective_value(Objective obj, double fit) {
  if (obj == Objective::MaxAbsCorrelation) return std::isfinite(fit) ? fit : 0.0;
  return std::isfinite(fit) ? -fit : std::numeric_limits<double>::infinity();
}

std::vector<Genome> random_population(int size, int dim, const GaConfig& cfg, Rng& rng) {
  std::vector<Genome> pop(static_cast<std::size_t>(size), Genome(static_cast<std::size_t>(dim)));
  for (auto& g : pop)
    for (auto& v : g) v = uniform(rng, cfg.init_low, cfg.init_high);
  return pop;
}

std::vector<Genome> next_generation(const std::vector<Genome>& pop, std::span<const double> fit, const GaConfig& cfg,
                                    Rng& rng) {
  const std::size_t n = pop.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

  auto tournament = [&]() {
    std::size_t best = rng() % n;
    for (int k = 1; k < cfg.tournament_size; ++k) {
      std::size_t c = rng() % n;
      if (fit[c] > fit[best]) best = c;
    }
    return best;
  };

  std::vector<Genome> next;
  next.reserve(n);
  for (int e = 0; e < cfg.elitism && static_cast<std::size_t>(e) < n; ++e) next.push_back(pop[order[e]]);
  const std::size_t dim = pop.empty() ? 0 : pop[0].size();
  while (next.size() < n) {
    Genome child = pop[tournament()];
    if (dim > 0) {
      const Genome& mate = pop[tournament()];
      std::size_t forced = rng() % dim;
      for (std::size_t j = 0; j < dim; ++j)
        if (j == forced || coin(rng, cfg.crossover_rate)) child[j] = mate[j];
      for (auto& v : child) {
        if (!coin(rng, cfg.mutation_rate)) continue;
        double scale = cfg.mutation_scale * std::pow(10.0, -static_cast<double>(uniform_int(rng, 0, 4)));
        v += scale * std::max(1.0, std::fabs(v)) * standard_normal(rng);
      }
    }
    next.push_back(std::move(child));
  }
  return next;
}

std::vector<double> score_population(const Program& p, const Matrix& X, std::span<const double> y,
                                     const std::vector<Genome>& pop, Objective obj, const GaConfig& cfg,
                                     bool parallel) {
  const double limit = cfg.undefined_limit;
  Scorer score = [&](std::span<const double> pred) { return fitness(obj, pred, y, limit); };
  return parallel ? evaluate_population(p, X, pop, score) : evaluate_population_serial(p, X, pop, score);
}

FitResult fit_coefficients(const Skeleton& s, const Matrix& X, std::span<const double> y, Objective obj,
                           const GaConfig& cfg, Rng& rng) {
  cfg.validate();
  if (X.rows() != y.size()) throw std::invalid_argument("input rows and responses differ in length");
  if (X.rows() < 2) throw std::invalid_argument("need at least two rows to fit");
  Program prog = Program::compile(s.expr);
  const int dim = s.placeholder_count;
  FitResult out;
  if (dim == 0) {
    std::vector<Genome> one{Genome{}};
    double f = score_population(prog, X, y, one, obj, cfg)[0];
    out.objective = objective_value(obj, f);
    return out;
  }
  std::vector<Genome> pop = random_population(cfg.population_size, dim, cfg, rng);
  double best = kWorst, reference = kWorst;
  Genome best_genome = pop[0];
  int stall = 0;
  int gen = 0;
  for (; gen < cfg.max_generations; ++gen) {
    std::vector<double> fit = score_population(prog, X, y, pop, obj, cfg);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (fit[i] > best) {
        best = fit[i];
        best_genome = pop[i];
      }
    }
    bool improved = std::isfinite(best) && (!std::isfinite(reference) || best - reference > cfg.stagnation_tolerance);
    if (improved) {
      reference = best;
      stall = 0;
    } else if (++stall >= cfg.stagnation_generations) {
      ++gen;
      break;
    }
    pop = next_generation(pop, fit, cfg, rng);
  }
  out.coefficients = best_genome;
  out.objective = objective_value(obj, best);
  out.generations = gen;
  return out;
}

}  // namespace setgap
