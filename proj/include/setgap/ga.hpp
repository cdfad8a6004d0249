#pragma once

#include <span>
#include <vector>

#include "setgap/data.hpp"
#include "setgap/kernels.hpp"
#include "setgap/rng.hpp"
#include "setgap/skeleton.hpp"

namespace setgap {

enum class Objective { MaxAbsCorrelation, MinMse };

struct GaConfig {
  int population_size = 500;
  double stagnation_tolerance = 1e-6;
  int stagnation_generations = 30;
  int max_generations = 2000;
  int tournament_size = 3;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;
  double mutation_scale = 0.5;  // largest mutation step; smaller steps down to 1e-4 of it
  double init_low = -10.0;
  double init_high = 10.0;
  int elitism = 1;
  double undefined_limit = 0.5;  // fraction of undefined rows that gives worst fitness

  void validate() const;
};

struct FitResult {
  std::vector<double> coefficients;
  double objective = 0.0;  // |corr| or MSE
  int generations = 0;
};

using Genome = std::vector<double>;

// Fitness to maximize. -inf marks the worst possible individual.
double fitness(Objective obj, std::span<const double> pred, std::span<const double> y, double undefined_limit = 0.5);
// Objective value reported to callers from a fitness value.
double objective_value(Objective obj, double fit);

std::vector<Genome> random_population(int size, int dim, const GaConfig& cfg, Rng& rng);

// One generational step: elites are copied, the rest come from tournament
// selection, binomial crossover and per-gene Gaussian mutation.
std::vector<Genome> next_generation(const std::vector<Genome>& pop, std::span<const double> fit, const GaConfig& cfg,
                                    Rng& rng);

FitResult fit_coefficients(const Skeleton& s, const Matrix& X, std::span<const double> y, Objective obj,
                           const GaConfig& cfg, Rng& rng);

// Parallel population scoring for a skeleton; fitness per genome.
std::vector<double> score_population(const Program& p, const Matrix& X, std::span<const double> y,
                                     const std::vector<Genome>& pop, Objective obj, const GaConfig& cfg,
                                     bool parallel = true);

}  // namespace setgap
