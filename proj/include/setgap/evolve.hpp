#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "setgap/data.hpp"
#include "setgap/ga.hpp"
#include "setgap/skeleton.hpp"

namespace setgap {

struct EvolveConfig {
  int rep = 150;               // individuals per candidate skeleton
  int max_generations = 300;
  double tie_tolerance = 1e-6;
  // a subpopulation freezes after this many generations without a gain
  // above `stall_tolerance`, or once it is essentially perfect
  int stall_generations = 30;
  double stall_tolerance = 1e-6;
  double perfect = 1.0 - 1e-12;
  GaConfig operators;          // selection, crossover and mutation settings

  void validate() const;
};

struct EvolveResult {
  std::size_t index = 0;
  Skeleton skeleton;
  double fitness = 0.0;               // best |corr| of the winner
  std::vector<double> coefficients;
  std::vector<double> candidate_fitness;  // best |corr| per candidate
  int generations = 0;
};

// Called after each generation with the best fitness of every subpopulation.
using GenerationHook = std::function<void(int generation, std::span<const double> best)>;

// Evolve one subpopulation of `rep` coefficient vectors per candidate on the
// same test data and return the best candidate by |corr|. Ties within
// tie_tolerance go to fewer placeholders, then the earlier candidate.
EvolveResult select_combination(std::span<const Skeleton> candidates, const Matrix& X, std::span<const double> y,
                                const EvolveConfig& cfg, std::uint64_t seed, const GenerationHook& hook = {});

}  // namespace setgap
