#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "setgap/bench.hpp"
#include "setgap/data.hpp"
#include "setgap/evolve.hpp"
#include "setgap/ga.hpp"
#include "setgap/merge.hpp"
#include "setgap/provider.hpp"

namespace setgap {

// Error raised by a pipeline stage; the message names the stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Black-box regression model queried to build input collections.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<double> predict(const Matrix& X) const = 0;
};

// Evaluates a known expression; stands in for a perfectly trained model.
class ExactPredictor : public Predictor {
 public:
  explicit ExactPredictor(const Expr& f) : program_(Program::compile(f)) {}
  std::string name() const override { return "exact"; }
  std::vector<double> predict(const Matrix& X) const override { return program_.evaluate(X, {}); }

 private:
  Program program_;
};

// k-nearest-neighbour average over the training data (Euclidean distance).
class KnnPredictor : public Predictor {
 public:
  KnnPredictor(Dataset train, int k);
  std::string name() const override { return "knn"; }
  std::vector<double> predict(const Matrix& X) const override;

 private:
  Dataset train_;
  int k_;
};

struct PipelineConfig {
  int n = 3000;       // rows per input set
  int n_sets = 10;    // input sets per collection
  int n_beam = 3;     // skeletons per provider call
  int n_cand = 3;     // candidates kept per stage
  int max_resample = 10;  // attempts at drawing usable frozen values
  PoolOptions pool;
  EvolveConfig evolve;
  GaConfig univariate_fit;  // correlation fit used to rank univariate candidates
  GaConfig estimate;        // final MSE fit
  std::size_t estimation_rows = 0;  // 0 means all rows

  void validate() const;
};

struct ScoredSkeleton {
  Skeleton skeleton;
  double score = 0.0;
};

struct UnivariateStage {
  int var = 0;
  int proposed = 0;  // before duplicate removal
  std::vector<ScoredSkeleton> candidates;
};

struct PairRecord {
  std::string left;
  std::string right;
  std::size_t pool_size = 0;
  long attempts = 0;
  int preservation_violations = 0;
  std::string winner;
  double fitness = 0.0;
  int generations = 0;
};

struct CascadeStep {
  std::vector<int> merged_vars;
  int added_var = 0;
  std::vector<PairRecord> pairs;
  std::vector<ScoredSkeleton> survivors;
};

struct FinalCandidate {
  Skeleton skeleton;
  std::vector<double> coefficients;
  Expr expression;
  double mse = 0.0;
};

struct PipelineResult {
  std::vector<UnivariateStage> univariate;
  std::vector<CascadeStep> cascade;
  std::vector<FinalCandidate> ranked;  // ascending MSE
  const FinalCandidate& best() const { return ranked.front(); }
};

using ProgressFn = std::function<void(const std::string&)>;

// N_s input sets: per set, non-varying columns take one frozen value drawn
// from the domain, varying columns take n uniform draws; responses come from
// the model. Rows with an undefined response are redrawn, and sets whose
// response is undefined or constant get new frozen values.
Collection build_collection(const Predictor& model, const std::vector<Interval>& domain, const std::vector<int>& varying,
                            int n, int n_sets, int max_resample, Rng& rng);

std::vector<UnivariateStage> univariate_skeletons(const Predictor& model, const std::vector<Interval>& domain,
                                                  SkeletonProvider& provider, const PipelineConfig& cfg,
                                                  std::uint64_t seed, const ProgressFn& log = {});

std::vector<CascadeStep> merge_cascade(const Predictor& model, const std::vector<Interval>& domain,
                                       const std::vector<UnivariateStage>& uni, const PipelineConfig& cfg,
                                       std::uint64_t seed, const ProgressFn& log = {});

std::vector<FinalCandidate> estimate_functions(const std::vector<ScoredSkeleton>& skeletons, const Dataset& data,
                                               const PipelineConfig& cfg, std::uint64_t seed);

PipelineResult run_setgap(const Dataset& data, const Predictor& model, const std::vector<Interval>& domain,
                          SkeletonProvider& provider, const PipelineConfig& cfg, std::uint64_t seed,
                          const ProgressFn& log = {});

// Per-variable [min, max] of the dataset columns.
std::vector<Interval> data_domain(const Dataset& d);

}  // namespace setgap
