#include "setgap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "setgap/equiv.hpp"

namespace setgap {

void PipelineConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (n_sets < 1) throw std::invalid_argument("n_sets must be positive");
  if (n_beam < 1) throw std::invalid_argument("n_beam must be positive");
  if (n_cand < 1) throw std::invalid_argument("n_cand must be positive");
  if (max_resample < 1) throw std::invalid_argument("max_resample must be positive");
  evolve.validate();
  univariate_fit.validate();
  estimate.validate();
}

KnnPredictor::KnnPredictor(Dataset train, int k) : train_(std::move(train)), k_(k) {
  if (k_ < 1) throw std::invalid_argument("k must be positive");
  if (train_.rows() < static_cast<std::size_t>(k_)) throw std::invalid_argument("fewer training rows than k");
}

std::vector<double> KnnPredictor::predict(const Matrix& X) const {
  if (X.cols() != train_.arity()) throw std::invalid_argument("query width differs from training data");
  const std::size_t m = train_.rows();
  const std::size_t t = X.cols();
  const std::size_t k = static_cast<std::size_t>(k_);
  std::vector<double> out(X.rows());
  const long rows = static_cast<long>(X.rows());
#pragma omp parallel
  {
    std::vector<std::pair<double, std::size_t>> d(m);
#pragma omp for schedule(static)
    for (long r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0;
        for (std::size_t c = 0; c < t; ++c) {
          double diff = train_.X(i, c) - X(static_cast<std::size_t>(r), c);
          s += diff * diff;
        }
        d[i] = {s, i};
      }
      std::nth_element(d.begin(), d.begin() + static_cast<long>(k - 1), d.end());
      double acc = 0;
      for (std::size_t j = 0; j < k; ++j) acc += train_.y[d[j].second];
      out[static_cast<std::size_t>(r)] = acc / static_cast<double>(k);
    }
  }
  return out;
}

std::vector<Interval> data_domain(const Dataset& d) {
  std::vector<Interval> out;
  for (std::size_t c = 0; c < d.arity(); ++c) {
    const double* col = d.X.col(c);
    auto [lo, hi] = std::minmax_element(col, col + d.rows());
    out.push_back({*lo, *hi});
  }
  return out;
}

namespace {

bool has_spread(const std::vector<double>& y) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : y) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi > lo;
}

bool better(const ScoredSkeleton& a, const ScoredSkeleton& b) {
  double qa = std::floor(a.score * 1e9), qb = std::floor(b.score * 1e9);
  if (qa != qb) return qa > qb;
  return a.skeleton.placeholder_count < b.skeleton.placeholder_count;
}

std::string key_of(const Skeleton& s) { return to_infix(normalize(s.expr)); }

std::string var_list(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "x" : ",x") + std::to_string(x);
  return s;
}

}  // namespace

Collection build_collection(const Predictor& model, const std::vector<Interval>& domain, const std::vector<int>& varying,
                            int n, int n_sets, int max_resample, Rng& rng) {
  const std::size_t t = domain.size();
  for (int v : varying)
    if (v < 0 || static_cast<std::size_t>(v) >= t) throw std::invalid_argument("varying variable outside the domain");
  std::vector<bool> is_varying(t, false);
  for (int v : varying) is_varying[static_cast<std::size_t>(v)] = true;

  Collection coll;
  coll.varying = varying;
  for (int s = 0; s < n_sets; ++s) {
    bool ok = false;
    for (int attempt = 0; attempt < max_resample && !ok; ++attempt) {
      InputSet set;
      set.X = Matrix(static_cast<std::size_t>(n), t);
      set.frozen.assign(t, std::numeric_limits<double>::quiet_NaN());
      for (std::size_t c = 0; c < t; ++c) {
        if (is_varying[c]) {
          for (int r = 0; r < n; ++r) set.X(static_cast<std::size_t>(r), c) = uniform(rng, domain[c].lo, domain[c].hi);
        } else {
          double f = uniform(rng, domain[c].lo, domain[c].hi);
          set.frozen[c] = f;
          std::fill(set.X.col(c), set.X.col(c) + n, f);
        }
      }
      set.y = model.predict(set.X);
      // redraw the varying part of rows whose response is undefined
      for (int round = 0; round < 20; ++round) {
        std::vector<std::size_t> bad;
        for (std::size_t r = 0; r < set.y.size(); ++r)
          if (std::isnan(set.y[r])) bad.push_back(r);
        if (bad.empty()) break;
        Matrix redo(bad.size(), t);
        for (std::size_t i = 0; i < bad.size(); ++i)
          for (std::size_t c = 0; c < t; ++c)
            redo(i, c) = is_varying[c] ? uniform(rng, domain[c].lo, domain[c].hi) : set.X(bad[i], c);
        std::vector<double> y2 = model.predict(redo);
        for (std::size_t i = 0; i < bad.size(); ++i) {
          for (std::size_t c = 0; c < t; ++c) set.X(bad[i], c) = redo(i, c);
          set.y[bad[i]] = y2[i];
        }
      }
      if (count_undefined(set.y) == 0 && has_spread(set.y)) {
        coll.sets.push_back(std::move(set));
        ok = true;
      }
    }
    if (!ok)
      throw StageError("collection", fmt::format("no usable frozen values for varying {} after {} attempts",
                                                 var_list(varying), max_resample));
  }
  return coll;
}

std::vector<UnivariateStage> univariate_skeletons(const Predictor& model, const std::vector<Interval>& domain,
                                                  SkeletonProvider& provider, const PipelineConfig& cfg,
                                                  std::uint64_t seed, const ProgressFn& log) {
  std::vector<UnivariateStage> out;
  for (std::size_t v = 0; v < domain.size(); ++v) {
    Rng rng = make_rng(seed, "univariate", v);
    UnivariateStage stage;
    stage.var = static_cast<int>(v);
    std::vector<Skeleton> found;
    std::unordered_set<std::string> seen;
    for (int k = 0; k < cfg.n_cand; ++k) {
      Collection coll = build_collection(model, domain, {stage.var}, cfg.n, cfg.n_sets, cfg.max_resample, rng);
      std::vector<Skeleton> proposed;
      try {
        proposed = provider.propose(coll, cfg.n_beam, rng);
      } catch (const std::exception& e) {
        throw StageError("univariate", e.what());
      }
      stage.proposed += static_cast<int>(proposed.size());
      for (auto& s : proposed)
        if (seen.insert(key_of(s)).second) found.push_back(std::move(s));
    }
    if (found.empty()) throw StageError("univariate", fmt::format("provider returned nothing for x{}", v));
    Collection test = build_collection(model, domain, {stage.var}, cfg.n, cfg.n_sets, cfg.max_resample, rng);
    const InputSet& set = test.sets[rng() % test.sets.size()];
    for (std::size_t i = 0; i < found.size(); ++i) {
      Rng fit_rng = make_rng(seed, "univariate-fit", v * 100000 + i);
      double score =
          fit_coefficients(found[i], set.X, set.y, Objective::MaxAbsCorrelation, cfg.univariate_fit, fit_rng).objective;
      stage.candidates.push_back({found[i], score});
    }
    std::stable_sort(stage.candidates.begin(), stage.candidates.end(), better);
    if (stage.candidates.size() > static_cast<std::size_t>(cfg.n_cand))
      stage.candidates.resize(static_cast<std::size_t>(cfg.n_cand));
    if (log) {
      for (const auto& c : stage.candidates) log(fmt::format("x{}: {}  |corr| = {:.9f}", v, c.skeleton.str(), c.score));
    }
    out.push_back(std::move(stage));
  }
  return out;
}

std::vector<CascadeStep> merge_cascade(const Predictor& model, const std::vector<Interval>& domain,
                                       const std::vector<UnivariateStage>& uni, const PipelineConfig& cfg,
                                       std::uint64_t seed, const ProgressFn& log) {
  std::vector<CascadeStep> steps;
  if (uni.size() < 2) return steps;
  std::vector<ScoredSkeleton> current = uni[0].candidates;
  std::vector<int> merged{uni[0].var};
  for (std::size_t q = 1; q < uni.size(); ++q) {
    CascadeStep step;
    step.merged_vars = merged;
    step.added_var = uni[q].var;
    std::vector<int> vars = merged;
    vars.push_back(uni[q].var);
    Rng rng = make_rng(seed, "cascade", q);
    Collection test = build_collection(model, domain, vars, cfg.n, cfg.n_sets, cfg.max_resample, rng);
    const InputSet& set = test.sets[rng() % test.sets.size()];

    std::vector<ScoredSkeleton> winners;
    std::uint64_t pair_index = 0;
    for (const auto& a : current) {
      for (const auto& b : uni[q].candidates) {
        std::uint64_t pair_seed = derive_seed(seed, hash_label("pair"), (q << 20) + pair_index++);
        Pool pool = generate_pool(a.skeleton, b.skeleton, cfg.pool, pair_seed);
        PairRecord rec;
        rec.left = a.skeleton.str();
        rec.right = b.skeleton.str();
        rec.pool_size = pool.members.size();
        rec.attempts = pool.attempts;
        for (const auto& m : pool.members) {
          if (!preserves_skeleton(m, a.skeleton) || !preserves_skeleton(m, b.skeleton)) ++rec.preservation_violations;
        }
        EvolveResult res = select_combination(pool.members, set.X, set.y, cfg.evolve, derive_seed(pair_seed, 1));
        rec.winner = res.skeleton.str();
        rec.fitness = res.fitness;
        rec.generations = res.generations;
        if (log)
          log(fmt::format("merge [{}] with [{}]: pool {} -> {}  |corr| = {:.9f}", rec.left, rec.right, rec.pool_size,
                          rec.winner, rec.fitness));
        step.pairs.push_back(rec);
        winners.push_back({res.skeleton, res.fitness});
      }
    }
    std::stable_sort(winners.begin(), winners.end(), better);
    std::unordered_set<std::string> seen;
    for (auto& w : winners) {
      if (static_cast<int>(step.survivors.size()) >= cfg.n_cand) break;
      if (seen.insert(key_of(w.skeleton)).second) step.survivors.push_back(w);
    }
    current = step.survivors;
    merged = vars;
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<FinalCandidate> estimate_functions(const std::vector<ScoredSkeleton>& skeletons, const Dataset& data,
                                               const PipelineConfig& cfg, std::uint64_t seed) {
  std::size_t rows = cfg.estimation_rows == 0 ? data.rows() : std::min(cfg.estimation_rows, data.rows());
  Matrix X = data.X.head(rows);
  std::vector<double> y(data.y.begin(), data.y.begin() + static_cast<long>(rows));
  std::vector<FinalCandidate> out;
  for (std::size_t i = 0; i < skeletons.size(); ++i) {
    Rng rng = make_rng(seed, "estimate", i);
    FitResult fit = fit_coefficients(skeletons[i].skeleton, X, y, Objective::MinMse, cfg.estimate, rng);
    FinalCandidate fc;
    fc.skeleton = skeletons[i].skeleton;
    fc.coefficients = fit.coefficients;
    fc.expression = set_constants(fc.skeleton, fit.coefficients);
    fc.mse = fit.objective;
    out.push_back(std::move(fc));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.mse < b.mse; });
  return out;
}

PipelineResult run_setgap(const Dataset& data, const Predictor& model, const std::vector<Interval>& domain,
                          SkeletonProvider& provider, const PipelineConfig& cfg, std::uint64_t seed,
                          const ProgressFn& log) {
  cfg.validate();
  if (data.rows() < 2) throw StageError("input", "dataset needs at least two rows");
  if (domain.size() != data.arity()) throw StageError("input", "domain width differs from dataset width");
  PipelineResult res;
  res.univariate = univariate_skeletons(model, domain, provider, cfg, seed, log);
  res.cascade = merge_cascade(model, domain, res.univariate, cfg, seed, log);
  const std::vector<ScoredSkeleton>& final_skeletons =
      res.cascade.empty() ? res.univariate.front().candidates : res.cascade.back().survivors;
  if (final_skeletons.empty()) throw StageError("merge", "no skeleton survived");
  res.ranked = estimate_functions(final_skeletons, data, cfg, seed);
  return res;
}

}  // namespace setgap
