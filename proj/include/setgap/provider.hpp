#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "setgap/data.hpp"
#include "setgap/ga.hpp"
#include "setgap/rng.hpp"
#include "setgap/skeleton.hpp"

namespace setgap {

// Source of univariate skeleton candidates for one input collection.
class SkeletonProvider {
 public:
  virtual ~SkeletonProvider() = default;
  virtual std::string name() const = 0;
  // At most `budget` skeletons over the collection's single varying variable.
  virtual std::vector<Skeleton> propose(const Collection& c, int budget, Rng& rng) = 0;
};

// Fixed candidate lists per variable, read from a text file:
//   # comment
//   var 0
//   c1*sin(c2*x0) + c3
//   var 1
//   ...
class FileProvider : public SkeletonProvider {
 public:
  explicit FileProvider(std::map<int, std::vector<Skeleton>> candidates, std::string label = "file");
  static FileProvider load(const std::string& path);
  static FileProvider parse(std::string_view text, const std::string& label = "inline");

  std::string name() const override { return label_; }
  std::vector<Skeleton> propose(const Collection& c, int budget, Rng& rng) override;
  const std::map<int, std::vector<Skeleton>>& candidates() const { return candidates_; }

 private:
  std::map<int, std::vector<Skeleton>> candidates_;
  std::string label_;
};

struct GrammarOptions {
  std::vector<UnaryOp> unary{UnaryOp::Sin, UnaryOp::Exp, UnaryOp::Log, UnaryOp::Sqrt};
  bool add = true;
  bool mul = true;
  bool div = true;
  bool pow = true;
  int max_ops = 3;
  int max_unary = 2;        // unary operators per expression
  int max_unary_depth = 1;  // unary operators on any root-to-leaf path
  std::size_t max_candidates = 20000;
  GaConfig quick_fit{.population_size = 100, .max_generations = 200};

  static GrammarOptions parse_ops(const std::string& list);  // "add,mul,pow,sin"
};

// Expressions of the grammar over one variable (no constants folded yet).
// Structure: the variable; u(a); a op b; a + c, c*a, c/a, a^c, a^2, a^3 with
// a free constant c. Each operator or constant operand costs one.
std::vector<Expr> enumerate_grammar(const GrammarOptions& opt, int var);
// The skeleton a grammar expression stands for: c1*G + c2, normalized.
Skeleton grammar_skeleton(const Expr& g);
// Distinct grammar skeletons in enumeration order.
std::vector<Skeleton> grammar_skeletons(const GrammarOptions& opt, int var);

// Enumerates the grammar, scores every skeleton by a short correlation fit
// on one input set, and returns the best.
class GrammarProvider : public SkeletonProvider {
 public:
  explicit GrammarProvider(GrammarOptions opt) : opt_(std::move(opt)) {}
  std::string name() const override { return "grammar"; }
  std::vector<Skeleton> propose(const Collection& c, int budget, Rng& rng) override;

 private:
  GrammarOptions opt_;
  std::map<int, std::vector<Skeleton>> cache_;
};

// Candidate lists derived from a known formula: the univariate skeleton of
// the truth for each variable plus a few generic distractors.
FileProvider truth_provider(const Expr& truth, int arity);

}  // namespace setgap
