#pragma once

#include <span>
#include <string>
#include <vector>

#include "setgap/expr.hpp"

namespace setgap {

// An expression whose tunable constants are placeholders c1..ck, numbered in
// prefix order of the canonical tree.
struct Skeleton {
  Expr expr;
  int placeholder_count = 0;
  VarSet vars;

  // Canonicalizes and renumbers; does not collapse constants.
  static Skeleton from(const Expr& e);
  std::string str() const { return to_infix(expr); }
};

// kappa(f; keep): every maximal subtree without a variable from `keep`
// becomes a placeholder, numeric constants become placeholders (integer
// exponents in [-5, 5] stay numeric), then placeholder algebra runs to a
// fixpoint.
Skeleton skeletonize(const Expr& e, const VarSet& keep);
Skeleton skeletonize(const Expr& e);

// Placeholder algebra on an already-collapsed tree: merges placeholder
// summands and factors, collapses variable-free subtrees, and distributes a
// lone free scale over a sum whose terms are all scaled but at most one.
// Placeholders that occur more than once are tied and left alone.
Expr simplify_skeleton(const Expr& e);

// Substitute coefficient values (c_k takes values[k-1]) and fold.
Expr set_constants(const Skeleton& s, std::span<const double> values);

Skeleton parse_skeleton(std::string_view text, int arity = -1);

}  // namespace setgap
