#pragma once

#include <string>
#include <vector>

#include "setgap/expr.hpp"
#include "setgap/skeleton.hpp"

namespace setgap {

// Rewrite a skeleton with the trigonometric, hyperbolic, logarithmic and
// scaling rules until nothing changes (at most 10 passes). Each rule maps a
// family of functions onto an equal or larger family.
Expr normalize(const Expr& skeleton);

// Same family after normalization, up to placeholder renumbering.
bool equivalent(const Expr& a, const Expr& b);

// Structure left after normalizing and stripping every variable-free
// summand and factor (offsets and scales). cos is read as sin since a free
// phase turns one into the other.
Expr core(const Expr& skeleton);
bool core_equivalent(const Expr& a, const Expr& b);

// The merged skeleton, seen through the input's variables, still has the
// input's structure.
bool preserves_skeleton(const Skeleton& merged, const Skeleton& input);

// Form comparison for learned expressions against a ground truth: both are
// skeletonized, wrapped as c1*s + c2 and compared by core.
bool functional_form_match(const Expr& learned, const Expr& truth);

struct RewriteRule {
  int row;
  std::string name;
  std::string lhs;     // instance with f -> x0, g -> x0^2
  std::string rhs;     // target form for the same instance
  bool reversed;       // applied in the rhs -> lhs direction
  double lo, hi;       // input range for witnesses
};

const std::vector<RewriteRule>& rewrite_rules();

}  // namespace setgap
