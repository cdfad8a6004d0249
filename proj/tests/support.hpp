#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "setgap/bench.hpp"
#include "setgap/expr.hpp"
#include "setgap/rng.hpp"
#include "setgap/skeleton.hpp"

namespace testing {

using namespace setgap;

// Random expression over x0..x{arity-1} with depth at most `depth`.
// Constants stay small so that exp and powers stay in range.
inline Expr random_expr(Rng& rng, int depth, int arity = 3) {
  if (depth <= 1 || coin(rng, 0.25)) {
    if (coin(rng, 0.6)) return Expr::variable(uniform_int(rng, 0, arity - 1));
    return Expr::constant(std::round(uniform(rng, -3, 3) * 100) / 100);
  }
  static const UnaryOp unary[] = {UnaryOp::Sin, UnaryOp::Cos, UnaryOp::Exp, UnaryOp::Log,
                                  UnaryOp::Sqrt, UnaryOp::Abs, UnaryOp::Tanh, UnaryOp::Atan};
  switch (uniform_int(rng, 0, 5)) {
    case 0: {
      UnaryOp op = unary[uniform_int(rng, 0, 7)];
      Expr a = random_expr(rng, depth - 1, arity);
      if (op == UnaryOp::Exp) a = Expr::unary(UnaryOp::Tanh, a);
      return Expr::unary(op, a);
    }
    case 1:
      return random_expr(rng, depth - 1, arity) + random_expr(rng, depth - 1, arity);
    case 2:
      return random_expr(rng, depth - 1, arity) * random_expr(rng, depth - 1, arity);
    case 3:
      return random_expr(rng, depth - 1, arity) - random_expr(rng, depth - 1, arity);
    case 4:
      return random_expr(rng, depth - 1, arity) / random_expr(rng, depth - 1, arity);
    default: {
      static const double exps[] = {2, 3, -1, -2, 0.5};
      return Expr::power(random_expr(rng, depth - 1, arity), Expr::constant(exps[uniform_int(rng, 0, 4)]));
    }
  }
}

// Replaces every variable by x{to}.
inline Expr rename_variables(const Expr& e, int to) {
  switch (e.kind()) {
    case NodeKind::Variable:
      return Expr::variable(to);
    case NodeKind::Constant:
    case NodeKind::Placeholder:
      return e;
    case NodeKind::Unary:
      return Expr::unary(e.op(), rename_variables(e.child(0), to));
    case NodeKind::Power:
      return Expr::power(rename_variables(e.child(0), to), rename_variables(e.child(1), to));
    case NodeKind::Quotient:
      return Expr::quotient(rename_variables(e.child(0), to), rename_variables(e.child(1), to));
    case NodeKind::Sum:
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const auto& c : e.children()) kids.push_back(rename_variables(c, to));
      return e.is(NodeKind::Sum) ? Expr::sum(kids) : Expr::product(kids);
    }
  }
  return e;
}

// Univariate skeletons of every benchmark problem, each rewritten over x0.
inline std::vector<Skeleton> benchmark_univariate_skeletons() {
  std::vector<Skeleton> out;
  for (const auto& p : benchmark_problems()) {
    for (int v = 0; v < static_cast<int>(p.arity()); ++v) {
      Skeleton s = skeletonize(p.truth, {v});
      out.push_back(Skeleton::from(rename_variables(s.expr, 0)));
    }
  }
  return out;
}

}  // namespace testing
