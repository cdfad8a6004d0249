#pragma once

#include <memory>
#include <vector>

#include "setgap/expr.hpp"

namespace setgap {

// f = c0 + sum_i coeff_i * prod_j op_ij(arg_ij)
// Coefficients are variable-free expressions (numbers, placeholders, or
// products of them). Every argument is itself decomposable.
struct CanonicalForm {
  struct Factor {
    UnaryOp op = UnaryOp::Identity;
    Expr arg;
    std::shared_ptr<CanonicalForm> inner;  // set by to_canonical_deep
  };
  struct Term {
    Expr coeff;
    std::vector<Factor> factors;
  };

  Expr c0;
  std::vector<Term> terms;

  Expr reconstruct() const;
};

CanonicalForm to_canonical(const Expr& e);
// Decomposes every factor argument recursively down to the leaves.
CanonicalForm to_canonical_deep(const Expr& e);

// Summands for a sum, factors for a product, the node itself otherwise.
std::vector<Expr> subtree_list(const Expr& e);

}  // namespace setgap
