#include "setgap/canonical.hpp"

namespace setgap {

namespace {

bool variable_free(const Expr& e) { return !has_variables(e); }

CanonicalForm::Term make_term(const Expr& t) {
  CanonicalForm::Term term;
  std::vector<Expr> coeff;
  std::vector<Expr> parts = t.is(NodeKind::Product) ? t.children() : std::vector<Expr>{t};
  for (const auto& f : parts) {
    if (variable_free(f)) {
      coeff.push_back(f);
    } else if (f.is(NodeKind::Unary)) {
      term.factors.push_back({f.op(), f.child(0), nullptr});
    } else {
      term.factors.push_back({UnaryOp::Identity, f, nullptr});
    }
  }
  term.coeff = Expr::product(std::move(coeff));
  return term;
}

Expr rebuild_factor(const CanonicalForm::Factor& f) {
  Expr arg = f.inner ? f.inner->reconstruct() : f.arg;
  return f.op == UnaryOp::Identity ? arg : Expr::unary(f.op, arg);
}

void deepen(CanonicalForm& form) {
  for (auto& t : form.terms) {
    for (auto& f : t.factors) {
      if (f.arg.is(NodeKind::Variable)) continue;
      // a lone identity factor decomposes to itself; recurse into its children
      if (f.op == UnaryOp::Identity && (f.arg.is(NodeKind::Power) || f.arg.is(NodeKind::Quotient))) continue;
      f.inner = std::make_shared<CanonicalForm>(to_canonical_deep(f.arg));
    }
  }
}

}  // namespace

CanonicalForm to_canonical(const Expr& e) {
  Expr c = canonicalize(e);
  CanonicalForm form;
  std::vector<Expr> constants;
  std::vector<Expr> summands = c.is(NodeKind::Sum) ? c.children() : std::vector<Expr>{c};
  for (const auto& s : summands) {
    if (variable_free(s)) {
      constants.push_back(s);
    } else {
      form.terms.push_back(make_term(s));
    }
  }
  form.c0 = Expr::sum(std::move(constants));
  return form;
}

CanonicalForm to_canonical_deep(const Expr& e) {
  CanonicalForm form = to_canonical(e);
  deepen(form);
  return form;
}

Expr CanonicalForm::reconstruct() const {
  std::vector<Expr> sum{c0};
  for (const auto& t : terms) {
    std::vector<Expr> prod{t.coeff};
    for (const auto& f : t.factors) prod.push_back(rebuild_factor(f));
    sum.push_back(Expr::product(std::move(prod)));
  }
  return Expr::sum(std::move(sum));
}

std::vector<Expr> subtree_list(const Expr& e) {
  if (e.is(NodeKind::Sum) || e.is(NodeKind::Product)) return e.children();
  return {e};
}

}  // namespace setgap
