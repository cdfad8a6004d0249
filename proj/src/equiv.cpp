#include "setgap/equiv.hpp"

#include <map>
#include <optional>

namespace setgap {

namespace {

class Normalizer {
 public:
  explicit Normalizer(const Expr& e) : next_(max_placeholder_id(e) + 1) { count(e); }

  Expr run(const Expr& e) {
    if (e.children().empty()) return e;
    std::vector<Expr> kids;
    for (const auto& c : e.children()) kids.push_back(run(c));
    Expr r = rebuild(e, std::move(kids));
    switch (r.kind()) {
      case NodeKind::Unary: return unary_rules(r);
      case NodeKind::Sum: return sum_rules(r);
      case NodeKind::Product: return product_rules(r);
      default: return r;
    }
  }

 private:
  void count(const Expr& e) {
    if (e.is(NodeKind::Placeholder)) ++uses_[e.id()];
    for (const auto& c : e.children()) count(c);
  }

  int uses(const Expr& p) const {
    auto it = uses_.find(p.id());
    return it == uses_.end() ? 0 : it->second;
  }

  bool free(const Expr& e) const { return e.is(NodeKind::Placeholder) && uses(e) <= 1; }

  Expr fresh(int count = 1) {
    uses_[next_] = count;
    return Expr::placeholder(next_++);
  }

  static Expr rebuild(const Expr& e, std::vector<Expr> kids) {
    switch (e.kind()) {
      case NodeKind::Unary: return Expr::unary(e.op(), kids[0]);
      case NodeKind::Power: return Expr::power(kids[0], kids[1]);
      case NodeKind::Quotient: return Expr::quotient(kids[0], kids[1]);
      case NodeKind::Sum: return Expr::sum(std::move(kids));
      default: return Expr::product(std::move(kids));
    }
  }

  int free_factor(const Expr& product) const {
    const auto& f = product.children();
    for (std::size_t i = 0; i < f.size(); ++i)
      if (free(f[i])) return static_cast<int>(i);
    return -1;
  }

  Expr unary_rules(const Expr& u) {
    const Expr& a = u.child(0);
    // cos(F + c) -> sin(F + c')
    if (u.op() == UnaryOp::Cos && a.is(NodeKind::Sum)) {
      std::vector<Expr> terms = a.children();
      for (auto& t : terms) {
        if (free(t)) {
          t = fresh();
          return Expr::unary(UnaryOp::Sin, Expr::sum(std::move(terms)));
        }
      }
    }
    if (u.op() == UnaryOp::Log) {
      // log(exp(X)) -> X
      if (a.is(NodeKind::Unary) && a.op() == UnaryOp::Exp) return a.child(0);
      // log(c G) -> log(G) + c'; with G = exp(F) the next pass gives F + c'
      if (a.is(NodeKind::Product)) {
        int k = free_factor(a);
        if (k >= 0) {
          std::vector<Expr> rest = a.children();
          rest.erase(rest.begin() + k);
          return Expr::sum({Expr::unary(UnaryOp::Log, Expr::product(std::move(rest))), fresh()});
        }
      }
    }
    return u;
  }

  // c*sin(A) or c*cos(A) with a free scale c
  struct Harmonic {
    std::size_t term;
    Expr key;
  };

  std::optional<Harmonic> harmonic(const Expr& t, std::size_t i) const {
    if (!t.is(NodeKind::Product) || t.children().size() != 2) return std::nullopt;
    int k = free_factor(t);
    if (k < 0) return std::nullopt;
    const Expr& fn = t.child(1 - k);
    if (!fn.is(NodeKind::Unary) || (fn.op() != UnaryOp::Sin && fn.op() != UnaryOp::Cos)) return std::nullopt;
    const Expr& arg = fn.child(0);
    if (!arg.is(NodeKind::Sum)) return Harmonic{i, arg};
    std::vector<Expr> core;
    for (const auto& s : arg.children())
      if (!free(s)) core.push_back(s);
    return Harmonic{i, Expr::sum(std::move(core))};
  }

  Expr sum_rules(const Expr& s) {
    std::vector<Expr> terms = s.children();

    // c sin f + c sin g with a tied scale -> c' sin(c''(f+g)) cos(c''(f-g))
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        auto tied_sin = [&](const Expr& t, int& id) -> const Expr* {
          if (!t.is(NodeKind::Product) || t.children().size() != 2) return nullptr;
          for (int k = 0; k < 2; ++k) {
            const Expr& p = t.child(k);
            const Expr& fn = t.child(1 - k);
            if (p.is(NodeKind::Placeholder) && uses(p) == 2 && fn.is(NodeKind::Unary) && fn.op() == UnaryOp::Sin) {
              id = p.id();
              return &fn.child(0);
            }
          }
          return nullptr;
        };
        int a_id = 0, b_id = 0;
        const Expr* f = tied_sin(terms[i], a_id);
        const Expr* g = tied_sin(terms[j], b_id);
        if (f && g && a_id == b_id) {
          Expr half = fresh(2);
          Expr sum_fg = Expr::product({half, Expr::sum({*f, *g})});
          Expr diff_fg = Expr::product({half, Expr::sum({*f, Expr::product({Expr::constant(-1.0), *g})})});
          Expr merged = Expr::product(
              {fresh(), Expr::unary(UnaryOp::Sin, sum_fg), Expr::unary(UnaryOp::Cos, diff_fg)});
          std::vector<Expr> out;
          for (std::size_t k = 0; k < terms.size(); ++k)
            if (k != i && k != j) out.push_back(terms[k]);
          out.push_back(merged);
          return Expr::sum(std::move(out));
        }
      }
    }

    // harmonic grouping: sin/cos terms sharing a frequency collapse to one sine
    std::vector<Harmonic> hs;
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (auto h = harmonic(terms[i], i)) hs.push_back(*h);
    std::vector<bool> used(hs.size(), false);
    std::vector<bool> drop(terms.size(), false);
    std::vector<Expr> added;
    for (std::size_t a = 0; a < hs.size(); ++a) {
      if (used[a]) continue;
      std::vector<std::size_t> group{a};
      for (std::size_t b = a + 1; b < hs.size(); ++b)
        if (!used[b] && identical(hs[a].key, hs[b].key)) group.push_back(b);
      if (group.size() < 2) continue;
      for (auto g : group) {
        used[g] = true;
        drop[hs[g].term] = true;
      }
      added.push_back(Expr::product({fresh(), Expr::unary(UnaryOp::Sin, Expr::sum({hs[a].key, fresh()}))}));
    }
    if (added.empty()) return s;
    std::vector<Expr> out;
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (!drop[i]) out.push_back(terms[i]);
    for (auto& e : added) out.push_back(e);
    return Expr::sum(std::move(out));
  }

  bool scaled(const Expr& t) const { return free(t) || (t.is(NodeKind::Product) && free_factor(t) >= 0); }

  Expr product_rules(const Expr& p) {
    if (free_factor(p) < 0) return p;
    std::vector<Expr> f = p.children();
    bool changed = false;
    for (auto& x : f) {
      if (x.is(NodeKind::Unary) && x.op() == UnaryOp::Sinh) {
        // sinh F -> exp F - exp(-F), the 1/2 goes into the scale
        const Expr& a = x.child(0);
        x = Expr::sum({Expr::unary(UnaryOp::Exp, a),
                       Expr::product({Expr::constant(-1.0),
                                      Expr::unary(UnaryOp::Exp, Expr::product({Expr::constant(-1.0), a}))})});
        changed = true;
      } else if (x.is(NodeKind::Unary) && x.op() == UnaryOp::Tanh) {
        Expr q = fresh(2);
        Expr e = Expr::unary(UnaryOp::Exp, Expr::product({q, x.child(0)}));
        x = Expr::product({Expr::sum({e, Expr::constant(-1.0)}),
                           Expr::power(Expr::sum({e, Expr::constant(1.0)}), Expr::constant(-1.0))});
        changed = true;
      } else if (x.is(NodeKind::Unary) && x.op() == UnaryOp::Log && x.child(0).is(NodeKind::Power)) {
        const Expr& base = x.child(0).child(0);
        const Expr& k = x.child(0).child(1);
        bool even = k.is_integer_constant() && static_cast<long long>(k.value()) % 2 == 0;
        if (k.is_integer_constant() || free(k)) {
          x = Expr::unary(UnaryOp::Log, even ? Expr::unary(UnaryOp::Abs, base) : base);
          changed = true;
        }
      } else if (x.is(NodeKind::Power) && x.child(1).is_integer_constant() && x.child(1).value() < 0 &&
                 x.child(0).is(NodeKind::Sum)) {
        // c/(c' + c''F) -> c/(c' + F)
        std::vector<Expr> terms = x.child(0).children();
        bool all_scaled = true;
        int target = -1;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          all_scaled = all_scaled && scaled(terms[i]);
          if (target < 0 && terms[i].is(NodeKind::Product) && free_factor(terms[i]) >= 0) target = static_cast<int>(i);
        }
        if (all_scaled && target >= 0 && terms.size() >= 2) {
          std::vector<Expr> g = terms[target].children();
          g.erase(g.begin() + free_factor(terms[target]));
          terms[target] = Expr::product(std::move(g));
          x = Expr::power(Expr::sum(std::move(terms)), x.child(1));
          changed = true;
        }
      }
    }
    return changed ? Expr::product(std::move(f)) : p;
  }

  std::map<int, int> uses_;
  int next_;
};

std::optional<Expr> strip(const Expr& e) {
  if (!has_variables(e)) return std::nullopt;
  switch (e.kind()) {
    case NodeKind::Unary: {
      UnaryOp op = e.op() == UnaryOp::Cos ? UnaryOp::Sin : e.op();
      return Expr::unary(op, *strip(e.child(0)));
    }
    case NodeKind::Power: {
      const Expr& k = e.child(1);
      if (!has_variables(k)) return Expr::power(*strip(e.child(0)), k);
      auto b = strip(e.child(0));
      return Expr::power(b ? *b : Expr::placeholder(1), *strip(k));
    }
    case NodeKind::Sum:
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const auto& c : e.children())
        if (auto s = strip(c)) kids.push_back(*s);
      return e.is(NodeKind::Sum) ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
    }
    default: return e;
  }
}

Expr affine_closure(const Skeleton& s) {
  int top = s.placeholder_count;
  return simplify_skeleton(Expr::sum({Expr::product({Expr::placeholder(top + 1), s.expr}), Expr::placeholder(top + 2)}));
}

}  // namespace

Expr normalize(const Expr& skeleton) {
  Expr cur = simplify_skeleton(skeleton);
  for (int pass = 0; pass < 10; ++pass) {
    Expr next = simplify_skeleton(Normalizer(cur).run(cur));
    if (identical(next, cur)) return next;
    cur = next;
  }
  return cur;
}

bool equivalent(const Expr& a, const Expr& b) { return identical(normalize(a), normalize(b)); }

Expr core(const Expr& skeleton) {
  auto s = strip(normalize(skeleton));
  return s ? canonicalize(*s) : Expr::constant(0.0);
}

bool core_equivalent(const Expr& a, const Expr& b) { return identical(core(a), core(b)); }

bool preserves_skeleton(const Skeleton& merged, const Skeleton& input) {
  return core_equivalent(affine_closure(skeletonize(merged.expr, input.vars)), affine_closure(input));
}

bool functional_form_match(const Expr& learned, const Expr& truth) {
  return core_equivalent(affine_closure(skeletonize(learned)), affine_closure(skeletonize(truth)));
}

const std::vector<RewriteRule>& rewrite_rules() {
  static const std::vector<RewriteRule> rules = {
      {1, "cosine with phase to sine", "c1*cos(c2*x0 + c3)", "c1*sin(c2*x0 + c4)", false, -3, 3},
      {2, "sine plus cosine, shared frequency", "c1*sin(c2*x0) + c3*cos(c2*x0)", "c5*sin(c2*x0 + c6)", false, -3, 3},
      {3, "phased cosine plus phased sine", "c1*cos(c2*x0 + c3) + c4*sin(c2*x0 + c5)", "c6*sin(c2*x0 + c7)", false,
       -3, 3},
      {4, "sum of sines, shared scale", "c1*sin(x0) + c1*sin(x0^2)", "c2*sin(c3*(x0 + x0^2))*cos(c3*(x0 - x0^2))",
       false, 0.5, 3},
      {5, "hyperbolic sine", "c1*sinh(x0)", "c2*(exp(x0) - exp(-x0))", false, -3, 3},
      {6, "hyperbolic tangent", "c1*tanh(x0)", "c1*(exp(c2*x0) - 1)/(exp(c2*x0) + 1)", false, -3, 3},
      {7, "log of a power", "c1*log(x0^c2)", "c3*log(x0)", false, 0.5, 3},
      {8, "log of exp", "log(exp(c1*x0 + c2))", "c1*x0 + c2", false, -3, 3},
      {9, "log of scaled exp", "log(c1*exp(x0))", "c2 + x0", false, -3, 3},
      {10, "scale inside the argument", "c1*sin(c2*x0 + c3)", "c1*sin(c2*(x0 + c4))", true, -3, 3},
      {11, "reciprocal affine", "c1/(c2 + c3*x0)", "c4/(1 + c5*x0)", false, 0.5, 3},
  };
  return rules;
}

}  // namespace setgap
