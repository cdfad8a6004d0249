#include "setgap/skeleton.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

namespace setgap {

namespace {

bool touches(const Expr& e, const VarSet& keep) {
  if (e.is(NodeKind::Variable)) return keep.count(e.index()) > 0;
  for (const auto& c : e.children())
    if (touches(c, keep)) return true;
  return false;
}

bool structural_exponent(const Expr& e) {
  return e.is_integer_constant() && std::fabs(e.value()) <= 5.0;
}

Expr collapse(const Expr& e, const VarSet& keep, int& counter, bool exponent) {
  if (!touches(e, keep)) {
    if (exponent && structural_exponent(e)) return e;
    if (e.is(NodeKind::Placeholder)) return e;  // keeps shared placeholders shared
    return Expr::placeholder(++counter);
  }
  switch (e.kind()) {
    case NodeKind::Unary: return Expr::unary(e.op(), collapse(e.child(0), keep, counter, false));
    case NodeKind::Power:
      return Expr::power(collapse(e.child(0), keep, counter, false), collapse(e.child(1), keep, counter, true));
    case NodeKind::Quotient:
      return Expr::quotient(collapse(e.child(0), keep, counter, false), collapse(e.child(1), keep, counter, false));
    case NodeKind::Sum:
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const auto& c : e.children()) kids.push_back(collapse(c, keep, counter, false));
      return e.is(NodeKind::Sum) ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
    }
    default: return e;
  }
}

class Simplifier {
 public:
  explicit Simplifier(const Expr& e) : next_(max_placeholder_id(e) + 1) { count(e); }

  Expr run(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant:
      case NodeKind::Placeholder:
      case NodeKind::Variable:
        return e;
      default: break;
    }
    std::vector<Expr> kids;
    for (const auto& c : e.children()) kids.push_back(run(c));
    Expr r = rebuild(e, kids);
    if (!has_variables(r) && has_placeholders(r) && all_free(r)) return fresh();
    if (r.is(NodeKind::Sum)) {
      r = merge_free(r, true);
      if (r.is(NodeKind::Sum)) return merge_like_terms(r);
    }
    if (r.is(NodeKind::Product)) {
      r = merge_free(r, false);
      if (r.is(NodeKind::Product)) return distribute(r);
    }
    return r;
  }

 private:
  void count(const Expr& e) {
    if (e.is(NodeKind::Placeholder)) ++uses_[e.id()];
    for (const auto& c : e.children()) count(c);
  }

  bool free(const Expr& e) const {
    if (!e.is(NodeKind::Placeholder)) return false;
    auto it = uses_.find(e.id());
    return it == uses_.end() || it->second <= 1;
  }

  bool all_free(const Expr& e) const {
    if (e.is(NodeKind::Placeholder)) return free(e);
    for (const auto& c : e.children())
      if (!all_free(c)) return false;
    return true;
  }

  Expr fresh() {
    uses_[next_] = 1;
    return Expr::placeholder(next_++);
  }

  static Expr rebuild(const Expr& e, std::vector<Expr>& kids) {
    switch (e.kind()) {
      case NodeKind::Unary: return Expr::unary(e.op(), kids[0]);
      case NodeKind::Power: return Expr::power(kids[0], kids[1]);
      case NodeKind::Quotient: return Expr::quotient(kids[0], kids[1]);
      case NodeKind::Sum: return Expr::sum(kids);
      default: return Expr::product(kids);
    }
  }

  Expr merge_free(const Expr& e, bool is_sum) {
    std::vector<Expr> kept;
    int n_free = 0;
    for (const auto& c : e.children()) {
      if (free(c)) {
        ++n_free;
      } else {
        kept.push_back(c);
      }
    }
    if (n_free < 2) return e;
    kept.push_back(fresh());
    return is_sum ? Expr::sum(std::move(kept)) : Expr::product(std::move(kept));
  }

  // Summands that differ only in their free scale, c_i*T + c_j*T or T + c*T,
  // collapse to a single c*T.
  Expr merge_like_terms(const Expr& sum) {
    struct Entry {
      Expr rest;
      bool scaled;
    };
    std::vector<Entry> entries;
    for (const auto& t : sum.children()) {
      int k = scale_of(t);
      if (k < 0 || t.is(NodeKind::Placeholder)) {
        entries.push_back({t, false});
      } else {
        std::vector<Expr> g = t.children();
        g.erase(g.begin() + k);
        entries.push_back({Expr::product(std::move(g)), true});
      }
    }
    std::vector<bool> used(entries.size(), false);
    std::vector<Expr> terms;
    bool changed = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (used[i]) continue;
      std::size_t count = 1;
      bool scaled = entries[i].scaled;
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        if (!used[j] && has_variables(entries[i].rest) && identical(entries[i].rest, entries[j].rest)) {
          used[j] = true;
          ++count;
          scaled = scaled || entries[j].scaled;
        }
      }
      if (count > 1 && scaled) {
        terms.push_back(Expr::product({fresh(), entries[i].rest}));
        changed = true;
      } else {
        for (std::size_t j = i; j < entries.size(); ++j)
          if (j == i || (used[j] && identical(entries[i].rest, entries[j].rest) && count > 1))
            terms.push_back(sum.children()[j]);
      }
    }
    return changed ? Expr::sum(std::move(terms)) : sum;
  }

  // scale index of a term, or -1 when the term carries no free scale
  int scale_of(const Expr& t) const {
    if (free(t)) return 0;
    if (t.is(NodeKind::Product)) {
      const auto& f = t.children();
      for (std::size_t i = 0; i < f.size(); ++i)
        if (free(f[i])) return static_cast<int>(i);
    }
    return -1;
  }

  Expr distribute(const Expr& p) {
    const auto& f = p.children();
    if (f.size() != 2) return p;
    int sum_at = -1;
    for (int i = 0; i < 2; ++i)
      if (f[i].is(NodeKind::Sum) && free(f[1 - i])) sum_at = i;
    if (sum_at < 0) return p;
    const Expr& s = f[sum_at];
    int unscaled = 0;
    for (const auto& t : s.children())
      if (scale_of(t) < 0) ++unscaled;
    if (unscaled > 1) return p;
    std::vector<Expr> terms;
    for (const auto& t : s.children()) {
      int k = scale_of(t);
      if (k < 0) {
        terms.push_back(Expr::product({fresh(), t}));
      } else if (t.is(NodeKind::Placeholder)) {
        terms.push_back(fresh());
      } else {
        std::vector<Expr> g = t.children();
        g[k] = fresh();
        terms.push_back(Expr::product(std::move(g)));
      }
    }
    return Expr::sum(std::move(terms));
  }

  std::map<int, int> uses_;
  int next_;
};

}  // namespace

Skeleton Skeleton::from(const Expr& e) {
  Skeleton s;
  s.expr = canonicalize(e);
  s.placeholder_count = max_placeholder_id(s.expr);
  s.vars = variables(s.expr);
  return s;
}

Expr simplify_skeleton(const Expr& e) {
  Expr cur = canonicalize(e);
  for (int i = 0; i < 64; ++i) {
    Expr next = canonicalize(Simplifier(cur).run(cur));
    if (identical(next, cur)) return next;
    cur = next;
  }
  return cur;
}

Skeleton skeletonize(const Expr& e, const VarSet& keep) {
  Expr c = canonicalize(e);
  int counter = max_placeholder_id(c);
  Expr collapsed = collapse(c, keep, counter, false);
  return Skeleton::from(simplify_skeleton(collapsed));
}

Skeleton skeletonize(const Expr& e) { return skeletonize(e, variables(e)); }

Expr set_constants(const Skeleton& s, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(s.placeholder_count))
    throw std::invalid_argument(
        fmt::format("skeleton has {} placeholders but {} values were given", s.placeholder_count, values.size()));
  return canonicalize(substitute_placeholders(s.expr, values));
}

Skeleton parse_skeleton(std::string_view text, int arity) {
  Expr e = parse_infix(text, arity);
  return skeletonize(e, variables(e));
}

}  // namespace setgap
