#include "setgap/merge.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "setgap/canonical.hpp"
#include "setgap/equiv.hpp"

namespace setgap {

bool compatible(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Unary: return a.op() == b.op();
    case NodeKind::Sum:
    case NodeKind::Product:
    case NodeKind::Power:
      return true;
    default: return false;
  }
}

namespace {

class Merger {
 public:
  Merger(Rng& rng, int first_id) : rng_(rng), next_(first_id) {}

  Expr merge(const Expr& x, const Expr& y) {
    if (x.is(NodeKind::Sum) && y.is(NodeKind::Sum)) return merge_sums(x, y);
    if (x.is(NodeKind::Product) && y.is(NodeKind::Product)) return merge_products(x, y);
    if (x.is(NodeKind::Unary) && y.is(NodeKind::Unary) && x.op() == y.op())
      return Expr::unary(x.op(), merge(x.child(0), y.child(0)));
    if (x.is(NodeKind::Power) && y.is(NodeKind::Power)) {
      const Expr& kx = x.child(1);
      const Expr& ky = y.child(1);
      if (kx.is(NodeKind::Placeholder) && ky.is(NodeKind::Placeholder))
        return Expr::power(merge(x.child(0), y.child(0)), fresh());
      if (!has_placeholders(kx) && identical(kx, ky)) return Expr::power(merge(x.child(0), y.child(0)), kx);
    }
    if (x.is(NodeKind::Placeholder) && y.is(NodeKind::Placeholder)) return fresh();
    return Expr::product({x, y});
  }

 private:
  Expr fresh() { return Expr::placeholder(next_++); }

  void shuffle(std::vector<Expr>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_() % i]);
  }

  void order_short_long(std::vector<Expr>& s, std::vector<Expr>& l) {
    if (s.size() > l.size() || (s.size() == l.size() && coin(rng_))) std::swap(s, l);
  }

  std::vector<std::size_t> matches(const Expr& e, const std::vector<Expr>& pool) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (compatible(e, pool[j])) idx.push_back(j);
    return idx;
  }

  Expr merge_sums(const Expr& x, const Expr& y) {
    std::vector<Expr> a = subtree_list(x);
    std::vector<Expr> b = subtree_list(y);
    order_short_long(a, b);
    // the constant summand, when present, goes last so it absorbs leftovers
    std::vector<Expr> shorter, constants;
    for (const auto& t : a) (t.is(NodeKind::Placeholder) ? constants : shorter).push_back(t);
    shuffle(shorter);
    for (auto& c : constants) shorter.push_back(c);
    std::vector<Expr> longer = b;
    shuffle(longer);

    std::vector<Expr> out;
    for (std::size_t i = 0; i < shorter.size(); ++i) {
      const Expr& t = shorter[i];
      if (i + 1 == shorter.size()) {
        std::vector<Expr> rest{t.is(NodeKind::Placeholder) ? fresh() : t};
        for (auto& l : longer) rest.push_back(l);
        longer.clear();
        out.push_back(Expr::sum(std::move(rest)));
        break;
      }
      auto idx = matches(t, longer);
      std::size_t k = static_cast<std::size_t>(rng_() % (idx.size() + 1));
      if (k == 0) {
        out.push_back(t);
        continue;
      }
      shuffle_indices(idx);
      idx.resize(k);
      std::sort(idx.begin(), idx.end());
      std::vector<Expr> chosen;
      for (auto j : idx) chosen.push_back(longer[j]);
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) longer.erase(longer.begin() + static_cast<long>(*it));
      if (k == 1) {
        out.push_back(merge(t, chosen.front()));
      } else {
        out.push_back(Expr::product({t, Expr::sum(std::move(chosen))}));
      }
    }
    return Expr::sum(std::move(out));
  }

  void shuffle_indices(std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_() % i]);
  }

  Expr wrapped(const std::vector<Expr>& s, const std::vector<Expr>& l) {
    std::vector<Expr> f{fresh()};
    for (const auto& e : s) f.push_back(Expr::sum({fresh(), e}));
    for (const auto& e : l) f.push_back(Expr::sum({fresh(), e}));
    return Expr::product(std::move(f));
  }

  Expr plain(const std::vector<Expr>& s, const std::vector<Expr>& l) {
    std::vector<Expr> f{fresh()};
    f.insert(f.end(), s.begin(), s.end());
    f.insert(f.end(), l.begin(), l.end());
    return Expr::product(std::move(f));
  }

  Expr merge_products(const Expr& x, const Expr& y) {
    std::vector<Expr> a, b, numeric;
    for (const auto& f : x.children()) {
      if (f.is(NodeKind::Constant)) numeric.push_back(f);
      else if (!f.is(NodeKind::Placeholder)) a.push_back(f);
    }
    for (const auto& f : y.children()) {
      if (f.is(NodeKind::Constant)) numeric.push_back(f);
      else if (!f.is(NodeKind::Placeholder)) b.push_back(f);
    }
    order_short_long(a, b);
    shuffle(a);
    shuffle(b);

    Expr body;
    bool all_symbols = std::all_of(a.begin(), a.end(), [](const Expr& e) { return e.is(NodeKind::Variable); });
    if (all_symbols) {
      body = coin(rng_) ? wrapped(a, b) : plain(a, b);
    } else {
      std::vector<Expr> out;
      for (const auto& t : a) {
        auto idx = matches(t, b);
        if (idx.empty() || coin(rng_)) {
          out.push_back(t);
          continue;
        }
        std::size_t j = idx[rng_() % idx.size()];
        out.push_back(merge(t, b[j]));
        b.erase(b.begin() + static_cast<long>(j));
      }
      if (b.empty()) {
        body = plain(out, {});
      } else {
        body = coin(rng_) ? wrapped(out, b) : plain(out, b);
      }
    }
    numeric.push_back(body);
    return Expr::product(std::move(numeric));
  }

  Rng& rng_;
  int next_;
};

void require_disjoint(const Skeleton& a, const Skeleton& b) {
  for (int v : a.vars)
    if (b.vars.count(v))
      throw std::invalid_argument("cannot merge skeletons that share variable x" + std::to_string(v));
}

}  // namespace

Skeleton merge_pair(const Skeleton& a, const Skeleton& b, Rng& rng) {
  require_disjoint(a, b);
  int offset = max_placeholder_id(a.expr);
  Expr rhs = shift_placeholders(b.expr, offset);
  Merger m(rng, offset + max_placeholder_id(b.expr) + 1);
  return Skeleton::from(simplify_skeleton(m.merge(a.expr, rhs)));
}

Pool generate_pool(const Skeleton& a, const Skeleton& b, const PoolOptions& opt, std::uint64_t seed) {
  require_disjoint(a, b);
  if (opt.max_size < 1) throw std::invalid_argument("pool size cap must be positive");
  if (opt.patience < 1) throw std::invalid_argument("pool patience must be positive");
  constexpr long kBatch = 32;
  const std::uint64_t stream = hash_label("merge-attempt");
  Pool pool;
  std::unordered_set<std::string> seen;
  int since_new = 0;
  for (long start = 0;; start += kBatch) {
    std::vector<std::optional<Skeleton>> results(kBatch);
    std::vector<std::string> keys(kBatch);
    std::vector<std::string> errors(kBatch);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < kBatch; ++i) {
      try {
        Rng rng(derive_seed(seed, stream, static_cast<std::uint64_t>(start + i)));
        Skeleton s = Skeleton::from(normalize(merge_pair(a, b, rng).expr));
        keys[i] = to_infix(s.expr);
        results[i] = std::move(s);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (long i = 0; i < kBatch; ++i) {
      if (!errors[i].empty()) throw std::runtime_error("merge attempt failed: " + errors[i]);
      ++pool.attempts;
      if (seen.insert(keys[i]).second) {
        pool.members.push_back(std::move(*results[i]));
        since_new = 0;
      } else {
        ++since_new;
      }
      bool done = since_new >= opt.patience || static_cast<int>(pool.members.size()) >= opt.max_size ||
                  (opt.max_attempts >= 0 && pool.attempts >= opt.max_attempts);
      if (done) return pool;
    }
  }
}

}  // namespace setgap
