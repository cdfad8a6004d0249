#include "setgap/provider.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "setgap/equiv.hpp"

namespace setgap {

FileProvider::FileProvider(std::map<int, std::vector<Skeleton>> candidates, std::string label)
    : candidates_(std::move(candidates)), label_(std::move(label)) {}

FileProvider FileProvider::parse(std::string_view text, const std::string& label) {
  std::map<int, std::vector<Skeleton>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int var = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.rfind("var", 0) == 0 && (line.size() == 3 || line[3] == ' ' || line[3] == '\t')) {
      std::string rest = line.substr(3);
      try {
        std::size_t used = 0;
        var = std::stoi(rest, &used);
        if (rest.find_first_not_of(" \t", used) != std::string::npos || var < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::runtime_error(fmt::format("{}:{}: expected 'var <index>'", label, lineno));
      }
      out[var];
      continue;
    }
    if (var < 0) throw std::runtime_error(fmt::format("{}:{}: skeleton before any 'var' line", label, lineno));
    Skeleton s;
    try {
      s = parse_skeleton(line);
    } catch (const ParseError& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", label, lineno, e.what()));
    }
    if (s.vars != VarSet{var})
      throw std::runtime_error(fmt::format("{}:{}: skeleton must use exactly x{}", label, lineno, var));
    out[var].push_back(std::move(s));
  }
  return FileProvider(std::move(out), label);
}

FileProvider FileProvider::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open provider file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::vector<Skeleton> FileProvider::propose(const Collection& c, int budget, Rng& rng) {
  if (c.varying.size() != 1) throw std::invalid_argument("provider needs a collection with one varying variable");
  if (budget < 1) throw std::invalid_argument("provider budget must be positive");
  auto it = candidates_.find(c.varying[0]);
  if (it == candidates_.end() || it->second.empty())
    throw std::runtime_error(fmt::format("{} has no candidates for x{}", label_, c.varying[0]));
  std::vector<Skeleton> pool = it->second;
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
  if (pool.size() > static_cast<std::size_t>(budget)) pool.resize(static_cast<std::size_t>(budget));
  return pool;
}

GrammarOptions GrammarOptions::parse_ops(const std::string& list) {
  GrammarOptions o;
  o.unary.clear();
  o.add = o.mul = o.div = o.pow = false;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "add") o.add = true;
    else if (tok == "mul") o.mul = true;
    else if (tok == "div") o.div = true;
    else if (tok == "pow") o.pow = true;
    else {
      UnaryOp u;
      if (!unary_from_name(tok, u)) throw std::invalid_argument("unknown grammar operator '" + tok + "'");
      o.unary.push_back(u);
    }
  }
  return o;
}

namespace {

struct Item {
  Expr e;
  int unary = 0;
  int depth = 0;  // unary nesting
};

}  // namespace

std::vector<Expr> enumerate_grammar(const GrammarOptions& opt, int var) {
  std::vector<std::vector<Item>> level(static_cast<std::size_t>(opt.max_ops) + 1);
  level[0].push_back({Expr::variable(var), 0, 0});
  std::size_t total = 1;
  auto add = [&](std::size_t k, Item it) {
    if (it.unary > opt.max_unary || it.depth > opt.max_unary_depth) return;
    if (++total > opt.max_candidates)
      throw std::runtime_error(fmt::format("grammar enumeration exceeds {} expressions", opt.max_candidates));
    level[k].push_back(std::move(it));
  };
  Expr c = Expr::placeholder(1);
  for (std::size_t k = 1; k <= static_cast<std::size_t>(opt.max_ops); ++k) {
    for (const auto& a : level[k - 1]) {
      for (UnaryOp u : opt.unary) add(k, {Expr::unary(u, a.e), a.unary + 1, a.depth + 1});
      if (opt.add) add(k, {a.e + c, a.unary, a.depth});
      if (opt.mul) add(k, {c * a.e, a.unary, a.depth});
      if (opt.div) add(k, {c / a.e, a.unary, a.depth});
      if (opt.pow) {
        add(k, {Expr::power(a.e, c), a.unary, a.depth});
        add(k, {Expr::power(a.e, Expr::constant(2)), a.unary, a.depth});
        add(k, {Expr::power(a.e, Expr::constant(3)), a.unary, a.depth});
      }
    }
    for (std::size_t i = 0; i <= k - 1; ++i) {
      std::size_t j = k - 1 - i;
      for (std::size_t ai = 0; ai < level[i].size(); ++ai) {
        for (std::size_t bi = 0; bi < level[j].size(); ++bi) {
          const Item& a = level[i][ai];
          const Item& b = level[j][bi];
          int u = a.unary + b.unary;
          int d = std::max(a.depth, b.depth);
          bool ordered = i < j || (i == j && ai <= bi);
          if (opt.add && ordered) add(k, {a.e + b.e, u, d});
          if (opt.mul && ordered) add(k, {a.e * b.e, u, d});
          if (opt.div) add(k, {a.e / b.e, u, d});
        }
      }
    }
  }
  std::vector<Expr> out;
  for (auto& lv : level)
    for (auto& it : lv) out.push_back(it.e);
  return out;
}

Skeleton grammar_skeleton(const Expr& g) {
  Expr wrapped = Expr::sum({Expr::product({Expr::placeholder(1000001), g}), Expr::placeholder(1000002)});
  Skeleton s = skeletonize(wrapped, variables(g));
  return Skeleton::from(normalize(s.expr));
}

std::vector<Skeleton> grammar_skeletons(const GrammarOptions& opt, int var) {
  std::vector<Skeleton> out;
  std::unordered_set<std::string> seen;
  for (const auto& g : enumerate_grammar(opt, var)) {
    Skeleton s = grammar_skeleton(g);
    if (s.vars.empty()) continue;
    if (seen.insert(s.str()).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<Skeleton> GrammarProvider::propose(const Collection& c, int budget, Rng& rng) {
  if (c.varying.size() != 1) throw std::invalid_argument("provider needs a collection with one varying variable");
  if (c.sets.empty()) throw std::invalid_argument("provider needs at least one input set");
  if (budget < 1) throw std::invalid_argument("provider budget must be positive");
  int var = c.varying[0];
  auto it = cache_.find(var);
  if (it == cache_.end()) it = cache_.emplace(var, grammar_skeletons(opt_, var)).first;
  const auto& all = it->second;
  const InputSet& set = c.sets[rng() % c.sets.size()];
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Rng fit_rng(rng());
    double score = fit_coefficients(all[i], set.X, set.y, Objective::MaxAbsCorrelation, opt_.quick_fit, fit_rng).objective;
    scored.push_back({score, i});
  }
  std::stable_sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    // scores are compared at 1e-9 resolution so near ties go to the simpler skeleton
    double qa = std::floor(a.first * 1e9), qb = std::floor(b.first * 1e9);
    if (qa != qb) return qa > qb;
    return all[a.second].placeholder_count < all[b.second].placeholder_count;
  });
  std::vector<Skeleton> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < static_cast<std::size_t>(budget); ++i)
    out.push_back(all[scored[i].second]);
  return out;
}

FileProvider truth_provider(const Expr& truth, int arity) {
  std::map<int, std::vector<Skeleton>> out;
  for (int v = 0; v < arity; ++v) {
    Skeleton t = skeletonize(truth, {v});
    std::vector<Skeleton> list{t};
    std::string x = "x" + std::to_string(v);
    for (const std::string& d : {"c1*" + x + " + c2", "c1*" + x + "^2 + c2", "c1*exp(c2*" + x + ") + c3"}) {
      Skeleton s = parse_skeleton(d);
      bool dup = false;
      for (const auto& e : list) dup = dup || equivalent(e.expr, s.expr);
      if (!dup) list.push_back(s);
    }
    out[v] = std::move(list);
  }
  return FileProvider(std::move(out), "truth");
}

}  // namespace setgap
