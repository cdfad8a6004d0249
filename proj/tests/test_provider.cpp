#include <doctest.h>

#include <set>

#include "setgap/equiv.hpp"
#include "setgap/pipeline.hpp"
#include "setgap/provider.hpp"
#include "support.hpp"

using namespace setgap;

namespace {

struct Grown {
  Expr e;
  int unary;
  int depth;
};

// Top-down enumeration by exact operator cost, written independently of the
// level-by-level enumerator.
std::vector<Grown> grow(const GrammarOptions& o, int cost) {
  std::vector<Grown> out;
  if (cost == 0) return {{Expr::variable(0), 0, 0}};
  Expr c = Expr::placeholder(1);
  for (const auto& a : grow(o, cost - 1)) {
    for (UnaryOp u : o.unary) out.push_back({Expr::unary(u, a.e), a.unary + 1, a.depth + 1});
    if (o.add) out.push_back({a.e + c, a.unary, a.depth});
    if (o.mul) out.push_back({c * a.e, a.unary, a.depth});
    if (o.div) out.push_back({c / a.e, a.unary, a.depth});
    if (o.pow)
      for (const Expr& k : {c, Expr::constant(2), Expr::constant(3)}) out.push_back({Expr::power(a.e, k), a.unary, a.depth});
  }
  for (int left = 0; left <= cost - 1; ++left) {
    for (const auto& a : grow(o, left))
      for (const auto& b : grow(o, cost - 1 - left)) {
        int u = a.unary + b.unary, d = std::max(a.depth, b.depth);
        if (o.add) out.push_back({a.e + b.e, u, d});
        if (o.mul) out.push_back({a.e * b.e, u, d});
        if (o.div) out.push_back({a.e / b.e, u, d});
      }
  }
  std::vector<Grown> kept;
  for (auto& g : out)
    if (g.unary <= o.max_unary && g.depth <= o.max_unary_depth) kept.push_back(g);
  return kept;
}

std::set<std::string> skeleton_set(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const auto& e : es) {
    Skeleton s = grammar_skeleton(e);
    if (!s.vars.empty()) out.insert(s.str());
  }
  return out;
}

Collection one_variable(const std::function<double(double)>& f, double lo, double hi) {
  Collection c;
  c.varying = {0};
  InputSet s{Matrix(400, 1), std::vector<double>(400), {std::nan("")}};
  Rng rng(1);
  for (std::size_t r = 0; r < 400; ++r) {
    s.X(r, 0) = uniform(rng, lo, hi);
    s.y[r] = f(s.X(r, 0));
  }
  c.sets.push_back(s);
  return c;
}

}  // namespace

TEST_SUITE("provider") {
  TEST_CASE("file format") {
    FileProvider p = FileProvider::parse("# list\nvar 0\nc1*sin(c2*x0) + c3\nc1*x0 + c2\n\nvar 1\nc1*exp(c2*x1)\n");
    REQUIRE(p.candidates().size() == 2);
    CHECK(p.candidates().at(0).size() == 2);
    CHECK(p.candidates().at(1).front().str() == "c1*exp(c2*x1)");
    CHECK_THROWS(FileProvider::parse("c1*x0\n"));
    CHECK_THROWS(FileProvider::parse("var x\nc1*x0\n"));
    CHECK_THROWS(FileProvider::parse("var 0\nc1*x1\n"));
    CHECK_THROWS(FileProvider::parse("var 0\nc1*x0*x1\n"));
    CHECK_THROWS(FileProvider::parse("var 0\nc1*(x0\n"));
    CHECK_THROWS(FileProvider::load("/nonexistent/provider.txt"));
  }

  TEST_CASE("file provider proposes within budget") {
    FileProvider p = FileProvider::parse("var 0\nc1*x0\nc1*x0^2\nc1*exp(x0)\nc1*sin(x0)\n");
    Collection c = one_variable([](double x) { return x; }, -1, 1);
    Rng rng(3);
    CHECK(p.propose(c, 2, rng).size() == 2);
    CHECK(p.propose(c, 10, rng).size() == 4);
    c.varying = {1};
    CHECK_THROWS(p.propose(c, 2, rng));
  }

  TEST_CASE("acceptance provider files parse") {
    for (const char* id : {"E3", "E8", "E10", "E11", "E12", "E13"}) {
      FileProvider p = FileProvider::load(std::string(SETGAP_TEST_DATA) + "/provider_" + id + ".txt");
      const Problem& prob = find_problem(id);
      for (int v = 0; v < static_cast<int>(prob.arity()); ++v) {
        const auto& list = p.candidates().at(v);
        CHECK(list.size() >= 2);
        Skeleton truth = skeletonize(prob.truth, {v});
        bool has_truth = false;
        for (const auto& s : list) has_truth = has_truth || core_equivalent(s.expr, truth.expr);
        CHECK_MESSAGE(has_truth, id << " x" << v);
      }
    }
  }

  TEST_CASE("grammar enumeration agrees with an independent enumeration") {
    GrammarOptions o;
    o.unary = {UnaryOp::Sin, UnaryOp::Exp};
    o.max_ops = 2;
    std::vector<Expr> oracle;
    for (int k = 0; k <= o.max_ops; ++k)
      for (const auto& g : grow(o, k)) oracle.push_back(g.e);
    CHECK(skeleton_set(enumerate_grammar(o, 0)) == skeleton_set(oracle));
    auto sks = grammar_skeletons(o, 0);
    std::set<std::string> names;
    for (const auto& s : sks) names.insert(s.str());
    CHECK(names.size() == sks.size());
    CHECK(names.count("c1*sin(c2*x0) + c3"));
    CHECK(names.count("c1*exp(c2*x0) + c3"));
    CHECK(names.count("c1*x0 + c2"));
  }

  TEST_CASE("grammar size cap") {
    GrammarOptions o;
    o.max_ops = 4;
    o.max_candidates = 100;
    CHECK_THROWS(enumerate_grammar(o, 0));
    CHECK_THROWS(GrammarOptions::parse_ops("add,frobnicate"));
    GrammarOptions p = GrammarOptions::parse_ops("mul,sin");
    CHECK(!p.add);
    CHECK(p.mul);
    CHECK(p.unary.size() == 1);
  }

  TEST_CASE("grammar provider ranks the generating form first") {
    GrammarOptions o = GrammarOptions::parse_ops("add,mul,sin,exp");
    o.max_ops = 2;
    GrammarProvider g(o);
    Collection c = one_variable([](double x) { return 2 * std::sin(1.5 * x) + 1; }, -3, 3);
    Rng rng(5);
    auto top = g.propose(c, 3, rng);
    REQUIRE(!top.empty());
    CHECK(core_equivalent(top.front().expr, parse_skeleton("c1*sin(c2*x0) + c3").expr));
  }

  TEST_CASE("truth provider lists the true skeleton first") {
    FileProvider p = truth_provider(find_problem("E10").truth, 2);
    CHECK(p.candidates().at(0).front().str() == "sin(c1*x0)");
    CHECK(p.candidates().at(1).front().str() == "sin(c1*exp(x1))");
    CHECK(p.candidates().at(1).size() == 4);
  }
}
