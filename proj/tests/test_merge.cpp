#include <doctest.h>

#include <omp.h>

#include "setgap/equiv.hpp"
#include "setgap/merge.hpp"
#include "support.hpp"

using namespace setgap;

namespace {

bool pool_has(const Pool& p, const char* form) {
  Expr want = parse_skeleton(form).expr;
  for (const auto& m : p.members)
    if (equivalent(m.expr, want)) return true;
  return false;
}

PoolOptions attempts(long n) {
  PoolOptions o;
  o.max_attempts = n;
  o.patience = static_cast<int>(n);
  return o;
}

std::vector<std::string> strings(const Pool& p) {
  std::vector<std::string> out;
  for (const auto& m : p.members) out.push_back(m.str());
  return out;
}

}  // namespace

TEST_SUITE("merge") {
  TEST_CASE("compatibility") {
    auto e = [](const char* s) { return parse_skeleton(s).expr; };
    CHECK(compatible(e("sin(c1*x0)"), e("sin(c1*x1 + c2)")));
    CHECK(!compatible(e("sin(c1*x0)"), e("exp(c1*x1)")));
    CHECK(compatible(e("c1*x0 + c2"), e("c1*exp(x1) + c2")));
    CHECK(compatible(e("x0*sin(x0)"), e("x1*exp(x1)")));
    CHECK(!compatible(e("c1*x0 + c2"), e("x1*exp(x1)")));
  }

  TEST_CASE("sine example yields the three enumerated forms") {
    Skeleton a = parse_skeleton("c1*sin(c2*x0*x1 + c3)");
    Skeleton b = parse_skeleton("c1*sin(c2*x2 + c3)");
    Pool p = generate_pool(a, b, attempts(3000), 1);
    CHECK(pool_has(p, "c1*(c2 + sin(c3*x0*x1 + c4))*(c5 + sin(c6*x2 + c7))"));
    CHECK(pool_has(p, "c1*sin(c2*x0*x1 + c3*x2 + c4)"));
    CHECK(pool_has(p, "c1*sin(c2*x0*x1*x2 + c3)"));
    for (const auto& m : p.members) {
      CHECK(preserves_skeleton(m, a));
      CHECK(preserves_skeleton(m, b));
    }
  }

  TEST_CASE("sums merge term by term") {
    Pool p = generate_pool(parse_skeleton("c1*x0 + c2"), parse_skeleton("c1*x1 + c2"), attempts(500), 4);
    CHECK(pool_has(p, "c1*x0 + c2*x1 + c3"));
    CHECK(pool_has(p, "c1*x0*x1 + c2"));
  }

  TEST_CASE("shared variables are rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(merge_pair(parse_skeleton("c1*x0"), parse_skeleton("c1*x0 + c2"), rng), std::invalid_argument);
  }

  TEST_CASE("pool members are normalized and distinct") {
    Pool p = generate_pool(parse_skeleton("c1*exp(c2*x0) + c3"), parse_skeleton("c1*cos(c2*x1) + c3"),
                           attempts(1000), 9);
    std::set<std::string> seen;
    for (const auto& m : p.members) {
      CHECK(identical(normalize(m.expr), m.expr));
      CHECK(seen.insert(m.str()).second);
    }
    CHECK(p.attempts == 1000);
  }

  TEST_CASE("pool does not depend on the thread count") {
    Skeleton a = parse_skeleton("c1*sin(c2*x0 + c3) + c4");
    Skeleton b = parse_skeleton("c1*x1^2 + c2");
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    auto one = strings(generate_pool(a, b, attempts(800), 77));
    omp_set_num_threads(3);
    auto three = strings(generate_pool(a, b, attempts(800), 77));
    omp_set_num_threads(saved);
    CHECK(one == three);
  }

  TEST_CASE("patience and size cap stop the pool") {
    Skeleton a = parse_skeleton("c1*x0 + c2");
    Skeleton b = parse_skeleton("c1*x1 + c2");
    PoolOptions o;
    o.patience = 50;
    Pool p = generate_pool(a, b, o, 2);
    CHECK(p.attempts < 100000);
    o.max_size = 1;
    CHECK(generate_pool(a, b, o, 2).members.size() == 1);
  }

  TEST_CASE("random merges of benchmark skeletons preserve both inputs") {
    auto pool = testing::benchmark_univariate_skeletons();
    Rng pick(123);
    int violations = 0;
    for (int i = 0; i < 60; ++i) {
      Skeleton a = pool[pick() % pool.size()];
      Skeleton b = Skeleton::from(testing::rename_variables(pool[pick() % pool.size()].expr, 1));
      Rng rng(static_cast<std::uint64_t>(i));
      Skeleton m = Skeleton::from(normalize(merge_pair(a, b, rng).expr));
      bool ok = preserves_skeleton(m, a) && preserves_skeleton(m, b);
      if (!ok) MESSAGE(a.str() << " + " << b.str() << " -> " << m.str());
      violations += !ok;
    }
    CHECK(violations == 0);
  }
}
