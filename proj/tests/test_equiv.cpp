#include <doctest.h>

#include "setgap/equiv.hpp"
#include "support.hpp"

using namespace setgap;

namespace {

Expr sk(const char* s) { return parse_skeleton(s).expr; }

// Instance text with its placeholders taken literally (numbers stay numbers).
Expr literal(const std::string& s) { return canonicalize(parse_infix(s)); }

}  // namespace

TEST_SUITE("equiv") {
  TEST_CASE("each rewrite rule maps its left side onto its right side") {
    REQUIRE(rewrite_rules().size() == 11);
    for (const auto& r : rewrite_rules()) {
      INFO("row " << r.row << ": " << r.lhs);
      if (r.reversed) {
        CHECK(to_infix(normalize(literal(r.rhs))) == to_infix(normalize(literal(r.lhs))));
      } else if (r.row == 11) {
        // c/(1 + c*x) and c/(x + c) are the same family; normalization keeps the latter
        CHECK(to_infix(normalize(literal(r.lhs))) == "c1/(x0 + c2)");
        CHECK(to_infix(normalize(sk(r.rhs.c_str()))) == "c1/(x0 + c2)");
      } else {
        CHECK(to_infix(normalize(literal(r.lhs))) == to_infix(renumber_placeholders(literal(r.rhs))));
      }
    }
  }

  TEST_CASE("trigonometric families") {
    CHECK(equivalent(sk("c1*cos(c2*x0 + c3)"), sk("c1*sin(c2*x0 + c3)")));
    CHECK(equivalent(sk("c1*sin(c2*x0) + c3*cos(c2*x0)"), sk("c1*sin(c2*x0 + c3)")));
    CHECK(!equivalent(sk("c1*sin(c2*x0) + c3*cos(c4*x0)"), sk("c1*sin(c2*x0 + c3)")));
    CHECK(!equivalent(sk("c1*cos(c2*x0)"), sk("c1*sin(c2*x0)")));
    CHECK(equivalent(sk("c1*sin(c2*(x0 + c3))"), sk("c1*sin(c2*x0 + c3)")));
  }

  TEST_CASE("logarithm and exponential families") {
    CHECK(equivalent(sk("c1*log(x0^c2)"), sk("c1*log(x0)")));
    CHECK(equivalent(sk("c1*log(x0^4) + c2"), sk("c1*log(abs(x0)) + c2")));
    CHECK(equivalent(sk("c1*log(x0^3)"), sk("c1*log(x0)")));
    CHECK(equivalent(sk("log(exp(c1*x0 + c2))"), sk("c1*x0 + c2")));
    CHECK(equivalent(sk("log(c1*exp(x0))"), sk("x0 + c1")));
    CHECK(!equivalent(sk("c1*log(x0)"), sk("c1*exp(x0)")));
  }

  TEST_CASE("hyperbolic families") {
    CHECK(equivalent(sk("c1*sinh(x0)"), literal("c1*(exp(x0) - exp(-x0))")));
    CHECK(equivalent(sk("c1*tanh(x0)"), literal("c1*(exp(c2*x0) - 1)/(exp(c2*x0) + 1)")));
  }

  TEST_CASE("normalize is idempotent") {
    for (const auto& s : testing::benchmark_univariate_skeletons()) {
      Expr n = normalize(s.expr);
      CHECK(identical(normalize(n), n));
    }
    for (const auto& r : rewrite_rules()) {
      Expr n = normalize(literal(r.lhs));
      CHECK(identical(normalize(n), n));
    }
  }

  TEST_CASE("core strips offsets and scales") {
    CHECK(to_infix(core(sk("c1*sin(c2*x0 + c3) + c4"))) == "sin(x0)");
    CHECK(to_infix(core(sk("c1*exp(c2*x0*x1)"))) == "exp(x0*x1)");
    CHECK(core_equivalent(sk("c1*cos(c2*x0)"), sk("c1*sin(c2*x0 + c3) + c4")));
    CHECK(!core_equivalent(sk("c1*exp(c2*x0)"), sk("c1*sin(c2*x0)")));
  }

  TEST_CASE("skeleton preservation") {
    Skeleton a = parse_skeleton("c1*sin(c2*x0*x1 + c3)");
    Skeleton b = parse_skeleton("c1*sin(c2*x2 + c3)");
    CHECK(preserves_skeleton(parse_skeleton("c1*sin(c2*x0*x1 + c3*x2 + c4)"), a));
    CHECK(preserves_skeleton(parse_skeleton("c1*sin(c2*x0*x1 + c3*x2 + c4)"), b));
    CHECK(preserves_skeleton(parse_skeleton("c1*(c2 + sin(c3*x0*x1 + c4))*(c5 + sin(c6*x2 + c7))"), a));
    CHECK(!preserves_skeleton(parse_skeleton("c1*exp(c2*x0*x1) + c3*sin(c4*x2)"), a));
    CHECK(!preserves_skeleton(parse_skeleton("c1*sin(c2*x0 + c3*x1 + c4*x2)"), a));
  }

  TEST_CASE("functional form match") {
    Expr truth = parse_infix("(1.5*exp(1.5*x0) + 5*cos(3*x1))/10");
    CHECK(functional_form_match(parse_infix("0.15*exp(1.5*x0) + 0.5*sin(3*x1 - 4.71) + 0.002"), truth));
    CHECK(!functional_form_match(parse_infix("0.15*exp(1.5*x0) + 0.5*x1^2"), truth));
    CHECK(functional_form_match(parse_infix("4*x0*log(abs(x1)) + 1e-7"), parse_infix("x0*log(x1^4)")));
    CHECK(functional_form_match(parse_infix("-x0*sin(-1/x1) + 1"), parse_infix("1 + x0*sin(1/x1)")));
    CHECK(!functional_form_match(parse_infix("x0*sin(x1) + 1"), parse_infix("1 + x0*sin(1/x1)")));
  }
}
