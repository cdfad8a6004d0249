#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "setgap/bench.hpp"
#include "setgap/data.hpp"
#include "support.hpp"

using namespace setgap;

TEST_SUITE("data") {
  TEST_CASE("pearson matches the textbook formula") {
    std::vector<double> a{1, 2, 3, 4}, b{2, 1, 4, 3};
    // cov = 0.75 (population), var = 1.25 each
    CHECK(*pearson(a, b) == doctest::Approx(0.6));
    std::vector<double> c{1, 2, 3, std::nan("")};
    CHECK(*pearson(c, a) == doctest::Approx(1.0));
    std::vector<double> flat{2, 2, 2, 2};
    CHECK(!pearson(flat, a).has_value());
  }

  TEST_CASE("mse charges undefined rows") {
    std::vector<double> p{1, 2, std::nan("")}, y{1, 3, 0};
    CHECK(mse(p, y, 1e12) == doctest::Approx((1 + 1e12) / 3));
    CHECK(count_undefined(p) == 1);
  }

  TEST_CASE("csv round trip is bit exact") {
    Problem p = find_problem("E3");
    Dataset d = sample_problem(p, 200, 0.05, 11);
    auto path = (std::filesystem::temp_directory_path() / "setgap_roundtrip.csv").string();
    write_csv(path, d);
    Dataset back = read_csv(path);
    std::remove(path.c_str());
    REQUIRE(back.rows() == d.rows());
    REQUIRE(back.arity() == d.arity());
    for (std::size_t r = 0; r < d.rows(); ++r) {
      CHECK(back.y[r] == d.y[r]);
      for (std::size_t c = 0; c < d.arity(); ++c) CHECK(back.X(r, c) == d.X(r, c));
    }
    CHECK(csv_text(back) == csv_text(d));
  }

  TEST_CASE("malformed csv is rejected") {
    auto path = (std::filesystem::temp_directory_path() / "setgap_bad.csv").string();
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs("x0,y\n1,2\n3\n", f);
      std::fclose(f);
    }
    CHECK_THROWS(read_csv(path));
    std::remove(path.c_str());
    CHECK_THROWS(read_csv("/nonexistent/file.csv"));
  }
}

TEST_SUITE("bench") {
  TEST_CASE("problem table") {
    CHECK(benchmark_problems().size() == 17);
    CHECK(find_problem("E10").arity() == 2);
    CHECK(find_problem("E2").arity() == 3);
    CHECK(find_problem("E5").arity() == 4);
    CHECK(find_problem("F2").arity() == 3);
    CHECK_THROWS_AS(find_problem("E99"), std::invalid_argument);
    const Problem& e13 = find_problem("E13");
    CHECK(e13.domain[0].lo == 0);
    CHECK(e13.domain[0].hi == 20);
    CHECK(evaluate(e13.truth, std::vector<double>{4, 3}) == doctest::Approx(2 * std::log(9.0)));
    CHECK(evaluate(find_problem("E3").truth, std::vector<double>{0, 0}) == doctest::Approx(0.65));
  }

  TEST_CASE("samples lie in the domain and are defined") {
    for (const char* id : {"E1", "E9", "E12", "E13"}) {
      const Problem& p = find_problem(id);
      Dataset d = sample_problem(p, 2000, 0.0, 3);
      CHECK(count_undefined(d.y) == 0);
      for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < d.arity(); ++c) {
          CHECK(d.X(r, c) >= p.domain[c].lo);
          CHECK(d.X(r, c) <= p.domain[c].hi);
        }
      for (std::size_t r = 0; r < d.rows(); ++r) CHECK(d.y[r] == doctest::Approx(evaluate(p.truth, d.X.row(r))));
    }
  }

  TEST_CASE("extrapolation samples lie in the flanks") {
    const Problem& p = find_problem("E8");
    Dataset d = sample_problem(p, 2000, 0.0, 3, Region::Extrapolation);
    int left = 0, right = 0;
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        double v = d.X(r, c);
        bool in_left = v >= -10 && v < -5, in_right = v > 5 && v <= 10;
        CHECK((in_left || in_right));
        left += in_left;
        right += in_right;
      }
    CHECK(left > 1500);
    CHECK(right > 1500);
    auto f = extrapolation_flanks({0, 20});
    REQUIRE(f.size() == 1);
    CHECK(f[0].lo == 20);
    CHECK(f[0].hi == 40);
    CHECK_THROWS_AS(extrapolation_flanks({0, 0}), std::invalid_argument);
  }

  TEST_CASE("sampling is reproducible") {
    const Problem& p = find_problem("E10");
    CHECK(csv_text(sample_problem(p, 300, 0.01, 5)) == csv_text(sample_problem(p, 300, 0.01, 5)));
    CHECK(csv_text(sample_problem(p, 300, 0.01, 5)) != csv_text(sample_problem(p, 300, 0.01, 6)));
    // the first rows do not depend on how many rows are drawn
    Dataset small = sample_problem(p, 10, 0.0, 5), big = sample_problem(p, 1000, 0.0, 5);
    for (std::size_t r = 0; r < 10; ++r) CHECK(small.X(r, 0) == big.X(r, 0));
    CHECK(counter_uniform(1, "x", 2, 3, 0) == counter_uniform(1, "x", 2, 3, 0));
    CHECK(counter_uniform(1, "x", 2, 3, 0) != counter_uniform(1, "x", 2, 3, 1));
  }

  TEST_CASE("noise has the requested scale") {
    const Problem& p = find_problem("E3");
    Dataset clean = sample_problem(p, 20000, 0.0, 8), noisy = sample_problem(p, 20000, 0.1, 8);
    double m = 0, s2 = 0, e2 = 0;
    for (double v : clean.y) m += v;
    m /= static_cast<double>(clean.rows());
    for (std::size_t r = 0; r < clean.rows(); ++r) {
      s2 += (clean.y[r] - m) * (clean.y[r] - m);
      e2 += std::pow(noisy.y[r] - clean.y[r], 2);
    }
    double ratio = std::sqrt(e2 / s2);
    CHECK(ratio == doctest::Approx(0.1).epsilon(0.03));
  }
}
