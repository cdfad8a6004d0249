#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setgap/data.hpp"
#include "setgap/expr.hpp"

namespace setgap {

struct Interval {
  double lo;
  double hi;
};

struct Problem {
  std::string id;
  std::string formula;  // infix source of the ground truth
  Expr truth;
  std::vector<Interval> domain;  // one interval per variable
  std::size_t arity() const { return domain.size(); }
};

const std::vector<Problem>& benchmark_problems();
const Problem& find_problem(const std::string& id);  // throws std::invalid_argument

enum class Region { Interpolation, Extrapolation };

// Counter-based uniform draw in [0, 1): the value depends only on
// (seed, stream, row, column, attempt).
double counter_uniform(std::uint64_t seed, std::string_view stream, std::uint64_t row, std::uint64_t col,
                       std::uint64_t attempt);

// Flanks outside [lo, hi] used for extrapolation: [2lo, lo) when lo < 0 and
// (hi, 2hi] when hi > 0. Throws when both are empty.
std::vector<Interval> extrapolation_flanks(const Interval& d);

// Uniform samples over the domain (or its flanks), rows with an undefined
// response redrawn, plus Gaussian noise with standard deviation
// sigma * std(y).
Dataset sample_problem(const Problem& p, std::size_t n, double sigma, std::uint64_t seed,
                       Region region = Region::Interpolation);

// Same procedure for any expression over explicit intervals.
Dataset sample_expression(const Expr& f, const std::vector<Interval>& domain, std::size_t n, double sigma,
                          std::uint64_t seed, Region region = Region::Interpolation);

}  // namespace setgap
