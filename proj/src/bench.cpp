#include "setgap/bench.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "setgap/rng.hpp"

namespace setgap {

namespace {

Problem make(std::string id, std::string formula, std::vector<Interval> domain) {
  Expr truth = parse_infix(formula, static_cast<int>(domain.size()));
  return Problem{std::move(id), std::move(formula), truth, std::move(domain)};
}

std::vector<Interval> box(std::size_t n, double lo, double hi) { return std::vector<Interval>(n, Interval{lo, hi}); }

constexpr std::uint64_t kMaxAttempts = 10000;

}  // namespace

const std::vector<Problem>& benchmark_problems() {
  static const std::vector<Problem> problems = {
      make("E1", "(3.0375*x0*x1 + 5.5*sin(9/4*(x0 - 2/3)*(x1 - 2/3)))/5", box(2, -5, 5)),
      make("E2", "5.5 + (1 - x0/4)^2 + sqrt(x1 + 10)*sin(x2/5)", box(3, -10, 10)),
      make("E3", "(1.5*exp(1.5*x0) + 5*cos(3*x1))/10", box(2, -5, 5)),
      make("E4", "((1 - x0)^2 + (1 - x2)^2 + 100*(x1 - x0^2)^2 + 100*(x3 - x2^2)^2)/10000", box(4, -5, 5)),
      make("E5", "sin(x0 + x1*x2) + exp(1.2*x3)", {{-10, 10}, {-5, 5}, {-5, 5}, {-3, 3}}),
      make("E6", "tanh(x0/2) + abs(x1)*cos(x2^2/5)", box(3, -10, 10)),
      make("E7", "(1 - x1^2)/(sin(2*pi*x0) + 1.5)", box(2, -5, 5)),
      make("E8", "x0^4/(x0^4 + 1) + x1^4/(x1^4 + 1)", box(2, -5, 5)),
      make("E9", "log(2*x1 + 1) - log(4*x0^2 + 1)", box(2, 0, 5)),
      make("E10", "sin(x0*exp(x1))", {{-2, 2}, {-4, 4}}),
      make("E11", "x0*log(x1^4)", box(2, -5, 5)),
      make("E12", "1 + x0*sin(1/x1)", box(2, -10, 10)),
      make("E13", "sqrt(x0)*log(x1^2)", {{0, 20}, {-5, 5}}),
      make("F1", "0.4*x0*x1 - 1.5*x0 + 2.5*x1 + 1", box(2, -5, 5)),
      make("F2", "0.4*x0*x1 - 1.5*x0 + 2.5*x1 + 1 + log(30*x2^2)", box(3, -5, 5)),
      make("F3", "(0.4*x0*x1 - 1.5*x0 + 2.5*x1 + 1)/(0.2*(x0^2 + x1^2) + 1)", box(2, -20, 20)),
      make("F4", "(0.4*x0*x1 - 1.5*x0 + 2.5*x1 + 1 + 5.5*sin(x0 + x1))/(0.2*(x0^2 + x1^2) + 1)", box(2, -20, 20)),
  };
  return problems;
}

const Problem& find_problem(const std::string& id) {
  for (const auto& p : benchmark_problems())
    if (p.id == id) return p;
  throw std::invalid_argument("unknown benchmark problem '" + id + "'");
}

double counter_uniform(std::uint64_t seed, std::string_view stream, std::uint64_t row, std::uint64_t col,
                       std::uint64_t attempt) {
  std::uint64_t h = splitmix64(seed ^ hash_label(stream));
  h = splitmix64(h + row);
  h = splitmix64(h + col);
  h = splitmix64(h + attempt);
  return to_unit(h);
}

std::vector<Interval> extrapolation_flanks(const Interval& d) {
  std::vector<Interval> out;
  if (d.lo < 0) out.push_back({2 * d.lo, d.lo});
  if (d.hi > 0) out.push_back({d.hi, 2 * d.hi});
  if (out.empty()) throw std::invalid_argument(fmt::format("no extrapolation range around [{}, {}]", d.lo, d.hi));
  return out;
}

Dataset sample_expression(const Expr& f, const std::vector<Interval>& domain, std::size_t n, double sigma,
                          std::uint64_t seed, Region region) {
  if (domain.empty()) throw std::invalid_argument("domain needs at least one interval");
  for (const auto& d : domain)
    if (!(d.lo <= d.hi)) throw std::invalid_argument(fmt::format("bad interval [{}, {}]", d.lo, d.hi));
  if (sigma < 0) throw std::invalid_argument("noise level must be non-negative");
  if (!variables(f).empty() && *variables(f).rbegin() >= static_cast<int>(domain.size()))
    throw std::invalid_argument("expression uses more variables than the domain has");

  std::vector<std::vector<Interval>> ranges;
  for (const auto& d : domain) ranges.push_back(region == Region::Interpolation ? std::vector<Interval>{d}
                                                                                 : extrapolation_flanks(d));
  const std::size_t t = domain.size();
  Dataset out;
  out.X = Matrix(n, t);
  out.y.resize(n);
  std::vector<double> x(t);
  const char* stream = region == Region::Interpolation ? "inputs" : "inputs-extrapolation";
  for (std::size_t r = 0; r < n; ++r) {
    double y = std::numeric_limits<double>::quiet_NaN();
    for (std::uint64_t attempt = 0; attempt < kMaxAttempts && std::isnan(y); ++attempt) {
      for (std::size_t c = 0; c < t; ++c) {
        const auto& rs = ranges[c];
        double u = counter_uniform(seed, stream, r, c, attempt);
        // pick a flank proportional to its length, then a point inside it
        double total = 0;
        for (const auto& iv : rs) total += iv.hi - iv.lo;
        double pos = u * total;
        const Interval* pick = &rs.back();
        for (const auto& iv : rs) {
          if (pos < iv.hi - iv.lo) {
            pick = &iv;
            break;
          }
          pos -= iv.hi - iv.lo;
        }
        x[c] = std::min(pick->lo + pos, pick->hi);
        if (region == Region::Extrapolation && pick->lo > 0) x[c] = pick->hi - pos;  // open at hi of the domain
      }
      y = evaluate(f, x);
    }
    if (std::isnan(y)) throw std::runtime_error(fmt::format("could not find a defined sample for row {}", r));
    for (std::size_t c = 0; c < t; ++c) out.X(r, c) = x[c];
    out.y[r] = y;
  }
  if (sigma > 0 && n > 1) {
    double mean = 0;
    for (double v : out.y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0;
    for (double v : out.y) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      double u1 = counter_uniform(seed, "noise", r, 0, 0);
      double u2 = counter_uniform(seed, "noise", r, 1, 0);
      if (u1 <= 0.0) u1 = 0x1.0p-53;
      double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      out.y[r] += sigma * sd * z;
    }
  }
  return out;
}

Dataset sample_problem(const Problem& p, std::size_t n, double sigma, std::uint64_t seed, Region region) {
  return sample_expression(p.truth, p.domain, n, sigma, seed, region);
}

}  // namespace setgap
