#include "setgap/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace setgap {

std::vector<double> Matrix::row(std::size_t r) const {
  std::vector<double> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
  return out;
}

Matrix Matrix::head(std::size_t n) const {
  n = std::min(n, rows_);
  Matrix m(n, cols_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r = 0; r < n; ++r) m(r, c) = (*this)(r, c);
  return m;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
  // two-pass for accuracy
  double ma = 0, mb = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    ma += a[i];
    mb += b[i];
    ++n;
  }
  if (n < 2) return std::nullopt;
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0) || !(sbb > 0) || !std::isfinite(saa) || !std::isfinite(sbb)) return std::nullopt;
  double r = sab / std::sqrt(saa * sbb);
  if (!std::isfinite(r)) return std::nullopt;
  return std::clamp(r, -1.0, 1.0);
}

double mse(std::span<const double> pred, std::span<const double> y, double penalty) {
  if (pred.size() != y.size()) throw std::invalid_argument("mse: length mismatch");
  if (y.empty()) throw std::invalid_argument("mse: empty input");
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double d = pred[i] - y[i];
    s += std::isnan(d) ? penalty : d * d;
  }
  return s / static_cast<double>(y.size());
}

std::size_t count_undefined(std::span<const double> v) {
  std::size_t n = 0;
  for (double x : v) n += std::isnan(x) ? 1 : 0;
  return n;
}

std::string csv_text(const Dataset& d) {
  std::string out;
  for (std::size_t c = 0; c < d.arity(); ++c) out += fmt::format("x{},", c);
  out += "y\n";
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.arity(); ++c) out += fmt::format("{:.17g},", d.X(r, c));
    out += fmt::format("{:.17g}\n", d.y[r]);
  }
  return out;
}

void write_csv(const std::string& path, const Dataset& d) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << csv_text(d);
  if (!f) throw std::runtime_error("write failed for " + path);
}

Dataset read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
  std::size_t cols = 1;
  for (char ch : line) cols += ch == ',' ? 1 : 0;
  if (cols < 2) throw std::runtime_error(path + ": need at least one input column and y");
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(fmt::format("{}:{}: bad number '{}'", path, lineno, cell));
      }
    }
    if (vals.size() != cols) throw std::runtime_error(fmt::format("{}:{}: expected {} columns", path, lineno, cols));
    rows.push_back(std::move(vals));
  }
  Dataset d;
  d.X = Matrix(rows.size(), cols - 1);
  d.y.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) d.X(r, c) = rows[r][c];
    d.y[r] = rows[r][cols - 1];
  }
  return d;
}

}  // namespace setgap
