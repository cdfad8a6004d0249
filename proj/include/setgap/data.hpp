#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace setgap {

// Column-major dense matrix; columns are variables, rows are samples.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  const double* col(std::size_t c) const { return data_.data() + c * rows_; }
  double* col(std::size_t c) { return data_.data() + c * rows_; }
  std::vector<double> row(std::size_t r) const;
  Matrix head(std::size_t n) const;  // first n rows

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Dataset {
  Matrix X;
  std::vector<double> y;
  std::size_t arity() const { return X.cols(); }
  std::size_t rows() const { return X.rows(); }
};

// One input set of a collection: the full-width input matrix (frozen columns
// hold their frozen value), the model response, and the frozen values by
// column (NaN for the varying columns).
struct InputSet {
  Matrix X;
  std::vector<double> y;
  std::vector<double> frozen;
};

struct Collection {
  std::vector<int> varying;
  std::vector<InputSet> sets;
};

// Pearson correlation with pairwise deletion of undefined entries. Returns
// nullopt when fewer than two defined pairs remain or a side has zero
// variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

// Mean squared error; undefined predictions are charged `penalty` each.
double mse(std::span<const double> pred, std::span<const double> y, double penalty = 1e12);

std::size_t count_undefined(std::span<const double> v);

void write_csv(const std::string& path, const Dataset& d);
Dataset read_csv(const std::string& path);
std::string csv_text(const Dataset& d);

}  // namespace setgap
