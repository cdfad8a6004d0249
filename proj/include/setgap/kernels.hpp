#pragma once

#include <functional>
#include <span>
#include <vector>

#include "setgap/data.hpp"
#include "setgap/expr.hpp"

namespace setgap {

// Postfix program compiled from an expression, evaluated over blocks of rows.
// Results match the tree-walk `evaluate` exactly.
class Program {
 public:
  static Program compile(const Expr& e);

  void evaluate(const Matrix& X, std::span<const double> coeffs, std::span<double> out) const;
  std::vector<double> evaluate(const Matrix& X, std::span<const double> coeffs) const;

  int placeholder_count() const { return placeholders_; }
  int max_variable() const { return max_var_; }

 private:
  enum class Op : unsigned char { Var, Const, Coeff, Unary, Add, Mul, Pow, PowConst, Div };
  struct Ins {
    Op op;
    int arg = 0;  // variable index, coefficient index, child count, or UnaryOp
    double value = 0.0;
  };

  void emit(const Expr& e, int depth);
  void run_block(const Matrix& X, std::size_t row0, std::size_t len, std::span<const double> coeffs, double* out,
                 double* ws) const;

  std::vector<Ins> code_;
  int max_depth_ = 0;
  int placeholders_ = 0;
  int max_var_ = -1;
};

// Scores one prediction vector; larger is better.
using Scorer = std::function<double(std::span<const double> pred)>;

// Evaluate and score every coefficient vector of a population. The OpenMP
// version splits individuals across threads; the serial version is the
// reference used by tests and the benchmark.
std::vector<double> evaluate_population(const Program& p, const Matrix& X,
                                        std::span<const std::vector<double>> population, const Scorer& score);
std::vector<double> evaluate_population_serial(const Program& p, const Matrix& X,
                                               std::span<const std::vector<double>> population, const Scorer& score);

}  // namespace setgap
