#include "setgap/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <omp.h>

namespace setgap {

namespace {

constexpr std::size_t kBlock = 256;

template <class F>
void map_block(double* d, std::size_t n, F f) {
  for (std::size_t i = 0; i < n; ++i) d[i] = defined_or_nan(f(d[i]));
}

void unary_block(UnaryOp op, double* d, std::size_t n) {
  switch (op) {
    case UnaryOp::Abs: map_block(d, n, [](double x) { return std::fabs(x); }); break;
    case UnaryOp::Acos: map_block(d, n, [](double x) { return std::acos(x); }); break;
    case UnaryOp::Asin: map_block(d, n, [](double x) { return std::asin(x); }); break;
    case UnaryOp::Atan: map_block(d, n, [](double x) { return std::atan(x); }); break;
    case UnaryOp::Cos: map_block(d, n, [](double x) { return std::cos(x); }); break;
    case UnaryOp::Cosh: map_block(d, n, [](double x) { return std::cosh(x); }); break;
    case UnaryOp::Exp: map_block(d, n, [](double x) { return std::exp(x); }); break;
    case UnaryOp::Log: map_block(d, n, [](double x) { return std::log(x); }); break;
    case UnaryOp::Sin: map_block(d, n, [](double x) { return std::sin(x); }); break;
    case UnaryOp::Sinh: map_block(d, n, [](double x) { return std::sinh(x); }); break;
    case UnaryOp::Sqrt: map_block(d, n, [](double x) { return std::sqrt(x); }); break;
    case UnaryOp::Tan: map_block(d, n, [](double x) { return std::tan(x); }); break;
    case UnaryOp::Tanh: map_block(d, n, [](double x) { return std::tanh(x); }); break;
    case UnaryOp::Neg: map_block(d, n, [](double x) { return -x; }); break;
    case UnaryOp::Identity: break;
  }
}

}  // namespace

Program Program::compile(const Expr& e) {
  Program p;
  p.emit(e, 0);
  p.placeholders_ = max_placeholder_id(e);
  return p;
}

void Program::emit(const Expr& e, int depth) {
  max_depth_ = std::max(max_depth_, depth + 1);
  switch (e.kind()) {
    case NodeKind::Constant: code_.push_back({Op::Const, 0, e.value()}); return;
    case NodeKind::Placeholder: code_.push_back({Op::Coeff, e.id() - 1, 0.0}); return;
    case NodeKind::Variable:
      max_var_ = std::max(max_var_, e.index());
      code_.push_back({Op::Var, e.index(), 0.0});
      return;
    case NodeKind::Unary:
      emit(e.child(0), depth);
      code_.push_back({Op::Unary, static_cast<int>(e.op()), 0.0});
      return;
    case NodeKind::Power:
      emit(e.child(0), depth);
      if (e.child(1).is(NodeKind::Constant)) {
        code_.push_back({Op::PowConst, 0, e.child(1).value()});
      } else {
        emit(e.child(1), depth + 1);
        code_.push_back({Op::Pow, 0, 0.0});
      }
      return;
    case NodeKind::Quotient:
      emit(e.child(0), depth);
      emit(e.child(1), depth + 1);
      code_.push_back({Op::Div, 0, 0.0});
      return;
    case NodeKind::Sum:
    case NodeKind::Product: {
      int n = 0;
      for (const auto& c : e.children()) emit(c, depth + n++);
      code_.push_back({e.is(NodeKind::Sum) ? Op::Add : Op::Mul, n, 0.0});
      return;
    }
  }
}

void Program::run_block(const Matrix& X, std::size_t row0, std::size_t len, std::span<const double> coeffs,
                        double* out, double* ws) const {
  int sp = 0;
  auto slot = [&](int k) { return ws + static_cast<std::size_t>(k) * kBlock; };
  for (const Ins& ins : code_) {
    switch (ins.op) {
      case Op::Var: {
        const double* src = X.col(static_cast<std::size_t>(ins.arg)) + row0;
        std::copy(src, src + len, slot(sp++));
        break;
      }
      case Op::Const: std::fill(slot(sp), slot(sp) + len, defined_or_nan(ins.value)); ++sp; break;
      case Op::Coeff: std::fill(slot(sp), slot(sp) + len, coeffs[static_cast<std::size_t>(ins.arg)]); ++sp; break;
      case Op::Unary: unary_block(static_cast<UnaryOp>(ins.arg), slot(sp - 1), len); break;
      case Op::Add:
      case Op::Mul: {
        int base = sp - ins.arg;
        double* d = slot(base);
        for (int k = base + 1; k < sp; ++k) {
          const double* s = slot(k);
          if (ins.op == Op::Add) {
            for (std::size_t i = 0; i < len; ++i) d[i] += s[i];
          } else {
            for (std::size_t i = 0; i < len; ++i) d[i] *= s[i];
          }
        }
        for (std::size_t i = 0; i < len; ++i) d[i] = defined_or_nan(d[i]);
        sp = base + 1;
        break;
      }
      case Op::Pow: {
        double* b = slot(sp - 2);
        const double* x = slot(sp - 1);
        for (std::size_t i = 0; i < len; ++i) b[i] = apply_power(b[i], x[i]);
        --sp;
        break;
      }
      case Op::PowConst: {
        double* b = slot(sp - 1);
        double k = ins.value;
        for (std::size_t i = 0; i < len; ++i) b[i] = apply_power(b[i], k);
        break;
      }
      case Op::Div: {
        double* n = slot(sp - 2);
        const double* d = slot(sp - 1);
        for (std::size_t i = 0; i < len; ++i) n[i] = defined_or_nan(n[i] / d[i]);
        --sp;
        break;
      }
    }
  }
  std::copy(slot(0), slot(0) + len, out);
}

void Program::evaluate(const Matrix& X, std::span<const double> coeffs, std::span<double> out) const {
  if (out.size() != X.rows()) throw std::invalid_argument("output length does not match row count");
  if (max_var_ >= static_cast<int>(X.cols()))
    throw std::invalid_argument(fmt::format("expression uses x{} but data has {} columns", max_var_, X.cols()));
  if (coeffs.size() < static_cast<std::size_t>(placeholders_))
    throw std::invalid_argument(fmt::format("need {} coefficients, got {}", placeholders_, coeffs.size()));
  std::vector<double> ws(static_cast<std::size_t>(max_depth_) * kBlock);
  for (std::size_t r = 0; r < X.rows(); r += kBlock) {
    std::size_t len = std::min(kBlock, X.rows() - r);
    run_block(X, r, len, coeffs, out.data() + r, ws.data());
  }
}

std::vector<double> Program::evaluate(const Matrix& X, std::span<const double> coeffs) const {
  std::vector<double> out(X.rows());
  evaluate(X, coeffs, out);
  return out;
}

std::vector<double> evaluate_population(const Program& p, const Matrix& X,
                                        std::span<const std::vector<double>> population, const Scorer& score) {
  // validate up front: exceptions cannot leave a parallel region
  if (p.max_variable() >= static_cast<int>(X.cols()))
    throw std::invalid_argument(fmt::format("expression uses x{} but data has {} columns", p.max_variable(), X.cols()));
  for (const auto& c : population)
    if (c.size() < static_cast<std::size_t>(p.placeholder_count()))
      throw std::invalid_argument(fmt::format("need {} coefficients, got {}", p.placeholder_count(), c.size()));
  std::vector<double> fit(population.size());
  const long n = static_cast<long>(population.size());
#pragma omp parallel
  {
    std::vector<double> pred(X.rows());
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i) {
      p.evaluate(X, population[static_cast<std::size_t>(i)], pred);
      fit[static_cast<std::size_t>(i)] = score(pred);
    }
  }
  return fit;
}

std::vector<double> evaluate_population_serial(const Program& p, const Matrix& X,
                                               std::span<const std::vector<double>> population, const Scorer& score) {
  std::vector<double> fit(population.size());
  std::vector<double> pred(X.rows());
  for (std::size_t i = 0; i < population.size(); ++i) {
    p.evaluate(X, population[i], pred);
    fit[i] = score(pred);
  }
  return fit;
}

}  // namespace setgap
