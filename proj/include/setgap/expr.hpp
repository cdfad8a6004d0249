#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace setgap {

enum class NodeKind { Constant, Placeholder, Variable, Unary, Power, Sum, Product, Quotient };

enum class UnaryOp {
  Abs, Acos, Asin, Atan, Cos, Cosh, Exp, Log, Sin, Sinh, Sqrt, Tan, Tanh,
  Neg, Identity
};

const char* unary_name(UnaryOp op);
bool unary_from_name(std::string_view name, UnaryOp& out);

// Scalar semantics shared by every evaluator. Non-finite results map to NaN,
// which is the single "undefined" value.
double apply_unary(UnaryOp op, double x);
double apply_power(double base, double exponent);
inline double defined_or_nan(double v) { return v - v == 0.0 ? v : std::numeric_limits<double>::quiet_NaN(); }

using VarSet = std::set<int>;

struct Node;

// Handle to an immutable expression node. Copies share structure.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr placeholder(int id);
  static Expr variable(int index);
  static Expr unary(UnaryOp op, Expr arg);
  static Expr power(Expr base, Expr exponent);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr numerator, Expr denominator);

  NodeKind kind() const;
  double value() const;   // Constant
  int id() const;         // Placeholder
  int index() const;      // Variable
  UnaryOp op() const;     // Unary
  const std::vector<Expr>& children() const;
  const Expr& child(std::size_t i) const { return children()[i]; }
  std::size_t size() const;  // node count

  bool is(NodeKind k) const { return kind() == k; }
  bool is_constant(double v) const { return is(NodeKind::Constant) && value() == v; }
  bool is_integer_constant() const;

  const Node* raw() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind;
  double value = 0.0;
  int tag = 0;  // placeholder id, variable index, or UnaryOp
  std::vector<Expr> children;
  std::size_t size = 1;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Structural order that ignores placeholder ids. Returns <0, 0, >0.
int compare_shape(const Expr& a, const Expr& b);
// Exact structural equality including placeholder ids and constant values.
bool identical(const Expr& a, const Expr& b);

// Algebraic canonical form: Quotient becomes N*D^-1, negation becomes
// (-1)*X, sums and products are flattened and sorted, numeric subtrees fold,
// and placeholders are renumbered 1..k in prefix order.
Expr canonicalize(const Expr& e);
Expr renumber_placeholders(const Expr& e);

VarSet variables(const Expr& e);
bool has_variables(const Expr& e);
bool has_placeholders(const Expr& e);
int max_placeholder_id(const Expr& e);
int distinct_placeholders(const Expr& e);
Expr shift_placeholders(const Expr& e, int offset);
Expr substitute_placeholders(const Expr& e, std::span<const double> values);

// Tree-walk evaluation; placeholders c_k read coeffs[k-1].
double evaluate(const Expr& e, std::span<const double> vars, std::span<const double> coeffs = {});

std::string to_infix(const Expr& e);
std::vector<std::string> to_prefix(const Expr& e);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Infix grammar is documented in docs/infix.md. `arity` bounds variable
// indices; a negative arity disables the check.
Expr parse_infix(std::string_view text, int arity = -1);
// Prefix tokens: add mul div pow, unary names, c, x (or xK), integers -3..5, E.
// Each `c` token becomes a fresh placeholder.
Expr parse_prefix(std::span<const std::string> tokens, int arity = -1);
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace setgap
