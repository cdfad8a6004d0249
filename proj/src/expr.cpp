#include "setgap/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

namespace setgap {

namespace {

constexpr const char* kUnaryNames[] = {"abs", "acos", "asin", "atan", "cos",  "cosh", "exp", "log",
                                       "sin", "sinh", "sqrt", "tan",  "tanh", "neg",  "id"};

std::shared_ptr<Node> make_node(NodeKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

std::size_t subtree_size(const std::vector<Expr>& children) {
  std::size_t s = 1;
  for (const auto& c : children) s += c.size();
  return s;
}

}  // namespace

const char* unary_name(UnaryOp op) { return kUnaryNames[static_cast<int>(op)]; }

bool unary_from_name(std::string_view name, UnaryOp& out) {
  for (int i = 0; i <= static_cast<int>(UnaryOp::Tanh); ++i) {
    if (name == kUnaryNames[i]) {
      out = static_cast<UnaryOp>(i);
      return true;
    }
  }
  return false;
}

double apply_unary(UnaryOp op, double x) {
  double r;
  switch (op) {
    case UnaryOp::Abs: r = std::fabs(x); break;
    case UnaryOp::Acos: r = std::acos(x); break;
    case UnaryOp::Asin: r = std::asin(x); break;
    case UnaryOp::Atan: r = std::atan(x); break;
    case UnaryOp::Cos: r = std::cos(x); break;
    case UnaryOp::Cosh: r = std::cosh(x); break;
    case UnaryOp::Exp: r = std::exp(x); break;
    case UnaryOp::Log: r = std::log(x); break;
    case UnaryOp::Sin: r = std::sin(x); break;
    case UnaryOp::Sinh: r = std::sinh(x); break;
    case UnaryOp::Sqrt: r = std::sqrt(x); break;
    case UnaryOp::Tan: r = std::tan(x); break;
    case UnaryOp::Tanh: r = std::tanh(x); break;
    case UnaryOp::Neg: r = -x; break;
    default: r = x; break;
  }
  return defined_or_nan(r);
}

double apply_power(double base, double exponent) {
  if (std::isnan(base) || std::isnan(exponent)) return std::numeric_limits<double>::quiet_NaN();
  if (exponent == 2.0) return defined_or_nan(base * base);
  if (exponent == 1.0) return base;
  if (exponent == -1.0) return defined_or_nan(1.0 / base);
  return defined_or_nan(std::pow(base, exponent));
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = make_node(NodeKind::Constant);
  n->value = value == 0.0 ? 0.0 : value;
  return Expr(std::move(n));
}

Expr Expr::placeholder(int id) {
  auto n = make_node(NodeKind::Placeholder);
  n->tag = id;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be non-negative");
  auto n = make_node(NodeKind::Variable);
  n->tag = index;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr arg) {
  auto n = make_node(NodeKind::Unary);
  n->tag = static_cast<int>(op);
  n->children = {std::move(arg)};
  n->size = subtree_size(n->children);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, Expr exponent) {
  auto n = make_node(NodeKind::Power);
  n->children = {std::move(base), std::move(exponent)};
  n->size = subtree_size(n->children);
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = make_node(NodeKind::Sum);
  n->children = std::move(terms);
  n->size = subtree_size(n->children);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors.front();
  auto n = make_node(NodeKind::Product);
  n->children = std::move(factors);
  n->size = subtree_size(n->children);
  return Expr(std::move(n));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  auto n = make_node(NodeKind::Quotient);
  n->children = {std::move(numerator), std::move(denominator)};
  n->size = subtree_size(n->children);
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::id() const { return node_->tag; }
int Expr::index() const { return node_->tag; }
UnaryOp Expr::op() const { return static_cast<UnaryOp>(node_->tag); }
const std::vector<Expr>& Expr::children() const { return node_->children; }
std::size_t Expr::size() const { return node_->size; }

bool Expr::is_integer_constant() const {
  return is(NodeKind::Constant) && std::isfinite(value()) && value() == std::round(value());
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) { return Expr::unary(UnaryOp::Neg, a); }

// ---------------------------------------------------------------------------
// ordering

namespace {

int kind_rank(NodeKind k) {
  switch (k) {
    case NodeKind::Constant: return 0;
    case NodeKind::Placeholder: return 1;
    case NodeKind::Variable: return 2;
    case NodeKind::Power: return 3;
    case NodeKind::Unary: return 4;
    case NodeKind::Quotient: return 5;
    case NodeKind::Product: return 6;
    case NodeKind::Sum: return 7;
  }
  return 8;
}

bool constant_like(const Expr& e) { return e.is(NodeKind::Constant) || e.is(NodeKind::Placeholder); }

int compare_impl(const Expr& a, const Expr& b, bool with_ids) {
  if (a.raw() == b.raw()) return 0;
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::Constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case NodeKind::Placeholder:
      if (!with_ids || a.id() == b.id()) return 0;
      return a.id() < b.id() ? -1 : 1;
    case NodeKind::Variable:
      if (a.index() == b.index()) return 0;
      return a.index() < b.index() ? -1 : 1;
    case NodeKind::Unary:
      if (a.op() != b.op()) return static_cast<int>(a.op()) < static_cast<int>(b.op()) ? -1 : 1;
      break;
    default: break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_impl(ca[i], cb[i], with_ids);
    if (c != 0) return c;
  }
  if (ca.size() == cb.size()) return 0;
  return ca.size() < cb.size() ? -1 : 1;
}

// Sum terms keep constants and placeholders last so `c1*x0 + c2` reads
// naturally; products keep them first.
bool sum_less(const Expr& a, const Expr& b) {
  bool ka = constant_like(a), kb = constant_like(b);
  if (ka != kb) return kb;
  int c = compare_impl(a, b, false);
  if (c != 0) return c < 0;
  return compare_impl(a, b, true) < 0;
}

bool product_less(const Expr& a, const Expr& b) {
  int c = compare_impl(a, b, false);
  if (c != 0) return c < 0;
  return compare_impl(a, b, true) < 0;
}

}  // namespace

int compare_shape(const Expr& a, const Expr& b) { return compare_impl(a, b, false); }

bool identical(const Expr& a, const Expr& b) { return compare_impl(a, b, true) == 0; }

// ---------------------------------------------------------------------------
// canonicalization

namespace {

Expr canon(const Expr& e);

Expr canon_product(std::vector<Expr> factors);

Expr canon_sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  double folded = 0.0;
  bool have_constant = false;
  for (auto& t : terms) {
    Expr c = canon(t);
    if (c.is(NodeKind::Sum)) {
      for (const auto& g : c.children()) {
        if (g.is(NodeKind::Constant)) {
          folded += g.value();
          have_constant = true;
        } else {
          flat.push_back(g);
        }
      }
    } else if (c.is(NodeKind::Constant)) {
      folded += c.value();
      have_constant = true;
    } else {
      flat.push_back(c);
    }
  }
  if (have_constant && !std::isfinite(folded)) {
    // keep the undefined value visible rather than silently dropping it
    flat.push_back(Expr::constant(folded));
  } else if (have_constant && (folded != 0.0 || flat.empty())) {
    flat.push_back(Expr::constant(folded));
  }
  std::stable_sort(flat.begin(), flat.end(), sum_less);
  return Expr::sum(std::move(flat));
}

Expr canon_power(const Expr& base_in, const Expr& exp_in) {
  Expr b = canon(base_in);
  Expr x = canon(exp_in);
  if (b.is(NodeKind::Constant) && x.is(NodeKind::Constant)) {
    double v = apply_power(b.value(), x.value());
    if (!std::isnan(v)) return Expr::constant(v);
    return Expr::power(b, x);
  }
  if (x.is_constant(1.0)) return b;
  if (x.is_constant(0.0)) return Expr::constant(1.0);
  if (b.is_constant(1.0)) return Expr::constant(1.0);
  if (x.is_integer_constant()) {
    if (b.is(NodeKind::Power) && b.child(1).is_integer_constant()) {
      return canon_power(b.child(0), Expr::constant(b.child(1).value() * x.value()));
    }
    if (b.is(NodeKind::Product)) {
      std::vector<Expr> parts;
      for (const auto& f : b.children()) parts.push_back(Expr::power(f, x));
      return canon_product(std::move(parts));
    }
  }
  return Expr::power(b, x);
}

Expr canon_product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  double folded = 1.0;
  bool have_constant = false;
  for (auto& f : factors) {
    Expr c = canon(f);
    if (c.is(NodeKind::Product)) {
      for (const auto& g : c.children()) {
        if (g.is(NodeKind::Constant)) {
          folded *= g.value();
          have_constant = true;
        } else {
          flat.push_back(g);
        }
      }
    } else if (c.is(NodeKind::Constant)) {
      folded *= c.value();
      have_constant = true;
    } else {
      flat.push_back(c);
    }
  }
  if (have_constant && folded == 0.0) return Expr::constant(0.0);
  if (have_constant && (folded != 1.0 || flat.empty())) flat.push_back(Expr::constant(folded));
  std::stable_sort(flat.begin(), flat.end(), product_less);
  return Expr::product(std::move(flat));
}

Expr canon(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Placeholder:
    case NodeKind::Variable:
      return e;
    case NodeKind::Unary: {
      Expr a = canon(e.child(0));
      if (e.op() == UnaryOp::Identity) return a;
      if (e.op() == UnaryOp::Neg) return canon_product({Expr::constant(-1.0), a});
      if (a.is(NodeKind::Constant)) {
        double v = apply_unary(e.op(), a.value());
        if (!std::isnan(v)) return Expr::constant(v);
      }
      return Expr::unary(e.op(), a);
    }
    case NodeKind::Quotient:
      return canon_product({e.child(0), Expr::power(e.child(1), Expr::constant(-1.0))});
    case NodeKind::Power:
      return canon_power(e.child(0), e.child(1));
    case NodeKind::Sum:
      return canon_sum(e.children());
    case NodeKind::Product:
      return canon_product(e.children());
  }
  return e;
}

Expr rebuild(const Expr& e, std::vector<Expr> children) {
  switch (e.kind()) {
    case NodeKind::Unary: return Expr::unary(e.op(), std::move(children[0]));
    case NodeKind::Power: return Expr::power(std::move(children[0]), std::move(children[1]));
    case NodeKind::Quotient: return Expr::quotient(std::move(children[0]), std::move(children[1]));
    case NodeKind::Sum: return Expr::sum(std::move(children));
    case NodeKind::Product: return Expr::product(std::move(children));
    default: return e;
  }
}

template <class F>
Expr map_leaves(const Expr& e, F&& f) {
  if (e.children().empty()) return f(e);
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children()) kids.push_back(map_leaves(c, f));
  return rebuild(e, std::move(kids));
}

template <class F>
void visit_prefix(const Expr& e, F&& f) {
  f(e);
  for (const auto& c : e.children()) visit_prefix(c, f);
}

}  // namespace

Expr renumber_placeholders(const Expr& e) {
  std::map<int, int> ids;
  visit_prefix(e, [&](const Expr& n) {
    if (n.is(NodeKind::Placeholder) && !ids.count(n.id())) {
      int next = static_cast<int>(ids.size()) + 1;
      ids[n.id()] = next;
    }
  });
  bool same = true;
  for (auto [from, to] : ids) same = same && from == to;
  if (same) return e;
  return map_leaves(e, [&](const Expr& n) {
    return n.is(NodeKind::Placeholder) ? Expr::placeholder(ids.at(n.id())) : n;
  });
}

Expr canonicalize(const Expr& e) { return renumber_placeholders(canon(e)); }

VarSet variables(const Expr& e) {
  VarSet out;
  visit_prefix(e, [&](const Expr& n) {
    if (n.is(NodeKind::Variable)) out.insert(n.index());
  });
  return out;
}

bool has_variables(const Expr& e) {
  if (e.is(NodeKind::Variable)) return true;
  for (const auto& c : e.children())
    if (has_variables(c)) return true;
  return false;
}

bool has_placeholders(const Expr& e) {
  if (e.is(NodeKind::Placeholder)) return true;
  for (const auto& c : e.children())
    if (has_placeholders(c)) return true;
  return false;
}

int max_placeholder_id(const Expr& e) {
  int m = 0;
  visit_prefix(e, [&](const Expr& n) {
    if (n.is(NodeKind::Placeholder)) m = std::max(m, n.id());
  });
  return m;
}

int distinct_placeholders(const Expr& e) {
  std::set<int> ids;
  visit_prefix(e, [&](const Expr& n) {
    if (n.is(NodeKind::Placeholder)) ids.insert(n.id());
  });
  return static_cast<int>(ids.size());
}

Expr shift_placeholders(const Expr& e, int offset) {
  return map_leaves(e, [&](const Expr& n) {
    return n.is(NodeKind::Placeholder) ? Expr::placeholder(n.id() + offset) : n;
  });
}

Expr substitute_placeholders(const Expr& e, std::span<const double> values) {
  return map_leaves(e, [&](const Expr& n) {
    if (!n.is(NodeKind::Placeholder)) return n;
    if (n.id() < 1 || static_cast<std::size_t>(n.id()) > values.size())
      throw std::invalid_argument(fmt::format("no value for placeholder c{}", n.id()));
    return Expr::constant(values[n.id() - 1]);
  });
}

double evaluate(const Expr& e, std::span<const double> vars, std::span<const double> coeffs) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (e.kind()) {
    case NodeKind::Constant: return defined_or_nan(e.value());
    case NodeKind::Placeholder:
      if (e.id() < 1 || static_cast<std::size_t>(e.id()) > coeffs.size())
        throw std::invalid_argument(fmt::format("no value for placeholder c{}", e.id()));
      return coeffs[e.id() - 1];
    case NodeKind::Variable:
      if (static_cast<std::size_t>(e.index()) >= vars.size())
        throw std::invalid_argument(fmt::format("no value for variable x{}", e.index()));
      return vars[e.index()];
    case NodeKind::Unary: return apply_unary(e.op(), evaluate(e.child(0), vars, coeffs));
    case NodeKind::Power:
      return apply_power(evaluate(e.child(0), vars, coeffs), evaluate(e.child(1), vars, coeffs));
    case NodeKind::Quotient: {
      double n = evaluate(e.child(0), vars, coeffs);
      double d = evaluate(e.child(1), vars, coeffs);
      return defined_or_nan(n / d);
    }
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& c : e.children()) s += evaluate(c, vars, coeffs);
      return defined_or_nan(s);
    }
    case NodeKind::Product: {
      double p = 1.0;
      for (const auto& c : e.children()) p *= evaluate(c, vars, coeffs);
      return defined_or_nan(p);
    }
  }
  return nan;
}

// ---------------------------------------------------------------------------
// printing

namespace {

enum Prec { kSum = 1, kProduct = 2, kPower = 4, kAtom = 5 };

std::string number(double v) { return fmt::format("{}", v); }

std::string print(const Expr& e, int ctx);

std::string wrap(const std::string& s, int own, int ctx) { return own < ctx ? "(" + s + ")" : s; }

bool negative_int_power(const Expr& e) {
  return e.is(NodeKind::Power) && e.child(1).is_integer_constant() && e.child(1).value() < 0;
}

bool leading_negative(const Expr& e) {
  if (e.is(NodeKind::Constant)) return e.value() < 0;
  if (e.is(NodeKind::Product) && !e.children().empty()) return leading_negative(e.child(0));
  return false;
}

Expr negated(const Expr& e) {
  if (e.is(NodeKind::Constant)) return Expr::constant(-e.value());
  std::vector<Expr> f = e.children();
  f[0] = negated(f[0]);
  if (f[0].is_constant(1.0)) f.erase(f.begin());
  return Expr::product(std::move(f));
}

std::string join(const std::vector<Expr>& parts, int ctx) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += print(parts[i], ctx);
  }
  return out;
}

std::string print_product(const std::vector<Expr>& factors, int ctx) {
  std::vector<Expr> num, den;
  bool negate = false;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Expr& f = factors[i];
    if (i == 0 && f.is(NodeKind::Constant) && f.value() < 0 && factors.size() > 1) {
      negate = true;
      if (f.value() != -1.0) num.push_back(Expr::constant(-f.value()));
    } else if (negative_int_power(f)) {
      double k = -f.child(1).value();
      den.push_back(k == 1.0 ? f.child(0) : Expr::power(f.child(0), Expr::constant(k)));
    } else {
      num.push_back(f);
    }
  }
  std::string s = num.empty() ? "1" : join(num, kProduct + 1);
  if (!den.empty()) {
    s += "/";
    s += den.size() == 1 ? print(den[0], kPower) : "(" + join(den, kProduct + 1) + ")";
  }
  if (negate) s = "-" + s;
  return wrap(s, kProduct, ctx);
}

std::string print(const Expr& e, int ctx) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      std::string s = number(e.value());
      return e.value() < 0 ? wrap(s, kProduct, ctx) : s;
    }
    case NodeKind::Placeholder: return "c" + std::to_string(e.id());
    case NodeKind::Variable: return "x" + std::to_string(e.index());
    case NodeKind::Unary:
      if (e.op() == UnaryOp::Neg) return wrap("-" + print(e.child(0), kProduct + 1), kProduct, ctx);
      if (e.op() == UnaryOp::Identity) return print(e.child(0), ctx);
      return std::string(unary_name(e.op())) + "(" + print(e.child(0), 0) + ")";
    case NodeKind::Power: {
      if (negative_int_power(e)) return print_product({e}, ctx);
      const Expr& x = e.child(1);
      std::string exp_s = x.is(NodeKind::Constant) ? number(x.value()) : print(x, kAtom);
      return wrap(print(e.child(0), kAtom) + "^" + exp_s, kPower, ctx);
    }
    case NodeKind::Quotient:
      return wrap(print(e.child(0), kProduct) + "/" + print(e.child(1), kPower), kProduct, ctx);
    case NodeKind::Product: return print_product(e.children(), ctx);
    case NodeKind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        const Expr& t = e.child(i);
        if (i == 0) {
          s += print(t, kSum);
        } else if (leading_negative(t)) {
          s += " - " + print(negated(t), kProduct);
        } else {
          s += " + " + print(t, kSum + 1);
        }
      }
      return wrap(s, kSum, ctx);
    }
  }
  return "?";
}

void prefix(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      double v = e.value();
      if (v == std::numbers::e) {
        out.push_back("E");
      } else if (e.is_integer_constant() && v >= -3 && v <= 5) {
        out.push_back(std::to_string(static_cast<int>(v)));
      } else {
        throw std::invalid_argument("constant " + number(v) + " has no prefix token");
      }
      return;
    }
    case NodeKind::Placeholder: out.push_back("c"); return;
    case NodeKind::Variable: out.push_back("x" + std::to_string(e.index())); return;
    case NodeKind::Unary:
      if (e.op() == UnaryOp::Identity) {
        prefix(e.child(0), out);
      } else if (e.op() == UnaryOp::Neg) {
        out.push_back("mul");
        out.push_back("-1");
        prefix(e.child(0), out);
      } else {
        out.push_back(unary_name(e.op()));
        prefix(e.child(0), out);
      }
      return;
    case NodeKind::Power:
      out.push_back("pow");
      prefix(e.child(0), out);
      prefix(e.child(1), out);
      return;
    case NodeKind::Quotient:
      out.push_back("div");
      prefix(e.child(0), out);
      prefix(e.child(1), out);
      return;
    case NodeKind::Sum:
    case NodeKind::Product: {
      const char* tok = e.is(NodeKind::Sum) ? "add" : "mul";
      for (std::size_t i = 1; i < e.children().size(); ++i) out.push_back(tok);
      for (const auto& c : e.children()) prefix(c, out);
      return;
    }
  }
}

}  // namespace

std::string to_infix(const Expr& e) { return print(e, 0); }

std::vector<std::string> to_prefix(const Expr& e) {
  std::vector<std::string> out;
  prefix(e, out);
  return out;
}

}  // namespace setgap
