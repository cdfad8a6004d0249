#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "setgap/expr.hpp"

namespace setgap {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error(fmt::format("parse error at {}: {}", position, message)), position_(position) {}

namespace {

// Recursive descent over the grammar in docs/infix.md.
class InfixParser {
 public:
  InfixParser(std::string_view text, int arity) : s_(text), arity_(arity) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return Expr::power(base, unary());
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == '|') {
      ++pos_;
      Expr e = expr();
      if (!accept('|')) fail("expected '|'");
      return Expr::unary(UnaryOp::Abs, e);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(v);
  }

  int index_suffix(std::string_view ident, std::size_t start) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), v);
    if (ec != std::errc() || ptr != ident.data() + ident.size()) {
      pos_ = start;
      fail("bad index in '" + std::string(ident) + "'");
    }
    return v;
  }

  Expr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string_view ident = s_.substr(start, pos_ - start);
    UnaryOp op;
    if (unary_from_name(ident, op)) {
      if (!accept('(')) fail("expected '(' after " + std::string(ident));
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::unary(op, arg);
    }
    if (ident == "pi") return Expr::constant(std::numbers::pi);
    if (ident == "E") return Expr::constant(std::numbers::e);
    if (ident.size() > 1 && ident[0] == 'x') {
      int k = index_suffix(ident, start);
      if (arity_ >= 0 && k >= arity_) {
        pos_ = start;
        fail(fmt::format("variable x{} out of range for arity {}", k, arity_));
      }
      return Expr::variable(k);
    }
    if (ident.size() > 1 && ident[0] == 'c') {
      int k = index_suffix(ident, start);
      if (k < 1) {
        pos_ = start;
        fail("placeholder ids start at 1");
      }
      return Expr::placeholder(k);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(ident) + "'");
  }

  std::string_view s_;
  int arity_;
  std::size_t pos_ = 0;
};

class PrefixParser {
 public:
  PrefixParser(std::span<const std::string> tokens, int arity) : t_(tokens), arity_(arity) {}

  Expr parse() {
    Expr e = node();
    if (pos_ != t_.size()) throw ParseError(pos_, "trailing token '" + t_[pos_] + "'");
    return e;
  }

 private:
  Expr node() {
    if (pos_ >= t_.size()) throw ParseError(pos_, "token list ended early");
    std::size_t at = pos_;
    const std::string& tok = t_[pos_++];
    if (tok == "add") {
      Expr a = node();
      return a + node();
    }
    if (tok == "mul") {
      Expr a = node();
      return a * node();
    }
    if (tok == "div") {
      Expr a = node();
      return a / node();
    }
    if (tok == "pow") {
      Expr a = node();
      return Expr::power(a, node());
    }
    UnaryOp op;
    if (unary_from_name(tok, op)) return Expr::unary(op, node());
    if (tok == "c") return Expr::placeholder(++placeholders_);
    if (tok == "E") return Expr::constant(std::numbers::e);
    if (tok == "x") return variable(0, at);
    if (tok.size() > 1 && tok[0] == 'x') {
      int k = -1;
      auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), k);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError(at, "bad variable token '" + tok + "'");
      return variable(k, at);
    }
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc() && ptr == tok.data() + tok.size() && v >= -3 && v <= 5) return Expr::constant(v);
    throw ParseError(at, "unknown token '" + tok + "'");
  }

  Expr variable(int k, std::size_t at) {
    if (k < 0 || (arity_ >= 0 && k >= arity_))
      throw ParseError(at, fmt::format("variable x{} out of range for arity {}", k, arity_));
    return Expr::variable(k);
  }

  std::span<const std::string> t_;
  int arity_;
  std::size_t pos_ = 0;
  int placeholders_ = 0;
};

}  // namespace

Expr parse_infix(std::string_view text, int arity) { return canonicalize(InfixParser(text, arity).parse()); }

Expr parse_prefix(std::span<const std::string> tokens, int arity) {
  return canonicalize(PrefixParser(tokens, arity).parse());
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace setgap
