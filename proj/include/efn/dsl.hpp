#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "efn/efun.hpp"

// Expression language for E-functions:
//   expr    := term (('+' | '-') term)*
//   term    := factor ('*' factor)*
//   factor  := '-' factor | builtin | raw | '(' expr ')' | 'D(' expr ')' | poly
//   builtin := ('exp' | 'cos' | 'sin' | 'besselJ0') '(' rat '*x' ')'
//   raw     := 'raw(' '[' coeffs (',' coeffs)* ']' ',' '[' rat (',' rat)* ']' ')'
//   coeffs  := '[' rat (',' rat)* ']'
//   poly    := rat | 'x' ('^' integer)?
//   rat     := integer ('/' positive-integer)?

namespace efn {

struct EFunExpr {
  enum class Kind { Builtin, Raw, Add, Sub, Mul, Neg, Derive, Poly };
  Kind kind = Kind::Poly;
  std::string name;  // builtin name
  Rat scale;         // builtin scale
  std::vector<std::vector<Rat>> op;  // raw operator coefficients
  std::vector<Rat> seeds;            // raw seeds
  efn::Poly poly;                    // polynomial literal
  std::vector<std::shared_ptr<const EFunExpr>> children;
};

using ExprPtr = std::shared_ptr<const EFunExpr>;

namespace detail {

class DslParser {
 public:
  explicit DslParser(const std::string& text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  static ExprPtr node(EFunExpr e) { return std::make_shared<const EFunExpr>(std::move(e)); }
  static ExprPtr poly_node(efn::Poly p) {
    EFunExpr e;
    e.poly = std::move(p);
    return node(std::move(e));
  }
  static bool is_poly(const ExprPtr& e) { return e->kind == EFunExpr::Kind::Poly; }

  // Polynomial subtrees are folded into a single literal.
  static ExprPtr binary(EFunExpr::Kind k, ExprPtr a, ExprPtr b) {
    using K = EFunExpr::Kind;
    if (is_poly(a) && is_poly(b)) {
      if (k == K::Add) return poly_node(a->poly + b->poly);
      if (k == K::Sub) return poly_node(a->poly - b->poly);
      return poly_node(a->poly * b->poly);
    }
    EFunExpr e;
    e.kind = k;
    e.children = {std::move(a), std::move(b)};
    return node(std::move(e));
  }
  static ExprPtr unary(EFunExpr::Kind k, ExprPtr a) {
    if (is_poly(a)) return poly_node(k == EFunExpr::Kind::Neg ? efn::Poly(-a->poly) : a->poly.derivative());
    EFunExpr e;
    e.kind = k;
    e.children = {std::move(a)};
    return node(std::move(e));
  }

  ExprPtr expr() {
    ExprPtr acc = term();
    for (;;) {
      if (accept('+')) acc = binary(EFunExpr::Kind::Add, acc, term());
      else if (accept('-')) acc = binary(EFunExpr::Kind::Sub, acc, term());
      else return acc;
    }
  }

  ExprPtr term() {
    ExprPtr acc = factor();
    while (accept('*')) acc = binary(EFunExpr::Kind::Mul, acc, factor());
    return acc;
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected digits");
    return s_.substr(start, pos_ - start);
  }

  Rat rat() {
    skip();
    bool neg = false;
    if (accept('-')) neg = true;
    Int num(digits());
    Int den = 1;
    if (accept('/')) {
      den = Int(digits());
      if (den == 0) error("zero denominator");
    }
    Rat r(num, den);
    r.canonicalize();
    return neg ? Rat(-r) : r;
  }

  std::vector<Rat> rat_list() {
    expect('[');
    std::vector<Rat> out{rat()};
    while (accept(',')) out.push_back(rat());
    expect(']');
    return out;
  }

  ExprPtr factor() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return unary(EFunExpr::Kind::Neg, factor());
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return poly_node(efn::Poly(rat()));
    if (!std::isalpha(static_cast<unsigned char>(c))) error(std::string("unexpected '") + c + "'");
    std::size_t start = pos_;
    std::string id = identifier();
    if (id == "x") {
      unsigned k = 1;
      if (accept('^')) k = static_cast<unsigned>(std::stoul(digits()));
      return poly_node(poly_pow(efn::Poly::x(), k));
    }
    if (id == "D") {
      expect('(');
      ExprPtr inner = expr();
      expect(')');
      return unary(EFunExpr::Kind::Derive, inner);
    }
    if (id == "raw") {
      expect('(');
      EFunExpr e;
      e.kind = EFunExpr::Kind::Raw;
      expect('[');
      e.op.push_back(rat_list());
      while (accept(',')) e.op.push_back(rat_list());
      expect(']');
      expect(',');
      e.seeds = rat_list();
      expect(')');
      return node(std::move(e));
    }
    if (id == "exp" || id == "cos" || id == "sin" || id == "besselJ0") {
      expect('(');
      EFunExpr e;
      e.kind = EFunExpr::Kind::Builtin;
      e.name = id;
      e.scale = rat();
      expect('*');
      if (identifier() != "x") error("expected 'x'");
      expect(')');
      if (is_zero(e.scale)) error("builtin scale must be nonzero");
      return node(std::move(e));
    }
    pos_ = start;
    fail(ErrorKind::UnknownBuiltin, "unknown function '" + id + "'");
  }
};

inline std::string rat_text(const Rat& r) { return format_rat(r); }

inline std::string poly_text(const efn::Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = 0; k <= p.degree(); ++k) {
    const Rat& c = p.coeff(static_cast<unsigned>(k));
    if (is_zero(c)) continue;
    if (!out.empty()) out += " + ";
    std::string cs = rat_text(c);
    if (k == 0) out += cs;
    else out += cs + "*x" + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return "(" + out + ")";
}

}  // namespace detail

inline ExprPtr parse_efun(const std::string& text) { return detail::DslParser(text).parse(); }

/// Canonical text; parsing it yields an equal tree.
inline std::string to_text(const EFunExpr& e) {
  using K = EFunExpr::Kind;
  switch (e.kind) {
    case K::Builtin: return e.name + "(" + detail::rat_text(e.scale) + "*x)";
    case K::Raw: {
      std::string s = "raw([";
      for (std::size_t i = 0; i < e.op.size(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < e.op[i].size(); ++j) s += (j ? ", " : "") + detail::rat_text(e.op[i][j]);
        s += "]";
      }
      s += "], [";
      for (std::size_t j = 0; j < e.seeds.size(); ++j) s += (j ? ", " : "") + detail::rat_text(e.seeds[j]);
      return s + "])";
    }
    case K::Add: return "(" + to_text(*e.children[0]) + " + " + to_text(*e.children[1]) + ")";
    case K::Sub: return "(" + to_text(*e.children[0]) + " - " + to_text(*e.children[1]) + ")";
    case K::Mul: return to_text(*e.children[0]) + " * " + to_text(*e.children[1]);
    case K::Neg: return "-" + to_text(*e.children[0]);
    case K::Derive: return "D(" + to_text(*e.children[0]) + ")";
    case K::Poly: return detail::poly_text(e.poly);
  }
  return "";
}

namespace detail {

struct Elab {
  bool is_poly = false;
  efn::Poly p;
  EFun f;
  EFun fun() const { return is_poly ? catalog::polynomial(p) : f; }
};

inline Elab elaborate(const EFunExpr& e) {
  using K = EFunExpr::Kind;
  auto poly = [](efn::Poly p) {
    Elab r;
    r.is_poly = true;
    r.p = std::move(p);
    return r;
  };
  auto fun = [](EFun f) {
    Elab r;
    r.f = std::move(f);
    return r;
  };
  switch (e.kind) {
    case K::Poly: return poly(e.poly);
    case K::Builtin:
      if (e.name == "exp") return fun(catalog::exp(e.scale));
      if (e.name == "cos") return fun(catalog::cos(e.scale));
      if (e.name == "sin") return fun(catalog::sin(e.scale));
      return fun(catalog::bessel_j0(e.scale));
    case K::Raw: {
      std::vector<efn::Poly> op;
      for (const auto& c : e.op) op.emplace_back(c);
      return fun(catalog::raw(op, e.seeds));
    }
    case K::Neg: {
      Elab a = elaborate(*e.children[0]);
      return a.is_poly ? poly(-a.p) : fun(scale_value(a.f, -1));
    }
    case K::Derive: {
      Elab a = elaborate(*e.children[0]);
      return a.is_poly ? poly(a.p.derivative()) : fun(derivative(a.f));
    }
    case K::Add:
    case K::Sub: {
      Elab a = elaborate(*e.children[0]), b = elaborate(*e.children[1]);
      if (a.is_poly && b.is_poly) return poly(e.kind == K::Add ? a.p + b.p : a.p - b.p);
      EFun bf = b.fun();
      if (e.kind == K::Sub) bf = scale_value(bf, -1);
      return fun(add(a.fun(), bf));
    }
    case K::Mul: {
      Elab a = elaborate(*e.children[0]), b = elaborate(*e.children[1]);
      if (a.is_poly && b.is_poly) return poly(a.p * b.p);
      if (a.is_poly) return fun(mul_poly(a.p, b.f));
      if (b.is_poly) return fun(mul_poly(b.p, a.f));
      return fun(mul(a.f, b.f));
    }
  }
  return poly(efn::Poly());
}

}  // namespace detail

/// The E-function denoted by an expression, labelled with its canonical text.
inline EFun elaborate(const EFunExpr& e) { return detail::elaborate(e).fun().with_label(to_text(e)); }

inline EFun efun_from_text(const std::string& text) { return elaborate(*parse_efun(text)); }

}  // namespace efn
