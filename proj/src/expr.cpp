#include "itermean/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "itermean/format.hpp"
#include "itermean/errors.hpp"
#include "itermean/roots.hpp"

namespace itermean {

using Kind = FuncExpr::Kind;
using Node = FuncExpr::Node;
using NodePtr = FuncExpr::NodePtr;

namespace {

NodePtr make_leaf(Kind k, double value = 0.0, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = value;
  n->name = std::move(name);
  return n;
}

NodePtr make_binary(Kind k, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_pow(NodePtr base, long num, long den) {
  const long g = std::gcd(num, den);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->lhs = std::move(base);
  n->num = num / g;
  n->den = den / g;
  return n;
}

bool is_reserved(std::string_view id) { return id == "x" || id == "inv" || id == "comp"; }

// ---------------------------------------------------------------------------
// recursive-descent parser

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>* known) : s_(text), known_(known) {}

  NodePtr parse_all() {
    if (s_.find_first_not_of(" \t\r\n") == std::string_view::npos) {
      throw ParseError("empty expression", 0);
    }
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  const std::set<std::string>* known_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Kind::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (!accept('^')) return b;
    long num = 0, den = 1;
    if (accept('(')) {
      rational(num, den);
      expect(')');
    } else {
      rational(num, den);
    }
    return make_pow(b, num, den);
  }

  long integer(bool allow_sign) {
    skip_ws();
    const std::size_t start = pos_;
    bool neg = false;
    if (allow_sign && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected integer exponent", start);
    if (pos_ - digits > 9) throw ParseError("exponent too large", start);
    const long v = std::stol(std::string(s_.substr(digits, pos_ - digits)));
    return neg ? -v : v;
  }

  void rational(long& num, long& den) {
    num = integer(true);
    den = 1;
    // `x^1/2` binds the denominator only when a digit follows the slash
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      std::size_t look = pos_ + 1;
      while (look < s_.size() && std::isspace(static_cast<unsigned char>(s_[look]))) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        const std::size_t at = look;
        pos_ = look;
        den = integer(false);
        if (den <= 0) throw ParseError("exponent denominator must be positive", at);
      }
    }
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    auto digits = [&] {
      const std::size_t b = p;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      return p - b;
    };
    std::size_t nd = digits();
    if (p < s_.size() && s_[p] == '.') {
      ++p;
      nd += digits();
    }
    if (nd == 0) throw ParseError("malformed number", start);
    if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        p = q;
        digits();
      }
    }
    const std::string lit(s_.substr(start, p - start));
    pos_ = p;
    const double v = std::strtod(lit.c_str(), nullptr);
    if (!std::isfinite(v)) throw ParseError("number out of range", start);
    return make_leaf(Kind::Number, v);
  }

  NodePtr base() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x") return make_leaf(Kind::Var);
      if (id == "inv") {
        expect('(');
        NodePtr inner = expr();
        expect(')');
        return make_binary(Kind::Inverse, inner, nullptr);
      }
      if (id == "comp") {
        expect('(');
        NodePtr outer = expr();
        expect(',');
        NodePtr inner = expr();
        expect(')');
        return make_binary(Kind::Compose, outer, inner);
      }
      if (peek() == '(') throw ParseError("unknown function '" + id + "'", start);
      if (known_ && !known_->contains(id)) {
        throw ParseError("unknown identifier '" + id + "'", start);
      }
      return make_leaf(Kind::Param, 0.0, id);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }
};

// ---------------------------------------------------------------------------
// evaluation

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
  return v;
}

double rational_pow(double b, long num, long den) {
  const double e = static_cast<double>(num) / static_cast<double>(den);
  if (b > 0.0) return std::pow(b, e);
  if (b == 0.0) {
    if (num > 0) return 0.0;
    throw DomainError("zero raised to a non-positive power");
  }
  if (den % 2 == 0) throw DomainError("even root of a negative value");
  const double mag = std::pow(-b, e);
  return (num % 2 == 0) ? mag : -mag;
}

struct Evaluator {
  const std::map<std::string, double>& params;
  const RootOptions& root;

  double eval(const Node& n, double x) const {
    switch (n.kind) {
      case Kind::Var:
        return x;
      case Kind::Number:
        return n.value;
      case Kind::Param: {
        auto it = params.find(n.name);
        if (it == params.end()) throw DomainError("unbound parameter '" + n.name + "'");
        return it->second;
      }
      case Kind::Add:
        return checked(eval(*n.lhs, x) + eval(*n.rhs, x), "sum");
      case Kind::Sub:
        return checked(eval(*n.lhs, x) - eval(*n.rhs, x), "difference");
      case Kind::Mul:
        return checked(eval(*n.lhs, x) * eval(*n.rhs, x), "product");
      case Kind::Div: {
        const double d = eval(*n.rhs, x);
        if (d == 0.0) throw DomainError("division by zero");
        return checked(eval(*n.lhs, x) / d, "quotient");
      }
      case Kind::Pow:
        return checked(rational_pow(eval(*n.lhs, x), n.num, n.den), "power");
      case Kind::Compose:
        return eval(*n.lhs, eval(*n.rhs, x));
      case Kind::Inverse: {
        const Node& inner = *n.lhs;
        auto F = [&](double z) { return eval(inner, z); };
        return solve_increasing(F, x, root).x;
      }
    }
    throw DomainError("corrupt expression node");
  }
};

// ---------------------------------------------------------------------------
// unparse

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void unparse_node(const Node& n, std::string& out);

bool ends_with_integer_exponent(const std::string& s) {
  std::size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
  if (i == s.size()) return false;
  if (i > 0 && s[i - 1] == '-') --i;
  return i > 0 && s[i - 1] == '^';
}

void unparse_child(const Node& child, int parent_prec, bool wrap_equal, std::string& out) {
  const int p = precedence(child.kind);
  const bool wrap = p < parent_prec || (wrap_equal && p == parent_prec);
  if (wrap) out += '(';
  unparse_node(child, out);
  if (wrap) out += ')';
}

void unparse_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Var:
      out += 'x';
      return;
    case Kind::Number:
      out += detail::fmt_double(n.value);
      return;
    case Kind::Param:
      out += n.name;
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(n.kind);
      const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
      std::string left;
      unparse_child(*n.lhs, p, false, left);
      // text ending in `^k` left of '/' would read the divisor as an exponent denominator
      if (n.kind == Kind::Div && ends_with_integer_exponent(left)) left = '(' + left + ')';
      out += left;
      out += op;
      unparse_child(*n.rhs, p, true, out);
      return;
    }
    case Kind::Pow:
      unparse_child(*n.lhs, 4, false, out);
      out += '^';
      out += std::to_string(n.num);
      if (n.den != 1) {
        out += '/';
        out += std::to_string(n.den);
      }
      return;
    case Kind::Inverse:
      out += "inv(";
      unparse_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Compose:
      out += "comp(";
      unparse_node(*n.lhs, out);
      out += ',';
      unparse_node(*n.rhs, out);
      out += ')';
      return;
  }
}

// ---------------------------------------------------------------------------
// monomial folding

std::optional<Monomial> fold(const Node& n, const std::map<std::string, double>& params) {
  switch (n.kind) {
    case Kind::Var:
      return Monomial{1.0, 1.0};
    case Kind::Number:
      return Monomial{n.value, 0.0};
    case Kind::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) return std::nullopt;
      return Monomial{it->second, 0.0};
    }
    case Kind::Add:
    case Kind::Sub: {
      auto a = fold(*n.lhs, params);
      auto b = fold(*n.rhs, params);
      if (!a || !b || a->power != b->power) return std::nullopt;
      const double c = n.kind == Kind::Add ? a->coef + b->coef : a->coef - b->coef;
      return Monomial{c, a->power};
    }
    case Kind::Mul: {
      auto a = fold(*n.lhs, params);
      auto b = fold(*n.rhs, params);
      if (!a || !b) return std::nullopt;
      return Monomial{a->coef * b->coef, a->power + b->power};
    }
    case Kind::Div: {
      auto a = fold(*n.lhs, params);
      auto b = fold(*n.rhs, params);
      if (!a || !b || b->coef == 0.0) return std::nullopt;
      return Monomial{a->coef / b->coef, a->power - b->power};
    }
    case Kind::Pow: {
      auto a = fold(*n.lhs, params);
      if (!a) return std::nullopt;
      const double e = static_cast<double>(n.num) / static_cast<double>(n.den);
      if (a->coef <= 0.0 && !a->is_constant()) return std::nullopt;
      if (a->is_constant()) {
        try {
          return Monomial{rational_pow(a->coef, n.num, n.den), 0.0};
        } catch (const DomainError&) {
          return std::nullopt;
        }
      }
      return Monomial{std::pow(a->coef, e), a->power * e};
    }
    case Kind::Compose: {
      auto outer = fold(*n.lhs, params);
      auto inner = fold(*n.rhs, params);
      if (!outer || !inner) return std::nullopt;
      if (outer->is_constant()) return outer;
      if (inner->coef <= 0.0) return std::nullopt;
      return Monomial{outer->coef * std::pow(inner->coef, outer->power), outer->power * inner->power};
    }
    case Kind::Inverse: {
      auto a = fold(*n.lhs, params);
      if (!a || a->coef <= 0.0 || a->power <= 0.0) return std::nullopt;
      const double q = 1.0 / a->power;
      return Monomial{std::pow(a->coef, -q), q};
    }
  }
  return std::nullopt;
}

void collect_params(const Node& n, std::set<std::string>& out) {
  if (n.kind == Kind::Param) out.insert(n.name);
  if (n.lhs) collect_params(*n.lhs, out);
  if (n.rhs) collect_params(*n.rhs, out);
}

bool same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Var:
      return true;
    case Kind::Number:
      return a.value == b.value;
    case Kind::Param:
      return a.name == b.name;
    case Kind::Pow:
      return a.num == b.num && a.den == b.den && same_node(*a.lhs, *b.lhs);
    case Kind::Inverse:
      return same_node(*a.lhs, *b.lhs);
    default:
      return same_node(*a.lhs, *b.lhs) && same_node(*a.rhs, *b.rhs);
  }
}

}  // namespace

FuncExpr::FuncExpr() : root_(make_leaf(Kind::Var)) {}

FuncExpr::FuncExpr(NodePtr root, std::map<std::string, double> params)
    : root_(std::move(root)), params_(std::move(params)) {}

FuncExpr FuncExpr::parse(std::string_view text, const std::set<std::string>* known_params) {
  return FuncExpr(Parser(text, known_params).parse_all());
}

FuncExpr FuncExpr::bind(const std::string& name, double value) const {
  if (is_reserved(name)) throw DomainError("cannot bind reserved name '" + name + "'");
  if (!std::isfinite(value)) throw DomainError("parameter '" + name + "' must be finite");
  auto p = params_;
  p[name] = value;
  return FuncExpr(root_, std::move(p));
}

FuncExpr FuncExpr::bind(const std::map<std::string, double>& values) const {
  FuncExpr out = *this;
  for (const auto& [k, v] : values) out = out.bind(k, v);
  return out;
}

std::set<std::string> FuncExpr::parameters() const {
  std::set<std::string> names;
  collect_params(*root_, names);
  return names;
}

std::set<std::string> FuncExpr::unbound() const {
  std::set<std::string> out;
  for (const auto& n : parameters()) {
    if (!params_.contains(n)) out.insert(n);
  }
  return out;
}

double FuncExpr::eval(double x, const RootOptions& root) const {
  return Evaluator{params_, root}.eval(*root_, x);
}

std::string FuncExpr::unparse() const {
  std::string out;
  unparse_node(*root_, out);
  return out;
}

std::optional<Monomial> FuncExpr::as_monomial() const { return fold(*root_, params_); }

bool same_tree(const FuncExpr& a, const FuncExpr& b) { return same_node(*a.root_, *b.root_); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

ValidationReport validate_bijection(const FuncExpr& expr, const NumericsConfig& cfg) {
  if (auto missing = expr.unbound(); !missing.empty()) {
    throw DomainError("unbound parameter '" + *missing.begin() + "'");
  }
  ValidationReport rep;
  const auto xs = cfg.validation_grid.points();
  rep.samples.reserve(xs.size());
  for (double x : xs) rep.samples.emplace_back(x, expr.eval(x, cfg.root));

  rep.monotone = Verdict::Yes;
  for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i) {
    if (!(rep.samples[i].second < rep.samples[i + 1].second)) {
      rep.monotone = Verdict::No;
      rep.failure_witness = std::make_pair(rep.samples[i].first, rep.samples[i + 1].first);
      break;
    }
  }
  if (rep.monotone == Verdict::No || rep.samples.size() < 2) {
    rep.surjective = Verdict::Undetermined;
    return rep;
  }

  // log-log slope over roughly one decade at each end of the grid
  const std::size_t n = rep.samples.size();
  const double decades = std::log10(cfg.validation_grid.hi / cfg.validation_grid.lo);
  std::size_t span = decades > 0 ? static_cast<std::size_t>(std::ceil((n - 1) / decades)) : 1;
  span = std::clamp<std::size_t>(span, 1, n - 1);
  auto slope = [&](std::size_t a, std::size_t b) {
    const auto& [x0, y0] = rep.samples[a];
    const auto& [x1, y1] = rep.samples[b];
    if (!(y0 > 0.0) || !(y1 > 0.0)) return 0.0;
    return std::log(y1 / y0) / std::log(x1 / x0);
  };
  rep.slope_near_zero = slope(0, span);
  rep.slope_near_infinity = slope(n - 1 - span, n - 1);
  if (!(rep.samples.front().second > 0.0)) {
    rep.surjective = Verdict::No;  // leaves (0, inf) at the low end
  } else if (rep.slope_near_zero >= 0.05 && rep.slope_near_infinity >= 0.05) {
    rep.surjective = Verdict::Yes;
  } else if (rep.slope_near_zero < 1e-3 || rep.slope_near_infinity < 1e-3) {
    rep.surjective = Verdict::No;  // flattens toward a positive limit at an edge
  } else {
    rep.surjective = Verdict::Undetermined;
  }
  return rep;
}

}  // namespace itermean
