#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itermean/config.hpp"

namespace itermean {

/// c * x^p, the closed-form shape the DSL recognizes for exact inversion.
struct Monomial {
  double coef = 1.0;
  double power = 1.0;

  double operator()(double x) const { return power == 1.0 ? coef * x : coef * std::pow(x, power); }
  bool is_linear() const { return power == 1.0; }
  bool is_constant() const { return power == 0.0; }
};

/// Immutable expression tree for a real function of `x` with named parameters.
///
/// Grammar:
///   expr     := term (("+"|"-") term)*
///   term     := factor (("*"|"/") factor)*
///   factor   := base ("^" rational)?
///   base     := "x" | number | ident | "(" expr ")" | "inv" "(" expr ")"
///             | "comp" "(" expr "," expr ")"
///   rational := integer ("/" positive-integer)?
///
/// `comp(a, b)` is a(b(x)); `inv(a)` is the inverse function of a, found
/// numerically. A parenthesized rational such as `x^(1/3)` is also accepted.
class FuncExpr {
 public:
  enum class Kind { Var, Number, Param, Add, Sub, Mul, Div, Pow, Inverse, Compose };

  struct Node {
    Kind kind = Kind::Var;
    double value = 0.0;        // Number
    std::string name;          // Param
    long num = 1, den = 1;     // Pow exponent, reduced, den > 0
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  FuncExpr();  // the identity x
  explicit FuncExpr(NodePtr root, std::map<std::string, double> params = {});

  /// Parses `text`. When `known_params` is given, identifiers outside it are
  /// rejected as unknown.
  static FuncExpr parse(std::string_view text,
                        const std::set<std::string>* known_params = nullptr);

  FuncExpr bind(const std::string& name, double value) const;
  FuncExpr bind(const std::map<std::string, double>& values) const;

  /// Names referenced by the tree, and the subset still unbound.
  std::set<std::string> parameters() const;
  std::set<std::string> unbound() const;
  const std::map<std::string, double>& params() const { return params_; }

  /// Throws DomainError on unbound parameters or non-finite intermediates.
  double eval(double x, const RootOptions& root = {}) const;

  /// Canonical text; parse(unparse()) reproduces the tree exactly.
  std::string unparse() const;

  /// c * x^p when the bound tree reduces to one, else nullopt.
  std::optional<Monomial> as_monomial() const;

  const Node& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }

  friend bool same_tree(const FuncExpr& a, const FuncExpr& b);

 private:
  NodePtr root_;
  std::map<std::string, double> params_;
};

/// Free-function spelling used by the CLI and tests.
inline FuncExpr parse(std::string_view text) { return FuncExpr::parse(text); }

enum class Verdict { Yes, No, Undetermined };
const char* to_string(Verdict v);

struct ValidationReport {
  Verdict monotone = Verdict::Undetermined;
  Verdict surjective = Verdict::Undetermined;
  std::vector<std::pair<double, double>> samples;            // (x, f(x))
  std::optional<std::pair<double, double>> failure_witness;  // x1 < x2, f(x1) >= f(x2)
  double slope_near_zero = 0.0;      // log-log slope over the lowest decade sampled
  double slope_near_infinity = 0.0;  // and over the highest
};

/// Samples `cfg.validation_grid` and reports monotonicity and a heuristic
/// ontoness verdict from the log-log slope at both ends of the grid.
/// Evaluation failures propagate.
ValidationReport validate_bijection(const FuncExpr& expr, const NumericsConfig& cfg);

}  // namespace itermean
