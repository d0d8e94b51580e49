#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "itermean/config.hpp"
#include "itermean/monotone.hpp"

namespace itermean {

enum class OpKind { Addition, Multiplication, Custom };
enum class Bisymmetry { Certified, Refuted, Unchecked };
const char* to_string(Bisymmetry b);

/// A binary operation on (0, inf) with its bisymmetry status:
/// (u.v).(w.z) = (u.w).(v.z).
struct GroupoidOp {
  OpKind kind = OpKind::Addition;
  std::string name = "add";
  std::function<double(double, double)> apply;
  Bisymmetry bisymmetry = Bisymmetry::Unchecked;
  std::optional<std::array<double, 4>> witness;  // (u, v, w, z) when refuted

  static GroupoidOp addition();
  static GroupoidOp multiplication();
  static GroupoidOp custom(std::string name, std::function<double(double, double)> fn);

  double operator()(double u, double v) const { return apply(u, v); }
};

enum class Provenance {
  D,               // (f o g)^-1(f(x) + g(y)) for a general op
  IterativeFromG,  // generated by g above the diagonal
  IterativeFromR,  // generated by r below the diagonal
  Multiplicative,  // D with multiplication
  GWQAM,           // (phi + psi)^-1(phi(x) + psi(y))
  Arithmetic,
  Scaled,
  Custom,
};
const char* to_string(Provenance p);

struct Witness {
  double x = 0.0, y = 0.0, value = 0.0;
  double violation = 0.0;  // scaled by max(1, max(x, y))
};

struct AxiomResult {
  bool pass = true;
  std::optional<Witness> witness;
};

/// Grid check of the mean axioms. A mean is reflexive and internal; a strict
/// mean is also sharply internal off the diagonal. Symmetry and grid
/// monotonicity are reported but are not mean axioms.
struct MeanCheckReport {
  AxiomResult reflexive, internal, strict, symmetric, increasing;
  bool partial = false;  // some grid point failed to evaluate
  std::optional<Witness> partial_witness;
  std::string partial_reason;
  LogGrid grid;
  double reflexive_tol = 0.0;
  double internal_tol = 0.0;

  bool is_mean() const { return !partial && reflexive.pass && internal.pass; }
  bool is_strict_mean() const { return is_mean() && strict.pass; }
};

/// A two-variable function on (0, inf)^2 and where it came from.
class MeanObject {
 public:
  MeanObject(std::function<double(double, double)> fn, Provenance provenance,
             std::string description);

  double operator()(double x, double y) const { return fn_(x, y); }
  Provenance provenance() const { return provenance_; }
  const std::string& description() const { return description_; }

  /// Report attached by `with_checks`; absent until then.
  const MeanCheckReport* checks() const { return checks_.get(); }
  MeanObject with_checks(MeanCheckReport report) const;

 private:
  std::function<double(double, double)> fn_;
  Provenance provenance_;
  std::string description_;
  std::shared_ptr<const MeanCheckReport> checks_;
};

/// D(x, y) = (f o g)^-1(f(x) op g(y)).
MeanObject make_D(const MonotoneMap& f, const MonotoneMap& g, const GroupoidOp& op,
                  const NumericsConfig& cfg);

/// make_D(sum_k g^-k, g, +); throws DivergenceError when the series cannot converge.
MeanObject make_iterative_mean(const MonotoneMap& g, const NumericsConfig& cfg);

/// The iterative mean of generator r, i.e. make_iterative_mean(r^-1).
/// Requires 0 < r(x) < x on the validation grid.
MeanObject make_iterative_mean_from_r(const MonotoneMap& r, const NumericsConfig& cfg);

/// (f o g)^-1(f(x) * g(y)). No mean property is implied.
MeanObject make_C(const MonotoneMap& f, const MonotoneMap& g, const NumericsConfig& cfg);

/// (phi + psi)^-1(phi(x) + psi(y)).
MeanObject make_gwqam(const MonotoneMap& phi, const MonotoneMap& psi, const NumericsConfig& cfg);

MeanObject arithmetic_mean();
MeanObject scaled(const MeanObject& m, double factor);

MeanCheckReport check_mean(const MeanObject& m, const NumericsConfig& cfg);

/// Outcome of assuming D_{f, f+c} is reflexive: then f(f(x) + c) = 2 f(x) + c,
/// so f(x) = 2x - c and D_{f, f+c} is the arithmetic mean.
struct Remark3Report {
  bool hypothesis_ok = false;
  std::string hypothesis_message;
  std::optional<double> hypothesis_witness_x;
  double identity_residual = 0.0;     // max |f(f(x)+c) - 2f(x) - c| / (1 + |2f(x)+c|)
  double linear_form_residual = 0.0;  // max |f(x) - (2x - c)| / (1 + |f(x)|)
  double deviation_from_arithmetic = 0.0;
  MeanCheckReport checks;
  bool reduces_to_arithmetic = false;
};
Remark3Report remark3_reduction(const MonotoneMap& f, double c, const NumericsConfig& cfg);

/// Symmetry criterion for D_{f,g}: (f o g^-1)(x) op y = (f o g^-1)(y) op x.
/// Returns the worst relative defect over grid pairs.
struct PairResidual {
  double max_residual = 0.0;
  double x = 0.0, y = 0.0;
};
PairResidual symmetry_criterion_residual(const MonotoneMap& f, const MonotoneMap& g,
                                         const GroupoidOp& op, const NumericsConfig& cfg);

}  // namespace itermean
