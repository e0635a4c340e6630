#pragma once

#include "mildflow/core.hpp"
#include "mildflow/semigroup.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mildflow {

enum class OperatorClassKind { bounded, q_admissible, smooth_class };

/// Declared regularity of an input operator. smooth_class(a) asserts B in L(U, X_{-1+a}).
struct OperatorClass {
  OperatorClassKind kind = OperatorClassKind::bounded;
  double param = 0.0;  // q for q_admissible, alpha for smooth_class

  static OperatorClass bounded() { return {}; }
  static OperatorClass q_admissible(double q) { return {OperatorClassKind::q_admissible, q}; }
  static OperatorClass smooth_class(double alpha);

  std::string describe() const;
};

/// Per-mode coefficients of B: U -> X_{-1}; column j is the image of the j-th input channel.
class InputOperator {
 public:
  InputOperator(Matrix coeffs, OperatorClass cls);

  static InputOperator identity(std::size_t modes);
  static InputOperator zero(std::size_t modes, std::size_t inputs);
  static InputOperator column(Vector b, OperatorClass cls);
  /// [a | b] acting on stacked inputs; the declared class is the weaker one.
  static InputOperator hstack(const InputOperator& a, const InputOperator& b);

  const Matrix& coeffs() const { return coeffs_; }
  std::size_t modes() const { return static_cast<std::size_t>(coeffs_.rows()); }
  std::size_t inputs() const { return static_cast<std::size_t>(coeffs_.cols()); }
  const OperatorClass& declared_class() const { return cls_; }
  bool is_zero() const { return coeffs_.isZero(0.0); }

  Vector apply(const Vector& u) const { return coeffs_ * u; }
  Vector row_norms() const { return coeffs_.rowwise().norm(); }

 private:
  Matrix coeffs_;
  OperatorClass cls_;
};

/// Spectral norm of diag(weights) * C (empty weights = identity).
double weighted_operator_norm(const Matrix& C, const Vector& weights = {});

/// Ladder test of sum_n (omega - mu_n)^{2(alpha-1)} |row_n|^2 over N/4, N/2, N.
LadderVerdict smooth_class_ladder(const DiagonalSemigroup& sys, const InputOperator& B, double alpha);

/// Phi(t)u = int_0^t T_{-1}(t-s) B u(s) ds, exact per mode for piecewise-constant u.
SpectralState convolve(const DiagonalSemigroup& sys, const InputOperator& B, const InputSignal& u, double t);

/// Same for polynomial u, exact via phi functions.
SpectralState convolve(const DiagonalSemigroup& sys, const InputOperator& B, const PolynomialSignal& u, double t);

/// Per-mode int_0^t e^{mu (t-s)} ds.
Vector exp_integral(const Vector& mu, double t);

/// Bracketing pair for h_t: probe-family lower bound and certified upper bound.
struct HBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// q is 2 or infinity (pass std::numeric_limits<double>::infinity()).
HBracket measure_h(const DiagonalSemigroup& sys, const InputOperator& B, double t, double q, int probe_cells = 12);

/// Truncation-exact bound sqrt(sum_n (|row_n| w_n int_0^t e^{mu_n s} ds)^2), valid for q = infinity
/// and any B on the truncation. weights empty = X norm.
double truncation_h_inf(const DiagonalSemigroup& sys, const InputOperator& B, double t, const Vector& weights = {});

/// Truncation-exact L^2 bound sqrt(sum_n |row_n|^2 int_0^t e^{2 mu_n s} ds).
double truncation_h_2(const DiagonalSemigroup& sys, const InputOperator& B, double t);

/// R t^{alpha-d} e^{kappa t} for B declared smooth_class(alpha).
double upper_bound_h(const DiagonalSemigroup& sys, const InputOperator& B, double d, double t,
                     std::optional<double> kappa = {});

/// Zero-class infinity-admissibility constant c_t of B2.
double c_constant(const DiagonalSemigroup& sys, const InputOperator& B2, double t);

/// M |B| (e^{lambda t} - 1)/lambda with the lambda -> 0 limit.
double bounded_convolution_bound(double M, double lambda, double norm, double t);

struct AdmissibilityEstimate {
  std::vector<double> t_grid;
  std::vector<double> h_values;  // running max of probe lower bounds
  std::vector<double> upper;
  double fitted_exponent = 0.0;
};

/// Dyadic sweep t = 2^{-k}, k = k_max..k_min, increasing in t.
AdmissibilityEstimate estimate_h(const DiagonalSemigroup& sys, const InputOperator& B, int k_min, int k_max,
                                 double q, int probe_cells = 12);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mildflow
