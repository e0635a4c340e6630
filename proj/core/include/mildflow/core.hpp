#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mildflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Eigen-coefficient representation of a state in an orthonormal eigenbasis.
///
/// Mode index 0 holds the coefficient of the first basis function. The
/// Euclidean norm of the coefficients is the X-norm (Parseval). A state may be
/// flagged as blown-up by the solver; norms of such a state are refused.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(std::size_t modes) : coeffs_(Vector::Zero(static_cast<Eigen::Index>(modes))) {}
  explicit SpectralState(Vector coeffs, bool blown_up = false);

  static SpectralState unit(std::size_t modes, std::size_t mode);

  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  const Vector& coeffs() const { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_(static_cast<Eigen::Index>(i)); }

  bool blown_up() const { return blown_up_; }
  bool finite() const { return coeffs_.allFinite(); }
  SpectralState flagged_blown_up() const { return SpectralState(coeffs_, true); }

  friend SpectralState operator+(const SpectralState& a, const SpectralState& b);
  friend SpectralState operator-(const SpectralState& a, const SpectralState& b);
  friend SpectralState operator*(double s, const SpectralState& a);

 private:
  Vector coeffs_;
  bool blown_up_ = false;
};

double norm_x(const SpectralState& x);

/// Norm weighted per mode: sqrt(sum_n (w_n x_n)^2). Empty weights give norm_x.
double weighted_norm(const SpectralState& x, const Vector& weights);

/// Right-open piecewise-constant U-valued signal on [0, horizon].
///
/// Cell i covers [grid[i], grid[i+1]) and carries values[i]. Pointwise
/// evaluation picks the right-continuous representative; at the horizon the
/// last cell's value is returned.
class InputSignal {
 public:
  InputSignal(std::vector<double> grid, std::vector<Vector> values);

  static InputSignal constant(const Vector& value, double horizon);
  static InputSignal zero(std::size_t dim, double horizon);

  double horizon() const { return grid_.back(); }
  std::size_t dim() const { return static_cast<std::size_t>(values_.front().size()); }
  std::size_t cells() const { return values_.size(); }
  std::span<const double> grid() const { return grid_; }
  const std::vector<Vector>& values() const { return values_; }

  std::size_t cell_index(double t) const;
  const Vector& at(double t) const;

  double sup_norm() const;
  /// Sup of the U-norm over cells intersecting [a, b).
  double sup_norm(double a, double b) const;

  /// u(tau + .) on [0, horizon - tau].
  InputSignal shift(double tau) const;
  /// Restriction to [0, t].
  InputSignal restrict_to(double t) const;
  /// u(tau + .) restricted to [0, length].
  InputSignal window(double tau, double length) const;

  /// Interior cell boundaries strictly inside (a, b).
  std::vector<double> breakpoints(double a, double b) const;

  InputSignal scaled(double s) const;

  /// Pointwise difference on the common refinement over the shorter horizon.
  friend InputSignal operator-(const InputSignal& a, const InputSignal& b);

  /// Channel-wise stacking [a; b] on the common refinement.
  static InputSignal stack(const InputSignal& a, const InputSignal& b);

 private:
  std::vector<double> grid_;
  std::vector<Vector> values_;
};

/// Equals u1 on [0, t) and u2(. - t) afterwards.
InputSignal concat(const InputSignal& u1, const InputSignal& u2, double t);

/// Vector-valued polynomial p(t) = sum_k c_k t^k, used for smooth inputs.
class PolynomialSignal {
 public:
  explicit PolynomialSignal(std::vector<Vector> coefficients);

  std::size_t dim() const { return static_cast<std::size_t>(coeffs_.front().size()); }
  std::size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<Vector>& coefficients() const { return coeffs_; }

  Vector value(double t) const;
  PolynomialSignal derivative() const;
  /// Re-expansion around tau: q(s) = p(tau + s).
  PolynomialSignal shift(double tau) const;
  /// Upper bound on sup_{t in [a,b]} |p(t)|.
  double sup_bound(double a, double b) const;

 private:
  std::vector<Vector> coeffs_;
};

/// Class-K-infinity comparison function with a sampled certificate.
class KinfFunction {
 public:
  explicit KinfFunction(std::function<double(double)> fn) : fn_(std::move(fn)) {}

  static KinfFunction identity();
  static KinfFunction linear(double slope);
  static KinfFunction power(double scale, double exponent);

  double operator()(double r) const { return fn_(r); }

  struct Certificate {
    bool zero_at_origin = false;
    bool strictly_increasing = false;
    bool unbounded = false;
    bool valid() const { return zero_at_origin && strictly_increasing && unbounded; }
  };
  /// Checks the class properties on the dyadic grid r = 2^k, k in [-20, 40].
  Certificate certify() const;

 private:
  std::function<double(double)> fn_;
};

/// Nonlinearity f(x, v) together with its user-declared certificates.
///
/// `lipschitz(r)` is a Lipschitz constant of f(., v) on the ball of radius r
/// (in the state norm the solver works in) for all |v| <= r.
/// `growth_sigma` and `growth_c` bound |f(0, v)| <= sigma(|v|) + c.
struct Nonlinearity {
  using Eval = std::function<SpectralState(const SpectralState&, const Vector&)>;

  Eval eval;
  std::function<double(double)> lipschitz;
  KinfFunction growth_sigma = KinfFunction::identity();
  double growth_c = 0.0;
  /// Uniform global Lipschitz constant (or linear-growth constant in
  /// fractional mode), when one exists.
  std::optional<double> global_lipschitz;
  /// Joint modulus q with |f(x1,v1)-f(x2,v2)| <= L (|x1-x2| + q(|v1-v2|)).
  std::optional<KinfFunction> input_modulus;
  /// True when f does not read its input argument.
  bool input_free = true;

  static Nonlinearity zero(std::size_t modes);
  /// f(x) = x^2 on a single mode; L(r) = 2r.
  static Nonlinearity scalar_square();
  /// Componentwise a * arctan(x_n); globally Lipschitz with L = a and f(0, .) = 0.
  static Nonlinearity arctan(double a = 1.0);
};

/// Result of a sampled certificate spot-check.
struct SampleCheck {
  std::size_t samples = 0;
  double worst_ratio = 0.0;  // measured / certified
  bool passed(double tolerance = 1e-9) const { return worst_ratio <= 1.0 + tolerance; }
};

/// Samples pairs in the ball of radius `radius` (in the norm given by
/// `weights`; empty = X norm) and compares |f(y,v)-f(x,v)| to lipschitz(radius)|y-x|.
SampleCheck check_lipschitz(const Nonlinearity& f, std::size_t modes, std::size_t input_dim,
                            double radius, std::size_t count, std::uint64_t seed,
                            const Vector& weights = {});

/// Samples inputs of norm up to `radius` and compares |f(0,v)| to sigma(|v|)+c.
SampleCheck check_growth(const Nonlinearity& f, std::size_t modes, std::size_t input_dim,
                         double radius, std::size_t count, std::uint64_t seed);

/// Partial sums of a nonnegative series on the ladder N/4, N/2, N and a
/// convergence verdict from the ratio of consecutive increments. A last
/// increment below 1% of the full sum counts as bounded.
struct LadderVerdict {
  double quarter = 0.0;
  double half = 0.0;
  double full = 0.0;
  double increment_ratio = 0.0;
  bool bounded = true;
};
LadderVerdict series_ladder(std::span<const double> terms, double ratio_limit = 0.95);

}  // namespace mildflow
