#pragma once

#include "mildflow/core.hpp"

#include <optional>

namespace mildflow {

/// phi_k(z) = sum_{j>=0} z^j / (j+k)!, so that phi_0 = exp and
/// int_0^h e^{mu (h-s)} s^{k-1} ds = (k-1)! h^k phi_k(mu h).
double phi(int k, double z);

/// Diagonal generator with real point spectrum and the semigroup it generates.
///
/// The growth certificate (M, lambda) satisfies |T(t)| <= M e^{lambda t};
/// omega > max eigenvalue fixes the fractional scale (omega I - A)^alpha.
class DiagonalSemigroup {
 public:
  DiagonalSemigroup(Vector eigenvalues, double omega, double M = 1.0, std::optional<double> lambda = {});

  /// Quasi-contractive certificate M = 1, lambda = max(0, max mu) and
  /// omega = max(0, max mu) + 1 unless given.
  static DiagonalSemigroup from_eigenvalues(Vector eigenvalues, std::optional<double> omega = {});
  /// mu_n = -n^2, n = 1..modes, omega = 1.
  static DiagonalSemigroup dirichlet_laplacian_0_pi(std::size_t modes);

  const Vector& eigenvalues() const { return mu_; }
  std::size_t size() const { return static_cast<std::size_t>(mu_.size()); }
  double M() const { return M_; }
  double lambda() const { return lambda_; }
  double omega() const { return omega_; }
  /// Self-adjoint diagonal generators always generate analytic semigroups.
  bool analytic() const { return true; }
  /// omega_0(T) = max_n mu_n on the truncation.
  double growth_bound() const { return mu_.maxCoeff(); }
  /// Default exponent for analytic estimates: omega_0 + 1.
  double default_kappa() const { return growth_bound() + 1.0; }

  DiagonalSemigroup truncated(std::size_t modes) const;

 private:
  Vector mu_;
  double omega_;
  double M_;
  double lambda_;
};

/// Bounded generator given as a dense matrix; T(t) = exp(tA).
class DenseGenerator {
 public:
  explicit DenseGenerator(Matrix generator);

  const Matrix& matrix() const { return A_; }
  std::size_t size() const { return static_cast<std::size_t>(A_.rows()); }
  double M() const { return 1.0; }
  /// max(0, logarithmic 2-norm of A), so |T(t)| <= e^{lambda t}.
  double lambda() const { return lambda_; }
  double norm() const { return norm_; }

  Matrix propagator(double t) const;

  /// T(h), W0 = int_0^h T(h-s) ds and W1 = int_0^h T(h-s) (s/h) ds.
  struct StepIntegrals {
    Matrix T;
    Matrix W0;
    Matrix W1;
  };
  StepIntegrals step_integrals(double h) const;

 private:
  Matrix A_;
  double lambda_;
  double norm_;
};

SpectralState apply_T(const DiagonalSemigroup& sys, double t, const SpectralState& x);
SpectralState apply_T(const DenseGenerator& sys, double t, const SpectralState& x);

/// Per-mode weights (omega - mu_n)^alpha.
Vector fractional_weights(const DiagonalSemigroup& sys, double alpha);

/// (omega I - A)^alpha x, alpha in [-1, 1].
SpectralState apply_fractional(const DiagonalSemigroup& sys, double alpha, const SpectralState& x);

/// Exact operator norm of (omega I - A)^alpha T(t) on the truncation.
double frac_T_norm(const DiagonalSemigroup& sys, double alpha, double t);

/// Smallest C with t^alpha |(omega I - A)^alpha T(t)| <= C e^{kappa t} for all t > 0,
/// computed in closed form per mode. Requires kappa > omega_0.
double frac_constant(const DiagonalSemigroup& sys, double alpha, double kappa);

/// Same supremum restricted to the dyadic times t = 2^{-k}, k = 0..max_level.
double frac_constant_dyadic(const DiagonalSemigroup& sys, double alpha, double kappa, int max_level = 60);

}  // namespace mildflow
