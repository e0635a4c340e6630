#include "mildflow/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace mildflow {

double phi(int k, double z) {
  if (k < 0) throw std::invalid_argument("phi index must be nonnegative");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 1.0) {
    // Taylor series; 1/(j+k)! decays fast enough for 24 terms at |z| < 1.
    double inv_fact = 1.0;
    for (int i = 2; i <= k; ++i) inv_fact /= i;
    double term = inv_fact;
    double sum = term;
    for (int j = 1; j < 24; ++j) {
      term *= z / static_cast<double>(j + k);
      sum += term;
    }
    return sum;
  }
  double value = std::exp(z);
  double inv_fact = 1.0;  // 1/(j-1)!
  for (int j = 1; j <= k; ++j) {
    value = (value - inv_fact) / z;
    inv_fact /= j;
  }
  return value;
}

// ---------------------------------------------------------------------------

DiagonalSemigroup::DiagonalSemigroup(Vector eigenvalues, double omega, double M, std::optional<double> lambda)
    : mu_(std::move(eigenvalues)), omega_(omega), M_(M) {
  if (mu_.size() == 0) throw std::invalid_argument("semigroup needs at least one mode");
  if (!mu_.allFinite()) throw std::invalid_argument("eigenvalues must be finite");
  if (!(M_ >= 1.0)) throw std::invalid_argument("growth constant M must be at least 1");
  const double w0 = mu_.maxCoeff();
  lambda_ = lambda.value_or(std::max(0.0, w0));
  if (lambda_ < 0.0) throw std::invalid_argument("growth rate lambda must be nonnegative");
  // Diagonal semigroups have |T(t)| = e^{w0 t}; M >= 1 and lambda >= w0 is then sufficient.
  if (lambda_ < w0) throw std::invalid_argument("growth rate lambda below the spectral bound");
  if (!(omega_ > w0)) throw std::domain_error("omega below growth bound");
}

DiagonalSemigroup DiagonalSemigroup::from_eigenvalues(Vector eigenvalues, std::optional<double> omega) {
  if (eigenvalues.size() == 0) throw std::invalid_argument("semigroup needs at least one mode");
  const double w0 = eigenvalues.maxCoeff();
  return DiagonalSemigroup(std::move(eigenvalues), omega.value_or(std::max(0.0, w0) + 1.0));
}

DiagonalSemigroup DiagonalSemigroup::dirichlet_laplacian_0_pi(std::size_t modes) {
  Vector mu(static_cast<Eigen::Index>(modes));
  for (Eigen::Index n = 0; n < mu.size(); ++n) mu(n) = -static_cast<double>((n + 1) * (n + 1));
  return DiagonalSemigroup(std::move(mu), 1.0);
}

DiagonalSemigroup DiagonalSemigroup::truncated(std::size_t modes) const {
  if (modes == 0 || modes > size()) throw std::invalid_argument("invalid truncation");
  return DiagonalSemigroup(mu_.head(static_cast<Eigen::Index>(modes)), omega_, M_, lambda_);
}

// ---------------------------------------------------------------------------

DenseGenerator::DenseGenerator(Matrix generator) : A_(std::move(generator)) {
  if (A_.rows() == 0 || A_.rows() != A_.cols()) throw std::invalid_argument("generator must be a square matrix");
  if (!A_.allFinite()) throw std::invalid_argument("generator must be finite");
  const Matrix sym = 0.5 * (A_ + A_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  lambda_ = std::max(0.0, eig.eigenvalues().maxCoeff());
  norm_ = Eigen::JacobiSVD<Matrix>(A_).singularValues()(0);
}

Matrix DenseGenerator::propagator(double t) const {
  if (t < 0.0) throw std::invalid_argument("semigroup time must be nonnegative");
  return Matrix(A_ * t).exp();
}

DenseGenerator::StepIntegrals DenseGenerator::step_integrals(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  const Eigen::Index n = A_.rows();
  Matrix Z = Matrix::Zero(3 * n, 3 * n);
  Z.block(0, 0, n, n) = A_;
  Z.block(0, n, n, n) = Matrix::Identity(n, n);
  Z.block(n, 2 * n, n, n) = Matrix::Identity(n, n);
  const Matrix E = Matrix(Z * h).exp();
  return {E.block(0, 0, n, n), E.block(0, n, n, n), E.block(0, 2 * n, n, n) / h};
}

// ---------------------------------------------------------------------------

SpectralState apply_T(const DiagonalSemigroup& sys, double t, const SpectralState& x) {
  if (t < 0.0) throw std::invalid_argument("semigroup time must be nonnegative");
  if (x.size() != sys.size()) throw std::invalid_argument("state size does not match semigroup");
  if (t == 0.0) return SpectralState(x.coeffs());
  return SpectralState((sys.eigenvalues() * t).array().exp().matrix().cwiseProduct(x.coeffs()));
}

SpectralState apply_T(const DenseGenerator& sys, double t, const SpectralState& x) {
  if (x.size() != sys.size()) throw std::invalid_argument("state size does not match generator");
  if (t == 0.0) return SpectralState(x.coeffs());
  return SpectralState(sys.propagator(t) * x.coeffs());
}

Vector fractional_weights(const DiagonalSemigroup& sys, double alpha) {
  const Vector base = (sys.omega() - sys.eigenvalues().array()).matrix();
  if ((base.array() <= 0.0).any()) throw std::domain_error("omega below growth bound");
  if (alpha == 0.0) return Vector::Ones(base.size());
  return base.array().pow(alpha).matrix();
}

SpectralState apply_fractional(const DiagonalSemigroup& sys, double alpha, const SpectralState& x) {
  if (alpha < -1.0 || alpha > 1.0) throw std::invalid_argument("fractional exponent must lie in [-1, 1]");
  if (x.size() != sys.size()) throw std::invalid_argument("state size does not match semigroup");
  if (!x.finite()) throw std::domain_error("state has non-finite coefficients");
  return SpectralState(fractional_weights(sys, alpha).cwiseProduct(x.coeffs()));
}

double frac_T_norm(const DiagonalSemigroup& sys, double alpha, double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup time must be nonnegative");
  if (t == 0.0 && alpha > 0.0) throw std::domain_error("norm unbounded at t=0");
  const Vector w = fractional_weights(sys, alpha);
  return w.cwiseProduct((sys.eigenvalues() * t).array().exp().matrix()).maxCoeff();
}

double frac_constant(const DiagonalSemigroup& sys, double alpha, double kappa) {
  if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("smoothing exponent must lie in [0, 1)");
  if (!(kappa > sys.growth_bound())) throw std::invalid_argument("kappa must exceed the growth bound");
  const Vector w = fractional_weights(sys, alpha);
  double c = 0.0;
  for (Eigen::Index n = 0; n < w.size(); ++n) {
    const double beta = kappa - sys.eigenvalues()(n);
    // sup_t t^a e^{-beta t} = (a / (e beta))^a
    const double s = alpha == 0.0 ? 1.0 : std::pow(alpha / (std::exp(1.0) * beta), alpha);
    c = std::max(c, w(n) * s);
  }
  return c;
}

double frac_constant_dyadic(const DiagonalSemigroup& sys, double alpha, double kappa, int max_level) {
  double c = 0.0;
  for (int k = 0; k <= max_level; ++k) {
    const double t = std::ldexp(1.0, -k);
    c = std::max(c, std::pow(t, alpha) * frac_T_norm(sys, alpha, t) * std::exp(-kappa * t));
  }
  return c;
}

}  // namespace mildflow
