#include "mildflow/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mildflow {

OperatorClass OperatorClass::smooth_class(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("smooth_class exponent must lie in (0, 1]");
  return {OperatorClassKind::smooth_class, alpha};
}

std::string OperatorClass::describe() const {
  std::ostringstream os;
  switch (kind) {
    case OperatorClassKind::bounded: os << "bounded"; break;
    case OperatorClassKind::q_admissible: os << "q_admissible(" << param << ")"; break;
    case OperatorClassKind::smooth_class: os << "smooth_class(" << param << ")"; break;
  }
  return os.str();
}

InputOperator::InputOperator(Matrix coeffs, OperatorClass cls) : coeffs_(std::move(coeffs)), cls_(cls) {
  if (coeffs_.rows() == 0 || coeffs_.cols() == 0) throw std::invalid_argument("input operator must be nonempty");
  if (!coeffs_.allFinite()) throw std::invalid_argument("input operator coefficients must be finite");
  if (cls_.kind == OperatorClassKind::q_admissible && !(cls_.param >= 1.0))
    throw std::invalid_argument("q must be at least 1");
}

InputOperator InputOperator::identity(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(modes);
  return InputOperator(Matrix::Identity(n, n), OperatorClass::bounded());
}

InputOperator InputOperator::zero(std::size_t modes, std::size_t inputs) {
  return InputOperator(Matrix::Zero(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(inputs)),
                       OperatorClass::bounded());
}

InputOperator InputOperator::column(Vector b, OperatorClass cls) {
  Matrix m(b.size(), 1);
  m.col(0) = b;
  return InputOperator(std::move(m), cls);
}

InputOperator InputOperator::hstack(const InputOperator& a, const InputOperator& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("hstack needs equal mode counts");
  Matrix m(a.coeffs_.rows(), a.coeffs_.cols() + b.coeffs_.cols());
  m << a.coeffs_, b.coeffs_;
  const auto& ca = a.cls_;
  const auto& cb = b.cls_;
  OperatorClass cls = ca;
  if (ca.kind == OperatorClassKind::q_admissible || cb.kind == OperatorClassKind::q_admissible) {
    const double q = std::max(ca.kind == OperatorClassKind::q_admissible ? ca.param : 1.0,
                              cb.kind == OperatorClassKind::q_admissible ? cb.param : 1.0);
    cls = OperatorClass::q_admissible(q);
  } else if (ca.kind == OperatorClassKind::smooth_class && cb.kind == OperatorClassKind::smooth_class) {
    cls = OperatorClass::smooth_class(std::min(ca.param, cb.param));
  } else if (cb.kind == OperatorClassKind::smooth_class) {
    cls = cb;
  }
  return InputOperator(std::move(m), cls);
}

double weighted_operator_norm(const Matrix& C, const Vector& weights) {
  Matrix W = weights.size() == 0 ? C : Matrix(weights.asDiagonal() * C);
  if (W.cols() == 1) return W.col(0).norm();
  if (W.rows() == 1) return W.row(0).norm();
  if (W.rows() == W.cols() && Matrix(W.diagonal().asDiagonal()) == W) return W.diagonal().cwiseAbs().maxCoeff();
  const Matrix G = W.cols() <= W.rows() ? Matrix(W.transpose() * W) : Matrix(W * W.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

LadderVerdict smooth_class_ladder(const DiagonalSemigroup& sys, const InputOperator& B, double alpha) {
  if (B.modes() != sys.size()) throw std::invalid_argument("operator size does not match semigroup");
  const Vector w = fractional_weights(sys, 2.0 * (alpha - 1.0));
  const Vector r = B.row_norms();
  std::vector<double> terms(static_cast<std::size_t>(r.size()));
  for (Eigen::Index n = 0; n < r.size(); ++n) terms[static_cast<std::size_t>(n)] = w(n) * r(n) * r(n);
  return series_ladder(terms);
}

Vector exp_integral(const Vector& mu, double t) {
  Vector out(mu.size());
  for (Eigen::Index n = 0; n < mu.size(); ++n) out(n) = t * phi(1, mu(n) * t);
  return out;
}

SpectralState convolve(const DiagonalSemigroup& sys, const InputOperator& B, const InputSignal& u, double t) {
  if (t < 0.0) throw std::invalid_argument("convolution time must be nonnegative");
  if (u.horizon() < t * (1.0 - 1e-14)) throw std::invalid_argument("input shorter than convolution horizon");
  if (B.modes() != sys.size() || B.inputs() != u.dim()) throw std::invalid_argument("operator/input size mismatch");
  const Vector& mu = sys.eigenvalues();
  Vector out = Vector::Zero(mu.size());
  const auto grid = u.grid();
  for (std::size_t c = 0; c < u.cells() && grid[c] < t; ++c) {
    const double a = grid[c];
    const double b = std::min(grid[c + 1], t);
    const Vector bu = B.apply(u.values()[c]);
    const double width = b - a;
    for (Eigen::Index n = 0; n < mu.size(); ++n) {
      if (bu(n) == 0.0) continue;
      // e^{mu (t-b)} (b-a) phi_1(mu (b-a)) is the stable form of (e^{mu(t-a)} - e^{mu(t-b)})/mu.
      out(n) += bu(n) * std::exp(mu(n) * (t - b)) * width * phi(1, mu(n) * width);
    }
  }
  return SpectralState(std::move(out));
}

SpectralState convolve(const DiagonalSemigroup& sys, const InputOperator& B, const PolynomialSignal& u, double t) {
  if (t < 0.0) throw std::invalid_argument("convolution time must be nonnegative");
  if (B.modes() != sys.size() || B.inputs() != u.dim()) throw std::invalid_argument("operator/input size mismatch");
  const Vector& mu = sys.eigenvalues();
  Vector out = Vector::Zero(mu.size());
  if (t == 0.0) return SpectralState(std::move(out));
  double fact = 1.0;      // k!
  double tpow = t;        // t^{k+1}
  for (std::size_t k = 0; k <= u.degree(); ++k) {
    if (k > 0) {
      fact *= static_cast<double>(k);
      tpow *= t;
    }
    const Vector bc = B.apply(u.coefficients()[k]);
    for (Eigen::Index n = 0; n < mu.size(); ++n)
      out(n) += bc(n) * fact * tpow * phi(static_cast<int>(k) + 1, mu(n) * t);
  }
  return SpectralState(std::move(out));
}

double bounded_convolution_bound(double M, double lambda, double norm, double t) {
  if (t <= 0.0) return 0.0;
  return M * norm * t * phi(1, lambda * t);
}

double truncation_h_inf(const DiagonalSemigroup& sys, const InputOperator& B, double t, const Vector& weights) {
  if (t <= 0.0) return 0.0;
  const Vector r = B.row_norms();
  Vector e = exp_integral(sys.eigenvalues(), t).cwiseProduct(r);
  if (weights.size() != 0) e = e.cwiseProduct(weights);
  return e.norm();
}

double truncation_h_2(const DiagonalSemigroup& sys, const InputOperator& B, double t) {
  if (t <= 0.0) return 0.0;
  const Vector r = B.row_norms();
  const Vector e = exp_integral(2.0 * sys.eigenvalues(), t);
  return std::sqrt(e.cwiseProduct(r.cwiseProduct(r)).sum());
}

double upper_bound_h(const DiagonalSemigroup& sys, const InputOperator& B, double d, double t,
                     std::optional<double> kappa) {
  if (B.declared_class().kind != OperatorClassKind::smooth_class)
    throw std::invalid_argument("upper_bound_h needs a smooth_class operator");
  const double alpha = B.declared_class().param;
  if (d < 0.0 || d >= alpha) throw std::invalid_argument("exponent out of admissible range");
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  if (t == 0.0) return 0.0;
  const double k = kappa.value_or(sys.default_kappa());
  const double c = frac_constant(sys, 1.0 - alpha + d, k);
  const double bn = weighted_operator_norm(B.coeffs(), fractional_weights(sys, alpha - 1.0));
  return c * bn / (alpha - d) * std::pow(t, alpha - d) * std::exp(k * t);
}

double c_constant(const DiagonalSemigroup& sys, const InputOperator& B2, double t) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  switch (B2.declared_class().kind) {
    case OperatorClassKind::bounded:
      return bounded_convolution_bound(sys.M(), sys.lambda(), weighted_operator_norm(B2.coeffs()), t);
    case OperatorClassKind::smooth_class:
      return upper_bound_h(sys, B2, 0.0, t);
    case OperatorClassKind::q_admissible:
      break;
  }
  throw std::domain_error("B2 must be zero-class");
}

namespace {

// max over s in {+-1}^k of |sum_c s_c v_c| via the Gram matrix.
double max_sign_pattern(const Matrix& V) {
  const Matrix G = V.transpose() * V;
  const int k = static_cast<int>(G.rows());
  double best = 0.0;
  const std::uint32_t patterns = 1u << (k - 1);  // s_0 = +1 by symmetry
  Vector s(k);
  for (std::uint32_t p = 0; p < patterns; ++p) {
    s(0) = 1.0;
    for (int c = 1; c < k; ++c) s(c) = (p >> (c - 1)) & 1u ? -1.0 : 1.0;
    best = std::max(best, s.dot(G * s));
  }
  return std::sqrt(best);
}

}  // namespace

HBracket measure_h(const DiagonalSemigroup& sys, const InputOperator& B, double t, double q, int probe_cells) {
  if (!(t > 0.0)) throw std::invalid_argument("measure_h needs t > 0");
  if (probe_cells < 1 || probe_cells > 20) throw std::invalid_argument("probe_cells must lie in [1, 20]");
  const bool inf = std::isinf(q);
  if (!inf && q != 2.0) throw std::invalid_argument("measure_h supports q = 2 or q = infinity");
  HBracket out;
  if (B.is_zero()) return out;

  const Vector& mu = sys.eigenvalues();
  const double width = t / probe_cells;
  // per-mode response of a unit constant input on cell c
  Matrix cell(mu.size(), probe_cells);
  for (int c = 0; c < probe_cells; ++c) {
    const double b = (c + 1 == probe_cells) ? t : (c + 1) * width;
    for (Eigen::Index n = 0; n < mu.size(); ++n)
      cell(n, c) = std::exp(mu(n) * (t - b)) * width * phi(1, mu(n) * width);
  }
  for (Eigen::Index j = 0; j < B.coeffs().cols(); ++j) {
    const Matrix V = B.coeffs().col(j).asDiagonal() * cell;
    if (inf) {
      out.lower = std::max(out.lower, max_sign_pattern(V));
    } else {
      for (int c = 0; c < probe_cells; ++c) out.lower = std::max(out.lower, V.col(c).norm() / std::sqrt(width));
    }
  }

  if (!inf) {
    out.upper = truncation_h_2(sys, B, t);
  } else {
    switch (B.declared_class().kind) {
      case OperatorClassKind::bounded:
        out.upper = bounded_convolution_bound(sys.M(), sys.lambda(), weighted_operator_norm(B.coeffs()), t);
        break;
      case OperatorClassKind::smooth_class: out.upper = upper_bound_h(sys, B, 0.0, t); break;
      case OperatorClassKind::q_admissible: out.upper = truncation_h_inf(sys, B, t); break;
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("log-log slope needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AdmissibilityEstimate estimate_h(const DiagonalSemigroup& sys, const InputOperator& B, int k_min, int k_max,
                                 double q, int probe_cells) {
  if (k_max < k_min) throw std::invalid_argument("empty dyadic range");
  AdmissibilityEstimate est;
  double running = 0.0;
  for (int k = k_max; k >= k_min; --k) {
    const double t = std::ldexp(1.0, -k);
    const HBracket hb = measure_h(sys, B, t, q, probe_cells);
    running = std::max(running, hb.lower);
    est.t_grid.push_back(t);
    est.h_values.push_back(running);
    est.upper.push_back(hb.upper);
  }
  if (est.t_grid.size() >= 2 && running > 0.0 && est.h_values.front() > 0.0)
    est.fitted_exponent = loglog_slope(est.t_grid, est.h_values);
  return est;
}

}  // namespace mildflow
