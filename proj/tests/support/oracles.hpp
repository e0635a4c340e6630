#pragma once

// Reference computations used by the tests. Nothing here calls into the library
// numerics: closed forms, quadrature and RK4 are written out directly.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// int_a^b e^{mu (t - s)} ds for a <= b <= t.
inline double exp_cell(double mu, double t, double a, double b) {
  if (mu == 0.0) return b - a;
  return std::exp(mu * (t - b)) * std::expm1(mu * (b - a)) / mu;
}

/// Variation of constants for x' = mu x + g(t), g piecewise constant on `grid`.
inline double mode_response(double mu, double x0, const std::vector<double>& grid, const std::vector<double>& g,
                            double t) {
  double x = std::exp(mu * t) * x0;
  for (std::size_t i = 0; i + 1 < grid.size() && grid[i] < t; ++i)
    x += g[i] * exp_cell(mu, t, grid[i], std::min(grid[i + 1], t));
  return x;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Classical RK4 on x' = F(t, x).
inline Vec rk4(const std::function<Vec(double, const Vec&)>& F, Vec x, double t_end, int steps) {
  const double h = t_end / steps;
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    const Vec k1 = F(t, x);
    const Vec k2 = F(t + h / 2, x + h / 2 * k1);
    const Vec k3 = F(t + h / 2, x + h / 2 * k2);
    const Vec k4 = F(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

/// exp(A) by scaling and squaring of a long Taylor series.
inline Mat expm(const Mat& A) {
  const double n = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (n / std::pow(2.0, s) > 0.25) ++s;
  const Mat X = A / std::pow(2.0, s);
  Mat term = Mat::Identity(A.rows(), A.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * X / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline double basis(int n, double z) { return std::sqrt(2.0 / std::numbers::pi) * std::sin(n * z); }

/// sum_n x_n sqrt(2/pi) sin(n z).
inline double synth(const Vec& x, double z) {
  double s = 0.0;
  for (int n = 1; n <= x.size(); ++n) s += x(n - 1) * basis(n, z);
  return s;
}

inline double synth_dz(const Vec& x, double z) {
  double s = 0.0;
  for (int n = 1; n <= x.size(); ++n) s += x(n - 1) * n * std::sqrt(2.0 / std::numbers::pi) * std::cos(n * z);
  return s;
}

/// Sine coefficients of g on (0, pi) by the trapezoid rule on `points` intervals
/// (exact for trigonometric polynomials of degree below points).
inline Vec project(const std::function<double(double)>& g, int modes, int points) {
  Vec c = Vec::Zero(modes);
  const double dz = std::numbers::pi / points;
  for (int j = 1; j < points; ++j) {
    const double z = j * dz;
    const double gz = g(z);
    for (int n = 1; n <= modes; ++n) c(n - 1) += gz * basis(n, z) * dz;
  }
  return c;
}

/// |(omega - A)^alpha e^{tA}| for A = diag(mu), by direct scan.
inline double frac_norm(const Vec& mu, double omega, double alpha, double t) {
  double m = 0.0;
  for (double v : mu) m = std::max(m, std::pow(omega - v, alpha) * std::exp(v * t));
  return m;
}

}  // namespace oracle
