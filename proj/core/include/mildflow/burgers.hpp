#pragma once

#include "mildflow/admissibility.hpp"
#include "mildflow/core.hpp"
#include "mildflow/semigroup.hpp"
#include "mildflow/solver.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mildflow {

/// Local reaction term f(z, y) of x_t = x_zz - x x_z + f(z, x) + u on (0, pi),
/// with envelope |f(z, y)| <= h(z) g(|y|) and a Lipschitz constant in y on |y| <= R.
struct LocalTerm {
  std::string name = "zero";
  std::function<double(double, double)> f;
  std::function<double(double)> h;
  std::function<double(double)> g;
  std::function<double(double)> lipschitz;

  static LocalTerm zero();
  /// f = a sin(z) arctan(y); h = a sin z, g(r) = r, L = a.
  static LocalTerm sin_arctan(double a);
  /// f = -a y^3; h = a, g(r) = r^3, L(R) = 3 a R^2.
  static LocalTerm cubic(double a);
  /// f = a sin z; h = a sin z, g = 1, L = 0.
  static LocalTerm source(double a);
};

/// Spectral Burgers system with Dirichlet conditions on (0, pi), eigenbasis
/// sqrt(2/pi) sin(nz), and a Dirichlet boundary input at z = 0.
///
/// Physical grid: z_j = j pi / J, j = 1..2N+1, J = 2N + 2. Products of two
/// N-mode fields are projected exactly on this grid (J > 3N/2).
class BurgersSystem {
 public:
  explicit BurgersSystem(std::size_t modes, LocalTerm local = LocalTerm::zero(), double boundary_alpha = 0.2);

  std::size_t modes() const;
  const std::vector<double>& grid() const;
  const LocalTerm& local() const;
  const DiagonalSemigroup& semigroup() const;

  std::vector<double> to_physical(const SpectralState& x) const;
  std::vector<double> derivative_physical(const SpectralState& x) const;
  SpectralState from_physical(const std::vector<double>& values) const;

  /// F(x) = P_N(-x x' + f(., x)).
  SpectralState nonlinearity_F(const SpectralState& x) const;

  /// (sum_n n^2 x_n^2)^{1/2} = |x'|_{L^2}.
  static double norm_h1(const SpectralState& x);
  /// Grid L^2 norm of the envelope h.
  double envelope_norm() const;

  struct Check {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds(double slack = 1e-8) const { return lhs <= rhs + slack; }
  };
  /// max |x| on the grid vs sqrt(pi) |x|_{1/2}.
  Check certify_sup_bound(const SpectralState& x) const;
  /// |F(x)| vs sqrt(2 pi) |x|^2_{1/2} + sqrt(2) |h| g(sqrt(pi) |x|_{1/2}).
  Check certify_F_bound(const SpectralState& x) const;
  /// |F(x1) - F(x2)| vs (sqrt(pi)(|x1|_{1/2} + |x2|_{1/2}) + pi L) |x1 - x2|_{1/2}.
  Check certify_lipschitz(const SpectralState& x1, const SpectralState& x2) const;

  /// Lifting R d = d (1 - z/pi): coefficients sqrt(2/pi)/n.
  Vector lifting_coeffs() const;
  /// b_n = n sqrt(2/pi), declared smooth_class(boundary_alpha).
  InputOperator boundary_operator() const;

  /// F with Lipschitz constant in X_{1/2} (omega = 1 weights).
  Nonlinearity nonlinearity() const;
  /// Analytic(1/2) system, B = [I | b] acting on (u, d).
  EvolutionSystem system() const;
  /// Same dynamics in general mode on X, with the X-Lipschitz constant N L(N r).
  EvolutionSystem system_general() const;

  /// u is the distributed input (N channels, spectral), d the boundary value.
  Trajectory simulate(const SpectralState& x0, const InputSignal& u, const InputSignal& d, double t_end,
                      const SolverConfig& cfg = {}) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
  double boundary_alpha_;
};

}  // namespace mildflow
