#pragma once

#include "mildflow/admissibility.hpp"
#include "mildflow/core.hpp"
#include "mildflow/semigroup.hpp"
#include "mildflow/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mildflow {

/// Boundary control system x' = A^ x, R^ x = u with a user-provided lifting R.
///
/// `lifting` and `formal_AR` return spectral coefficients of R u and A^ R u.
/// `boundary_of_lifting` evaluates R^(R u) from the lifting profile itself,
/// since the truncated eigen-expansion cannot see boundary values.
struct BoundaryControlSystem {
  DiagonalSemigroup semigroup;
  std::size_t input_dim = 1;
  std::function<SpectralState(const Vector&)> lifting;
  std::function<SpectralState(const Vector&)> formal_AR;
  std::function<Vector(const Vector&)> boundary_of_lifting;  // optional

  /// Heat equation on (0, pi), Dirichlet input at z = 0, R u = u (1 - z/pi), A^ R = 0.
  static BoundaryControlSystem dirichlet_heat_0_pi(std::size_t modes);
  /// Coefficient tables (modes x input_dim) for R and A^ R.
  static BoundaryControlSystem from_tables(DiagonalSemigroup sg, Matrix R, Matrix AR);

  Matrix lifting_matrix() const;
  Matrix formal_AR_matrix() const;
};

/// B = A^ R - A_{-1} R, with the declared class found by a weighted-norm ladder scan.
InputOperator make_input_operator(const BoundaryControlSystem& bcs, std::uint64_t seed = 7);

struct CrosscheckReport {
  std::vector<double> times;
  double max_ab = 0.0;  // sup_t |x_a(t) - x_b(t)|
  double max_ac = 0.0;
  double max_bc = 0.0;
  double tolerance = 1e-6;
  std::string solver_status;

  double max_difference() const { return std::max({max_ab, max_ac, max_bc}); }
  bool passed() const { return solver_status == "completed" && max_difference() <= tolerance; }
};

/// Evaluates the three classical representations of the solution for a
/// polynomial input: (a) lifting form, (b) A-integral form, (c) mild form via
/// B = A^ R - A_{-1} R, the last one computed by the solver.
CrosscheckReport representation_crosscheck(const BoundaryControlSystem& bcs, const Nonlinearity& f,
                                           const SpectralState& x0, const PolynomialSignal& u, double tau,
                                           const SolverConfig& cfg = {}, double tolerance = 1e-6);

}  // namespace mildflow
