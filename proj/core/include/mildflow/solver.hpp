#pragma once

#include "mildflow/admissibility.hpp"
#include "mildflow/core.hpp"
#include "mildflow/semigroup.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mildflow {

enum class SystemMode { general, analytic, bounded_generator };

struct AnalyticOptions {
  std::optional<double> kappa;
  /// Accept an input operator whose declared class is weaker than
  /// smooth_class(alpha + eps). The solver's input bound is computed on the
  /// truncation, so it stays valid; only the infinite-dimensional claim is waived.
  /// Waived systems skip the X_alpha ladder check on initial states.
  bool waive_input_regularity = false;
};

/// x' = A x + B2 f(x, u) + B u in spectral coordinates.
///
/// general: diagonal A, state space X.
/// analytic: diagonal A, state space X_alpha, f Lipschitz from X_alpha to X.
/// bounded_generator: dense matrix A of small dimension.
class EvolutionSystem {
 public:
  static EvolutionSystem general(DiagonalSemigroup sg, InputOperator B, Nonlinearity f,
                                 std::optional<InputOperator> B2 = {});
  static EvolutionSystem analytic(DiagonalSemigroup sg, double alpha, InputOperator B, Nonlinearity f,
                                  std::optional<InputOperator> B2 = {}, AnalyticOptions opts = {});
  static EvolutionSystem bounded_generator(DenseGenerator A, InputOperator B, Nonlinearity f,
                                           std::optional<InputOperator> B2 = {});

  SystemMode mode() const { return mode_; }
  double alpha() const { return alpha_; }
  bool diagonal() const { return sg_.has_value(); }
  const DiagonalSemigroup& semigroup() const;
  const DenseGenerator& dense() const;
  const InputOperator& B() const { return B_; }
  const InputOperator& B2() const { return B2_; }
  const Nonlinearity& f() const { return f_; }
  std::size_t size() const { return B_.modes(); }
  std::size_t input_dim() const { return B_.inputs(); }
  double M() const;
  double lambda() const;
  double kappa() const { return kappa_; }
  /// (omega - mu_n)^alpha for analytic mode, empty otherwise.
  const Vector& weights() const { return weights_; }
  /// True when B was admitted under the regularity waiver.
  bool irregular_input() const { return irregular_input_; }

  /// Norm of the solver's working space (X_alpha in analytic mode).
  double working_norm(const SpectralState& x) const;

  EvolutionSystem with_nonlinearity(Nonlinearity f) const;

 private:
  EvolutionSystem(SystemMode mode, InputOperator B, InputOperator B2, Nonlinearity f)
      : mode_(mode), B_(std::move(B)), B2_(std::move(B2)), f_(std::move(f)) {}
  void validate() const;

  SystemMode mode_;
  std::optional<DiagonalSemigroup> sg_;
  std::optional<DenseGenerator> dense_;
  InputOperator B_;
  InputOperator B2_;
  Nonlinearity f_;
  double alpha_ = 0.0;
  bool irregular_input_ = false;
  double kappa_ = 0.0;
  Vector weights_;
};

struct SolverConfig {
  int substeps_per_window = 16;
  double picard_tol = 1e-10;
  int max_picard_iters = 60;
  double blowup_threshold = 1e6;
  double contraction_target = 0.5;
  int max_window_bisections = 40;
  double max_window = 1.0;
  double min_window = 1e-9;
  bool record_substeps = true;
  /// Times the window grid must hit exactly (in addition to t_end).
  std::vector<double> checkpoints;

  void validate() const;
};

struct WindowDiagnostics {
  double t_start = 0.0;
  double width = 0.0;
  double K = 0.0;
  double lipschitz = 0.0;
  double kernel = 0.0;  // c_t, or the singular-kernel bound in analytic mode
  double h = 0.0;
  double contraction_bound = 0.0;  // kernel * lipschitz
  double observed_contraction = 0.0;
  int iterations = 0;
  double fixed_point_residual = 0.0;
};

enum class TrajectoryStatus { completed, blowup, failed };

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralState> states;  // X coordinates
  std::vector<double> window_boundaries;
  std::vector<WindowDiagnostics> windows;
  TrajectoryStatus status = TrajectoryStatus::completed;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  std::string failure_reason;
  double alpha = 0.0;
  Vector alpha_weights;  // empty unless analytic

  double final_time() const { return times.back(); }
  const SpectralState& final_state() const { return states.back(); }
  /// State at a recorded time (exact match up to 1e-12 relative); throws otherwise.
  const SpectralState& state_at(double t) const;
  double norm_x(std::size_t i) const { return mildflow::norm_x(states[i]); }
  double norm_alpha(std::size_t i) const;
  double sup_norm_x() const;
  std::string status_name() const;
};

/// Outcome of step selection.
struct StepSelection {
  enum class Outcome { ok, below_min_window, exhausted } outcome = Outcome::ok;
  double t1 = 0.0;
  double K = 0.0;
  double lipschitz = 0.0;
  double kernel = 0.0;
  double h = 0.0;
};

/// Largest t1 = cap / 2^k such that the window is certified for a start state of
/// working norm `start_norm` and inputs bounded by `u_sup`:
///   kernel(t1) L(K) <= theta  and  kernel(t1) (L(K) K + |f(0,u)|) <= delta,
/// with the Picard ball centred at the free trajectory T(.)w, radius h_{t1} u_sup + delta,
/// K = M e^{lambda t1} start_norm + radius, and delta the first feasible value on
/// the ladder max(1, start_norm) 4^{-j}, j = 0..10.
StepSelection select_step(const EvolutionSystem& sys, double start_norm, double u_sup, const SolverConfig& cfg,
                          double cap = 1.0);

/// Kernel constant of the nonlinear convolution on [0, t] in the working norm.
double kernel_bound(const EvolutionSystem& sys, double t);
/// Certified infinity-admissibility constant of B in the working norm.
double input_bound(const EvolutionSystem& sys, double t);
/// Largest dyadic t <= cap with kernel_bound(t) * lipschitz <= theta.
double certified_window(const EvolutionSystem& sys, double lipschitz, double theta = 0.5, double cap = 1.0);

/// Result of a single Picard window, states in working coordinates.
struct WindowSolution {
  std::vector<double> nodes;           // relative times, nodes.front() = 0
  std::vector<SpectralState> states;   // working coordinates
  WindowDiagnostics diagnostics;
  TrajectoryStatus status = TrajectoryStatus::completed;
  double blowup_node = std::numeric_limits<double>::quiet_NaN();
  std::string failure_reason;
};

/// One Picard window of length t1 from working-coordinate start w with input u (starting at 0).
WindowSolution picard_window(const EvolutionSystem& sys, const SpectralState& w, const InputSignal& u, double t1,
                             const SolverConfig& cfg);

Trajectory solve(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                 const SolverConfig& cfg = {});
Trajectory solve(const EvolutionSystem& sys, const SpectralState& x0, const PolynomialSignal& u, double t_end,
                 const SolverConfig& cfg = {});
Trajectory solve_analytic(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                          const SolverConfig& cfg = {});
/// Dispatches on the system's mode.
Trajectory solve_system(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                        const SolverConfig& cfg = {});

/// A-priori bound on sup_{s <= t} |phi(s, x0, u)| from the global Lipschitz
/// (linear-growth) certificate, iterated window by window. Norms in the working space.
double global_bound(const EvolutionSystem& sys, double x0_norm, double u_norm, double t, double theta = 0.5);

}  // namespace mildflow
