#pragma once

#include "mildflow/core.hpp"
#include "mildflow/solver.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mildflow {

/// Outcome of a sampled property check. `worst_ratio` is measured / certified.
struct PropertyReport {
  PropertyReport() = default;
  explicit PropertyReport(std::string name) : property(std::move(name)) {}

  std::string property;
  std::size_t samples = 0;
  double worst_ratio = 0.0;
  double tolerance = 1e-6;
  bool applicable = true;
  std::string note;
  std::vector<std::pair<std::string, double>> witness;
  std::vector<std::pair<std::string, double>> details;

  bool passed() const { return applicable && worst_ratio <= 1.0 + tolerance; }
  std::string verdict() const { return !applicable ? "inapplicable" : passed() ? "pass" : "fail"; }
};

struct SampleConfig {
  std::size_t count = 20;
  std::uint64_t seed = 1;
  double state_radius = 1.0;   // working norm
  double input_radius = 1.0;   // sup of the U-norm
  double coefficient_decay = 2.0;
  int input_cells = 4;
  double report_tolerance = 1e-6;
};

/// Random state whose working-space coefficients are ~ N(0,1) n^{-decay}, scaled to
/// working norm uniform in [0, radius].
SpectralState random_state(const EvolutionSystem& sys, double radius, double decay, std::mt19937_64& rng);
/// Random piecewise-constant input with `cells` equal cells, each of U-norm <= radius.
InputSignal random_input(std::size_t dim, double horizon, int cells, double radius, std::mt19937_64& rng);

/// Identity, causality, continuity in t and cocycle checks on sampled (x0, u, t, h) in [0, tau].
std::vector<PropertyReport> check_axioms(const EvolutionSystem& sys, double tau, const SampleConfig& samples,
                                         const SolverConfig& cfg = {});

struct CocycleResiduals {
  double aligned = 0.0;              // full run has a window boundary at t
  std::vector<double> unaligned;     // no boundary at t, substeps S0, 2 S0, 4 S0
  double slope = 0.0;                // mean log2 ratio of consecutive unaligned residuals
};

/// Stitching residual |phi(t+h, x0, u) - phi(h, phi(t, x0, u), u(t + .))|.
CocycleResiduals cocycle_residuals(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u,
                                   double t, double h, const SolverConfig& cfg);

/// |phi(t,x1,u) - phi(t,x2,u)| <= 2M |x1 - x2| e^{Rt}, R = lambda + ln(2M)/t1,
/// checked at `grid_points` common times.
PropertyReport check_deviation(const EvolutionSystem& sys, const SpectralState& x1, const SpectralState& x2,
                               const InputSignal& u, double tau, const SolverConfig& cfg = {}, int grid_points = 16);

/// check_deviation over seeded random pairs (first pair is an axis corner).
PropertyReport check_deviation_sampled(const EvolutionSystem& sys, double tau, const SampleConfig& samples,
                                       const SolverConfig& cfg = {});

/// Window estimate 2M e^{lambda t1}|dx| + 2 h_{t1}|du| + q(|du|), propagated over [0, tau].
PropertyReport check_continuous_dependence(const EvolutionSystem& sys, const SpectralState& x1, const InputSignal& u1,
                                           const SpectralState& x2, const InputSignal& u2, double tau,
                                           const SolverConfig& cfg = {}, int grid_points = 16);

/// f(sat(x), sat(u)) with sat(z) = z / max(1, |z|) in the working norm.
Nonlinearity saturate(const EvolutionSystem& sys);

struct CepCell {
  double eps = 0.0;
  double horizon = 0.0;
  double delta = 0.0;  // 0 when not found at the ladder floor
  bool found = false;
};

struct CepReport {
  std::vector<CepCell> cells;
  PropertyReport report;
};

/// Searches delta = eps, eps/2, ..., eps 2^{-20} such that sampled trajectories of the
/// saturated system from B_delta x B_delta stay in B_eps on [0, h].
CepReport check_cep(const EvolutionSystem& sys, const std::vector<double>& eps_grid, const std::vector<double>& h_grid,
                    const SampleConfig& samples, const SolverConfig& cfg = {});

/// Sampled sup of |phi(t, x, u)| over |x| <= C, |u| <= C, t in [0, tau]; compared to
/// global_bound when a global certificate exists. Blow-up is reported as failure.
PropertyReport check_brs(const EvolutionSystem& sys, double C, double tau, const SampleConfig& samples,
                         const SolverConfig& cfg = {});

}  // namespace mildflow
