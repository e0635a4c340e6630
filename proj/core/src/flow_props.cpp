#include "mildflow/flow_props.hpp"

#include "mildflow/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mildflow {

SpectralState random_state(const EvolutionSystem& sys, double radius, double decay, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector c(static_cast<Eigen::Index>(sys.size()));
  const Vector& w = sys.weights();
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    c(n) = normal(rng) * std::pow(static_cast<double>(n + 1), -decay);
    if (w.size() != 0) c(n) /= w(n);
  }
  SpectralState x(c);
  const double nrm = sys.working_norm(x);
  if (nrm == 0.0) return x;
  return (radius * unit(rng) / nrm) * x;
}

InputSignal random_input(std::size_t dim, double horizon, int cells, double radius, std::mt19937_64& rng) {
  if (cells < 1) throw std::invalid_argument("random input needs at least one cell");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> grid;
  std::vector<Vector> values;
  for (int c = 0; c <= cells; ++c) grid.push_back(horizon * c / cells);
  grid.back() = horizon;
  for (int c = 0; c < cells; ++c) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const double n = v.norm();
    values.push_back(n == 0.0 ? v : Vector(v * (radius * unit(rng) / n)));
  }
  return InputSignal(std::move(grid), std::move(values));
}

namespace {

SpectralState corner_state(const EvolutionSystem& sys, double radius) {
  SpectralState e = SpectralState::unit(sys.size(), 0);
  return (radius / sys.working_norm(e)) * e;
}

InputSignal corner_input(std::size_t dim, double horizon, double radius) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(0) = radius;
  return InputSignal::constant(v, horizon);
}

double sup_working(const EvolutionSystem& sys, const Trajectory& tr) {
  double s = 0.0;
  for (const auto& x : tr.states) s = std::max(s, sys.working_norm(x));
  return s;
}

double max_increment(const EvolutionSystem& sys, const Trajectory& tr) {
  double s = 0.0;
  for (std::size_t i = 1; i < tr.states.size(); ++i) s = std::max(s, sys.working_norm(tr.states[i] - tr.states[i - 1]));
  return s;
}

SolverConfig with_checkpoints(SolverConfig cfg, const std::vector<double>& extra) {
  cfg.checkpoints.insert(cfg.checkpoints.end(), extra.begin(), extra.end());
  return cfg;
}

std::vector<double> uniform_times(double tau, int points) {
  std::vector<double> t;
  for (int k = 1; k <= points; ++k) t.push_back(k == points ? tau : tau * k / points);
  return t;
}

void keep_worst(PropertyReport& rep, double ratio, std::vector<std::pair<std::string, double>> witness) {
  if (ratio > rep.worst_ratio || rep.witness.empty()) {
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    rep.witness = std::move(witness);
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

CocycleResiduals cocycle_residuals(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u,
                                   double t, double h, const SolverConfig& cfg) {
  CocycleResiduals out;
  const InputSignal tail = u.shift(t);
  for (int k = 0; k < 3; ++k) {
    SolverConfig c = cfg;
    c.substeps_per_window = cfg.substeps_per_window << k;
    const Trajectory aligned = solve_system(sys, x0, u, t + h, with_checkpoints(c, {t}));
    const Trajectory free_run = solve_system(sys, x0, u, t + h, c);
    if (aligned.status != TrajectoryStatus::completed || free_run.status != TrajectoryStatus::completed)
      throw std::runtime_error("cocycle sample did not complete");
    const Trajectory restart = solve_system(sys, aligned.state_at(t), tail, h, c);
    if (restart.status != TrajectoryStatus::completed) throw std::runtime_error("cocycle restart did not complete");
    if (k == 0) out.aligned = sys.working_norm(aligned.final_state() - restart.final_state());
    out.unaligned.push_back(sys.working_norm(free_run.final_state() - restart.final_state()));
  }
  double s = 0.0;
  for (int k = 0; k < 2; ++k) s += std::log2(out.unaligned[k] / out.unaligned[k + 1]);
  out.slope = s / 2.0;
  return out;
}

std::vector<PropertyReport> check_axioms(const EvolutionSystem& sys, double tau, const SampleConfig& samples,
                                         const SolverConfig& cfg) {
  std::mt19937_64 rng(samples.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PropertyReport identity{"identity"}, causality{"causality"}, continuity{"continuity"}, cocycle{"cocycle"};
  for (auto* r : {&identity, &causality, &continuity, &cocycle}) r->tolerance = samples.report_tolerance;
  std::vector<double> slopes;
  double max_unaligned = 0.0;
  const double stitch = 10.0 * cfg.picard_tol;

  for (std::size_t i = 0; i < samples.count; ++i) {
    const SpectralState x0 = i == 0 ? corner_state(sys, samples.state_radius)
                                    : random_state(sys, samples.state_radius, samples.coefficient_decay, rng);
    const InputSignal u = i == 0 ? corner_input(sys.input_dim(), tau, samples.input_radius)
                                 : random_input(sys.input_dim(), tau, samples.input_cells, samples.input_radius, rng);
    const double t = tau * (0.2 + 0.4 * unit(rng));
    const double h = tau * (0.1 + 0.3 * unit(rng));
    const auto idx = static_cast<double>(i);

    // identity: phi(0, x, u) = x
    const Trajectory first = solve_system(sys, x0, u, t, cfg);
    const double id_diff = sys.working_norm(first.states.front() - x0);
    keep_worst(identity, id_diff / (stitch * std::max(1.0, sys.working_norm(x0))), {{"sample", idx}, {"residual", id_diff}});
    ++identity.samples;

    // causality: truncating u after t leaves [0, t] unchanged
    const Trajectory full = solve_system(sys, x0, u, t + h, with_checkpoints(cfg, {t}));
    if (first.status != TrajectoryStatus::completed || full.status != TrajectoryStatus::completed) {
      for (auto* r : {&causality, &continuity, &cocycle}) {
        r->applicable = false;
        r->note = "trajectory did not complete on the sampled horizon";
      }
      continue;
    }
    const Trajectory cut = solve_system(sys, x0, u.restrict_to(t), t, cfg);
    const double c_diff = sys.working_norm(full.state_at(t) - cut.final_state());
    keep_worst(causality, c_diff / (stitch * std::max(1.0, sys.working_norm(cut.final_state()))),
               {{"sample", idx}, {"t", t}, {"residual", c_diff}});
    ++causality.samples;

    // continuity in t: the largest node increment shrinks under refinement
    std::vector<double> inc;
    for (int k = 0; k < 3; ++k) {
      SolverConfig c = cfg;
      c.substeps_per_window = cfg.substeps_per_window << k;
      inc.push_back(max_increment(sys, solve_system(sys, x0, u, t + h, c)));
    }
    const double cont = inc[0] == 0.0 ? 0.0 : std::max(inc[1] / inc[0], inc[2] / std::max(inc[1], 1e-300));
    keep_worst(continuity, inc[0] == 0.0 ? 0.0 : cont,
               {{"sample", idx}, {"increment_S", inc[0]}, {"increment_2S", inc[1]}, {"increment_4S", inc[2]}});
    ++continuity.samples;

    // cocycle
    const CocycleResiduals res = cocycle_residuals(sys, x0, u, t, h, cfg);
    const double scale = std::max(1.0, sys.working_norm(full.final_state()));
    keep_worst(cocycle, res.aligned / (stitch * scale),
               {{"sample", idx}, {"t", t}, {"h", h}, {"aligned_residual", res.aligned}});
    max_unaligned = std::max(max_unaligned, *std::max_element(res.unaligned.begin(), res.unaligned.end()));
    if (res.unaligned[0] > 1e3 * stitch * scale) slopes.push_back(res.slope);
    ++cocycle.samples;
  }
  cocycle.details.emplace_back("median_refinement_slope", median(slopes));
  cocycle.details.emplace_back("slope_samples", static_cast<double>(slopes.size()));
  cocycle.details.emplace_back("max_unaligned_residual", max_unaligned);
  cocycle.details.emplace_back("slope_samples", static_cast<double>(slopes.size()));
  identity.note = "phi(0, x, u) = x";
  causality.note = "input truncation after t; ratio = residual / (10 picard_tol)";
  continuity.note = "max node increment under substep doubling; ratio = increment(2S)/increment(S)";
  if (cocycle.applicable) cocycle.note = "aligned stitching residual / (10 picard_tol); unaligned residual refinement slope in details";
  return {identity, causality, continuity, cocycle};
}

PropertyReport check_deviation(const EvolutionSystem& sys, const SpectralState& x1, const SpectralState& x2,
                               const InputSignal& u, double tau, const SolverConfig& cfg, int grid_points) {
  PropertyReport rep{"deviation"};
  const std::vector<double> times = uniform_times(tau, grid_points);
  const SolverConfig c = with_checkpoints(cfg, times);
  const Trajectory t1r = solve_system(sys, x1, u, tau, c);
  const Trajectory t2r = solve_system(sys, x2, u, tau, c);
  if (t1r.status != TrajectoryStatus::completed || t2r.status != TrajectoryStatus::completed) {
    rep.applicable = false;
    rep.note = "inapplicable: trajectory blow-up before tau";
    return rep;
  }
  const double K = std::max({sup_working(sys, t1r), sup_working(sys, t2r), u.sup_norm(0.0, tau)});
  const double L = sys.f().lipschitz(K);
  const double t1 = certified_window(sys, L);
  const double M = sys.M();
  const double R = sys.lambda() + std::log(2.0 * M) / t1;
  const double dx = sys.working_norm(x1 - x2);
  const double slack = 10.0 * cfg.picard_tol * std::max(1.0, K);
  std::vector<double> all{0.0};
  all.insert(all.end(), times.begin(), times.end());
  for (double t : all) {
    const double diff = sys.working_norm(t1r.state_at(t) - t2r.state_at(t));
    const double bound = 2.0 * M * dx * std::exp(R * t);
    keep_worst(rep, diff / (bound + slack), {{"t", t}, {"deviation", diff}, {"bound", bound}});
    ++rep.samples;
  }
  rep.details = {{"K", K}, {"L", L}, {"t1", t1}, {"R", R}};
  return rep;
}

PropertyReport check_deviation_sampled(const EvolutionSystem& sys, double tau, const SampleConfig& samples,
                                       const SolverConfig& cfg) {
  std::mt19937_64 rng(samples.seed);
  PropertyReport rep{"deviation"};
  rep.tolerance = samples.report_tolerance;
  std::size_t inapplicable = 0;
  for (std::size_t i = 0; i < samples.count; ++i) {
    const SpectralState x1 = i == 0 ? corner_state(sys, samples.state_radius)
                                    : random_state(sys, samples.state_radius, samples.coefficient_decay, rng);
    const SpectralState x2 = i == 0 ? SpectralState(sys.size())
                                    : random_state(sys, samples.state_radius, samples.coefficient_decay, rng);
    const InputSignal u = random_input(sys.input_dim(), tau, samples.input_cells, samples.input_radius, rng);
    const PropertyReport r = check_deviation(sys, x1, x2, u, tau, cfg);
    if (!r.applicable) {
      ++inapplicable;
      continue;
    }
    if (r.worst_ratio >= rep.worst_ratio) {
      auto w = r.witness;
      w.emplace_back("pair", static_cast<double>(i));
      rep.witness = w;
      rep.worst_ratio = r.worst_ratio;
    }
    ++rep.samples;
  }
  rep.details.emplace_back("inapplicable_pairs", static_cast<double>(inapplicable));
  rep.note = "|phi(t,x1,u) - phi(t,x2,u)| / (2M|x1-x2| e^{Rt}), R = lambda + ln(2M)/t1";
  return rep;
}

PropertyReport check_continuous_dependence(const EvolutionSystem& sys, const SpectralState& x1, const InputSignal& u1,
                                           const SpectralState& x2, const InputSignal& u2, double tau,
                                           const SolverConfig& cfg, int grid_points) {
  if (!sys.f().input_modulus) throw std::invalid_argument("no input modulus declared");
  PropertyReport rep{"continuous_dependence"};
  const std::vector<double> times = uniform_times(tau, grid_points);
  const SolverConfig c = with_checkpoints(cfg, times);
  const Trajectory r1 = solve_system(sys, x1, u1, tau, c);
  const Trajectory r2 = solve_system(sys, x2, u2, tau, c);
  if (r1.status != TrajectoryStatus::completed || r2.status != TrajectoryStatus::completed) {
    rep.applicable = false;
    rep.note = "inapplicable: trajectory blow-up before tau";
    return rep;
  }
  const double K = std::max({sup_working(sys, r1), sup_working(sys, r2), u1.sup_norm(0.0, tau), u2.sup_norm(0.0, tau)});
  const double L = sys.f().lipschitz(K);
  const double t1 = certified_window(sys, L);
  const double grow = sys.M() * std::exp(sys.lambda() * t1);
  const double h = input_bound(sys, t1);
  const double du = (u1 - u2).sup_norm(0.0, tau);
  const double q = (*sys.f().input_modulus)(du);
  const double dx = sys.working_norm(x1 - x2);
  const double slack = 10.0 * cfg.picard_tol * std::max(1.0, K);

  std::vector<double> D{dx};
  auto bound_at = [&](double t) {
    if (t == 0.0) return dx;
    const auto k = static_cast<std::size_t>(std::ceil(t / t1 - 1e-12));
    while (D.size() <= k) D.push_back(2.0 * grow * D.back() + 2.0 * h * du + q);
    return D[k];
  };
  for (double t : times) {
    const double diff = sys.working_norm(r1.state_at(t) - r2.state_at(t));
    const double bound = bound_at(t);
    keep_worst(rep, diff / (bound + slack), {{"t", t}, {"deviation", diff}, {"bound", bound}});
    ++rep.samples;
  }
  rep.details = {{"K", K}, {"L", L}, {"t1", t1}, {"h_t1", h}, {"input_distance", du}, {"first_window_bound", bound_at(std::min(t1, tau))}};
  rep.note = "window estimate 2M e^{lambda t1}|dx| + 2 h_t1 |du| + q(|du|), propagated per window";
  return rep;
}

Nonlinearity saturate(const EvolutionSystem& sys) {
  const Nonlinearity base = sys.f();
  const Vector weights = sys.weights();
  Nonlinearity f;
  f.eval = [base, weights](const SpectralState& x, const Vector& v) {
    const double nx = weights.size() == 0 ? norm_x(x) : weighted_norm(x, weights);
    const double nv = v.norm();
    const SpectralState xs = nx > 1.0 ? (1.0 / nx) * x : x;
    const Vector vs = nv > 1.0 ? Vector(v / nv) : v;
    return base.eval(xs, vs);
  };
  // the radial retraction onto the unit ball is 1-Lipschitz
  const double L1 = base.lipschitz(1.0);
  f.lipschitz = [L1](double) { return L1; };
  f.global_lipschitz = L1;
  f.growth_sigma = base.growth_sigma;
  f.growth_c = base.growth_c;
  f.input_modulus = base.input_modulus;
  f.input_free = base.input_free;
  return f;
}

CepReport check_cep(const EvolutionSystem& sys, const std::vector<double>& eps_grid, const std::vector<double>& h_grid,
                    const SampleConfig& samples, const SolverConfig& cfg) {
  const SpectralState zero(sys.size());
  const Vector u0 = Vector::Zero(static_cast<Eigen::Index>(sys.input_dim()));
  if (norm_x(sys.f().eval(zero, u0)) > 1e-12) throw std::domain_error("origin is not an equilibrium");
  const EvolutionSystem sat = sys.with_nonlinearity(saturate(sys));

  CepReport out;
  out.report.property = "cep";
  out.report.tolerance = samples.report_tolerance;
  constexpr int kLadderDepth = 20;
  for (double eps : eps_grid) {
    for (double h : h_grid) {
      CepCell cell{eps, h, 0.0, false};
      std::mt19937_64 rng(samples.seed);
      double delta = eps;
      for (int level = 0; level <= kLadderDepth && !cell.found; ++level, delta *= 0.5) {
        bool ok = true;
        for (std::size_t i = 0; i < samples.count && ok; ++i) {
          const SpectralState x0 = i == 0 ? corner_state(sat, delta)
                                          : random_state(sat, delta, samples.coefficient_decay, rng);
          const InputSignal u = i == 0 ? corner_input(sat.input_dim(), h, delta)
                                       : random_input(sat.input_dim(), h, samples.input_cells, delta, rng);
          const Trajectory tr = solve_system(sat, x0, u, h, cfg);
          ok = tr.status == TrajectoryStatus::completed && sup_working(sat, tr) <= eps;
          ++out.report.samples;
        }
        if (ok) {
          cell.found = true;
          cell.delta = delta;
        }
      }
      if (!cell.found) {
        out.report.worst_ratio = std::numeric_limits<double>::infinity();
        out.report.witness = {{"eps", eps}, {"h", h}};
      }
      out.cells.push_back(cell);
    }
  }
  out.report.note = "delta ladder eps 2^-k, k <= 20, on the saturated system";
  return out;
}

PropertyReport check_brs(const EvolutionSystem& sys, double C, double tau, const SampleConfig& samples,
                         const SolverConfig& cfg) {
  std::mt19937_64 rng(samples.seed);
  PropertyReport rep{"brs"};
  rep.tolerance = samples.report_tolerance;
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.count; ++i) {
    const SpectralState x0 =
        i == 0 ? corner_state(sys, C) : random_state(sys, C, samples.coefficient_decay, rng);
    const InputSignal u = i == 0 ? corner_input(sys.input_dim(), tau, C)
                                 : random_input(sys.input_dim(), tau, samples.input_cells, C, rng);
    const Trajectory tr = solve_system(sys, x0, u, tau, cfg);
    ++rep.samples;
    if (tr.status == TrajectoryStatus::blowup) {
      rep.worst_ratio = std::numeric_limits<double>::infinity();
      rep.witness = {{"sample", static_cast<double>(i)}, {"x0_norm", sys.working_norm(x0)}, {"blowup_time", tr.blowup_time}};
      rep.note = "blow-up witness: reachability set is unbounded";
      rep.details = {{"sampled_sup", sup}};
      return rep;
    }
    if (tr.status == TrajectoryStatus::failed) {
      rep.applicable = false;
      rep.note = "solver failure: " + tr.failure_reason;
      return rep;
    }
    sup = std::max(sup, sup_working(sys, tr));
  }
  rep.details.emplace_back("sampled_sup", sup);
  if (sys.f().global_lipschitz) {
    const double bound = global_bound(sys, C, C, tau);
    rep.worst_ratio = sup / bound;
    rep.details.emplace_back("global_bound", bound);
    rep.note = "sampled sup / global bound";
  } else {
    rep.note = "no global certificate; sampled sup reported";
  }
  return rep;
}

}  // namespace mildflow
