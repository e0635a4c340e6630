// Prints one PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <mildflow/mildflow.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace mildflow;

namespace {

int failures = 0;

void report(const char* id, const char* what, bool ok, const std::string& detail) {
  std::printf("%s %s %s: %s\n", id, ok ? "PASS" : "FAIL", what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// A criterion that throws is a failure, not a crash.
void criterion(const char* id, const char* what, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream d;
  d.precision(4);
  bool ok = false;
  try {
    ok = body(d);
  } catch (const std::exception& e) {
    d << "exception: " << e.what();
  }
  report(id, what, ok, d.str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EvolutionSystem arctan_system() {
  const std::size_t N = 16;
  return EvolutionSystem::general(DiagonalSemigroup::dirichlet_laplacian_0_pi(N), InputOperator::identity(N),
                                  Nonlinearity::arctan(0.5));
}

BurgersSystem burgers_system() { return BurgersSystem(16, LocalTerm::sin_arctan(0.5)); }

SampleConfig samples(std::size_t count, std::uint64_t seed, double state_radius, double input_radius) {
  SampleConfig s;
  s.count = count;
  s.seed = seed;
  s.state_radius = state_radius;
  s.input_radius = input_radius;
  return s;
}

bool a1(std::ostringstream& d) {
  double worst = 0.0, t512 = 0.0;
  for (std::size_t N : {8u, 64u, 512u}) {
    const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(N);
    Matrix Bc(N, 2);
    Vector x0(N);
    for (std::size_t n = 0; n < N; ++n) {
      Bc(n, 0) = 1.0;
      Bc(n, 1) = std::sin(0.7 * double(n + 1));
      x0(n) = std::pow(n + 1.0, -1.5);
    }
    const EvolutionSystem sys = EvolutionSystem::general(h, InputOperator(Bc, OperatorClass::bounded()),
                                                         Nonlinearity::zero(N));
    const std::vector<double> grid{0.0, 0.1, 0.35, 0.6, 0.62, 1.0};
    std::vector<Vector> vals;
    for (int i = 0; i < 5; ++i) {
      Vector v(2);
      v << std::cos(1.3 * i), (i % 2 ? -1.0 : 2.0);
      vals.push_back(v);
    }
    SolverConfig cfg;
    cfg.checkpoints = {0.05, 0.5, 0.8};
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory tr = solve(sys, SpectralState(x0), InputSignal(grid, vals), 1.0, cfg);
    if (N == 512) t512 = seconds_since(t0);
    if (tr.status != TrajectoryStatus::completed) return false;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      Vector ref(N);
      for (std::size_t n = 0; n < N; ++n) {
        std::vector<double> g;
        for (const Vector& v : vals) g.push_back(Bc.row(n).dot(v));
        ref(n) = oracle::mode_response(h.eigenvalues()(n), x0(n), grid, g, tr.times[i]);
      }
      worst = std::max(worst, (tr.states[i].coeffs() - ref).norm() / ref.norm());
    }
  }
  d << "max relative error " << worst << " over N in {8, 64, 512}, N=512 solve " << t512 << " s";
  return worst <= 1e-10 && t512 < 1.0;
}

bool a2(std::ostringstream& d) {
  const EvolutionSystem sys = EvolutionSystem::general(DiagonalSemigroup::from_eigenvalues(Vector::Zero(1)),
                                                       InputOperator::zero(1, 1), Nonlinearity::scalar_square());
  bool ok = true;
  double prev = 0.0;
  d.precision(8);
  for (double thr : {1e4, 1e5, 1e6}) {
    SolverConfig cfg;
    cfg.blowup_threshold = thr;
    const Trajectory tr = solve(sys, SpectralState(Vector::Ones(1)), InputSignal::zero(1, 2.0), 2.0, cfg);
    const bool hit = tr.status == TrajectoryStatus::blowup;
    ok = ok && hit && std::abs(tr.blowup_time - 1.0) <= 0.01 && tr.blowup_time >= prev;
    d << "t_m(" << thr << ")=" << (hit ? tr.blowup_time : NAN) << " ";
    prev = tr.blowup_time;
  }
  d << "(oracle 1)";
  return ok;
}

bool cocycle_on(const char* name, const EvolutionSystem& sys, double tau, const SampleConfig& sc,
                std::ostringstream& d) {
  const auto reps = check_axioms(sys, tau, sc);
  const PropertyReport& c = reps[3];
  double slope = std::numeric_limits<double>::quiet_NaN(), unaligned = 0.0, measured = 0.0;
  for (const auto& [k, v] : c.details) {
    if (k == "median_refinement_slope") slope = v;
    if (k == "max_unaligned_residual") unaligned = v;
    if (k == "slope_samples") measured = v;
  }
  // aligned residual is normalised by 10 picard_tol (1e-9), far below 1e-6; the
  // unaligned O(h^2) term either stays under 1e-6 or refines at rate >= 1.8
  const bool refined = measured > 0.0 ? slope >= 1.8 : unaligned <= 1e-6;
  const bool ok = c.samples == sc.count && c.passed() && refined;
  d << name << ": aligned ratio " << c.worst_ratio << ", max unaligned " << unaligned << ", refinement slope "
    << slope << " on " << measured << " samples; ";
  return ok;
}

bool a3(std::ostringstream& d) {
  const bool x = cocycle_on("arctan", arctan_system(), 1.0, samples(20, 31, 2.0, 1.0), d);
  const bool y = cocycle_on("burgers", burgers_system().system(), 0.5, samples(20, 32, 1.0, 0.1), d);
  return x && y;
}

bool a4(std::ostringstream& d) {
  const PropertyReport x = check_deviation_sampled(arctan_system(), 2.0, samples(50, 41, 2.0, 1.0));
  const PropertyReport y = check_deviation_sampled(burgers_system().system(), 0.5, samples(50, 42, 1.0, 0.1));
  d << "arctan worst ratio " << x.worst_ratio << " (" << x.samples << " pairs), burgers worst ratio "
    << y.worst_ratio << " (" << y.samples << " pairs)";
  return x.passed() && y.passed() && x.samples == 50 && y.samples == 50;
}

bool a5(std::ostringstream& d) {
  const BurgersSystem b(1024);
  const InputOperator B = b.boundary_operator();
  const AdmissibilityEstimate e =
      estimate_h(b.semigroup(), B, 2, 14, std::numeric_limits<double>::infinity());
  bool dominated = true, shrinking = true;
  for (std::size_t i = 0; i < e.t_grid.size(); ++i) {
    dominated = dominated && e.h_values[i] <= upper_bound_h(b.semigroup(), B, 0.0, e.t_grid[i]);
    if (i > 0) shrinking = shrinking && e.h_values[i - 1] <= e.h_values[i];
  }
  d << "slope " << e.fitted_exponent << ", h(2^-14)=" << e.h_values.front() << ", h(2^-2)=" << e.h_values.back()
    << ", dominated " << (dominated ? "yes" : "no");
  return dominated && shrinking && e.fitted_exponent >= 0.2;
}

bool a6(std::ostringstream& d) {
  const std::size_t N = 128;
  const BurgersSystem cross(N);
  const BurgersSystem full(N, LocalTerm::sin_arctan(1.0));
  const Vector w = fractional_weights(full.semigroup(), 0.5);
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> r(0.0, 5.0);
  auto state = [&] {
    Vector c(N);
    for (std::size_t n = 0; n < N; ++n) c(n) = g(rng) / std::pow(n + 1.0, 1.5);
    return SpectralState(c * (r(rng) / c.cwiseProduct(w).norm()));
  };
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  double worst = 0.0;
  auto tally = [&](const BurgersSystem::Check& c) {
    if (!c.holds(1e-8)) ++violations;
    if (c.rhs > 0.0) worst = std::max(worst, c.lhs / c.rhs);
  };
  SpectralState prev = state();
  for (int i = 0; i < 100; ++i) {
    const SpectralState x = state();
    tally(full.certify_sup_bound(x));
    tally(full.certify_F_bound(x));
    tally(full.certify_lipschitz(x, prev));
    tally(cross.certify_lipschitz(x, prev));
    prev = x;
  }
  const double secs = seconds_since(t0);
  d << violations << " violations in 400 checks, worst lhs/rhs " << worst << ", " << secs << " s";
  return violations == 0 && secs < 10.0;
}

bool a7(std::ostringstream& d) {
  const BoundaryControlSystem bcs = BoundaryControlSystem::dirichlet_heat_0_pi(128);
  auto poly = [](std::vector<double> c) {
    std::vector<Vector> v;
    for (double x : c) v.push_back(Vector::Constant(1, x));
    return PolynomialSignal(v);
  };
  double worst = 0.0;
  bool ok = true;
  for (const PolynomialSignal& u : {poly({0.0, 0.0, 1.0}), poly({1.0, 1.0, 0.0, -1.0 / 6.0})}) {
    for (const Nonlinearity& f : {Nonlinearity::zero(128), Nonlinearity::arctan(0.1)}) {
      const CrosscheckReport r = representation_crosscheck(bcs, f, bcs.lifting(u.value(0.0)), u, 1.0);
      ok = ok && r.passed();
      worst = std::max(worst, r.max_difference());
    }
  }
  d << "max pairwise sup difference " << worst << " over 4 runs";
  return ok && worst <= 1e-6;
}

bool a8(std::ostringstream& d) {
  const PropertyReport r = check_brs(arctan_system(), 3.0, 5.0, samples(100, 81, 3.0, 3.0));
  d << "worst trajectory/global_bound " << r.worst_ratio << " over " << r.samples << " samples";
  return r.applicable && r.samples >= 100 && r.worst_ratio <= 1.0;
}

bool a9(std::ostringstream& d) {
  double spread = 0.0;
  for (double a : {0.25, 0.5, 0.75}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t N : {128u, 256u, 512u}) {
      const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(N);
      const double kappa = h.growth_bound() + 1.0;
      double sup = 0.0;
      for (int k = 0; k <= 40; ++k) {
        const double t = std::ldexp(1.0, -k);
        sup = std::max(sup, std::pow(t, a) * frac_T_norm(h, a, t) * std::exp(-kappa * t));
      }
      lo = std::min(lo, sup);
      hi = std::max(hi, sup);
    }
    spread = std::max(spread, hi / lo - 1.0);
    d << "alpha=" << a << " [" << lo << ", " << hi << "] ";
  }
  d << "max variation " << 100.0 * spread << "%";
  return spread < 0.10;
}

bool a10(std::ostringstream& d) {
  const CepReport rep = check_cep(burgers_system().system(), {0.5, 1.0}, {0.5, 1.0}, samples(8, 101, 1.0, 1.0));
  bool ok = rep.cells.size() == 4;
  for (const CepCell& c : rep.cells) {
    ok = ok && c.found && c.delta > 0.0;
    d << "(eps " << c.eps << ", h " << c.horizon << ") delta " << c.delta << "; ";
  }
  return ok;
}

}  // namespace

int main() {
  criterion("A1", "linear exactness", a1);
  criterion("A2", "blow-up bracketing", a2);
  criterion("A3", "cocycle residual", a3);
  criterion("A4", "deviation bound", a4);
  criterion("A5", "zero-class scaling", a5);
  criterion("A6", "Burgers inequality suite", a6);
  criterion("A7", "BCS three-way representation", a7);
  criterion("A8", "global-bound dominance", a8);
  criterion("A9", "fractional smoothing", a9);
  criterion("A10", "CEP table", a10);
  return failures == 0 ? 0 : 1;
}
