#include "mildflow/bcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace mildflow {

BoundaryControlSystem BoundaryControlSystem::dirichlet_heat_0_pi(std::size_t modes) {
  BoundaryControlSystem b{DiagonalSemigroup::dirichlet_laplacian_0_pi(modes), 1, {}, {}, {}};
  const double c = std::sqrt(2.0 / std::numbers::pi);
  b.lifting = [modes, c](const Vector& u) {
    Vector r(static_cast<Eigen::Index>(modes));
    for (Eigen::Index n = 0; n < r.size(); ++n) r(n) = c / static_cast<double>(n + 1) * u(0);
    return SpectralState(std::move(r));
  };
  b.formal_AR = [modes](const Vector&) { return SpectralState(modes); };
  // (1 - z/pi) u evaluated at z = 0
  b.boundary_of_lifting = [](const Vector& u) { return Vector(u * (1.0 - 0.0 / std::numbers::pi)); };
  return b;
}

BoundaryControlSystem BoundaryControlSystem::from_tables(DiagonalSemigroup sg, Matrix R, Matrix AR) {
  if (R.rows() != static_cast<Eigen::Index>(sg.size()) || AR.rows() != R.rows() || AR.cols() != R.cols())
    throw std::invalid_argument("lifting tables must be modes x inputs");
  const auto m = static_cast<std::size_t>(R.cols());
  BoundaryControlSystem b{std::move(sg), m, {}, {}, {}};
  b.lifting = [R](const Vector& u) { return SpectralState(Vector(R * u)); };
  b.formal_AR = [AR](const Vector& u) { return SpectralState(Vector(AR * u)); };
  return b;
}

namespace {

Matrix columns(const std::function<SpectralState(const Vector&)>& op, std::size_t modes, std::size_t m) {
  Matrix out(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(m));
    e(static_cast<Eigen::Index>(j)) = 1.0;
    const SpectralState v = op(e);
    if (v.size() != modes) throw std::invalid_argument("lifting returned a state of the wrong size");
    out.col(static_cast<Eigen::Index>(j)) = v.coeffs();
  }
  return out;
}

std::string describe(const Vector& u) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
  os << "]";
  return os.str();
}

}  // namespace

Matrix BoundaryControlSystem::lifting_matrix() const { return columns(lifting, semigroup.size(), input_dim); }
Matrix BoundaryControlSystem::formal_AR_matrix() const { return columns(formal_AR, semigroup.size(), input_dim); }

InputOperator make_input_operator(const BoundaryControlSystem& bcs, std::uint64_t seed) {
  const std::size_t N = bcs.semigroup.size();
  const std::size_t m = bcs.input_dim;
  if (m == 0) throw std::invalid_argument("boundary control system needs inputs");
  const Matrix R = bcs.lifting_matrix();
  const Matrix AR = bcs.formal_AR_matrix();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 8; ++s) {
    Vector u(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
    if (bcs.boundary_of_lifting) {
      const Vector back = bcs.boundary_of_lifting(u);
      if ((back - u).norm() > 1e-12 * std::max(1.0, u.norm()))
        throw std::domain_error("lifting violates the boundary condition for u = " + describe(u));
    }
    // linearity and boundedness of A^ R on the truncation
    const Vector direct = bcs.formal_AR(u).coeffs();
    if (!direct.allFinite() || (direct - AR * u).norm() > 1e-10 * std::max(1.0, (AR * u).norm()))
      throw std::domain_error("formal A^R is not a bounded linear map at u = " + describe(u));
  }
  {
    std::vector<double> terms(N);
    const Vector rn = AR.rowwise().norm();
    for (std::size_t n = 0; n < N; ++n) terms[n] = rn(static_cast<Eigen::Index>(n)) * rn(static_cast<Eigen::Index>(n));
    if (!series_ladder(terms).bounded) throw std::domain_error("formal A^R does not map into X");
  }

  const Vector& mu = bcs.semigroup.eigenvalues();
  const Matrix B = AR - mu.asDiagonal() * R;

  // largest alpha on a 0.05 grid with B in L(U, X_{-1+alpha}); alpha = 1 means bounded
  InputOperator probe(B, OperatorClass::bounded());
  for (int k = 20; k >= 1; --k) {
    const double alpha = 0.05 * k;
    if (smooth_class_ladder(bcs.semigroup, probe, alpha).bounded)
      return InputOperator(B, k == 20 ? OperatorClass::bounded() : OperatorClass::smooth_class(alpha));
  }
  std::vector<double> terms(N);
  const Vector w = fractional_weights(bcs.semigroup, -2.0);
  const Vector rn = B.rowwise().norm();
  for (std::size_t n = 0; n < N; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    terms[n] = w(i) * rn(i) * rn(i);
  }
  if (!series_ladder(terms).bounded) throw std::domain_error("input operator does not land in X_-1");
  return InputOperator(B, OperatorClass::q_admissible(std::numeric_limits<double>::infinity()));
}

CrosscheckReport representation_crosscheck(const BoundaryControlSystem& bcs, const Nonlinearity& f,
                                           const SpectralState& x0, const PolynomialSignal& u, double tau,
                                           const SolverConfig& cfg, double tolerance) {
  const DiagonalSemigroup& sg = bcs.semigroup;
  const std::size_t N = sg.size();
  if (x0.size() != N) throw std::invalid_argument("initial state has the wrong size");
  if (u.dim() != bcs.input_dim) throw std::invalid_argument("input dimension does not match the BCS");
  if (u.degree() > 4) throw std::invalid_argument("crosscheck inputs have degree at most 4");

  const Matrix R = bcs.lifting_matrix();
  const Matrix AR = bcs.formal_AR_matrix();
  const Vector& mu = sg.eigenvalues();

  // x0 - R u(0) must lie in D(A)
  {
    const Vector diff = x0.coeffs() - R * u.value(0.0);
    const Vector w = fractional_weights(sg, 1.0);
    std::vector<double> terms(N);
    for (std::size_t n = 0; n < N; ++n) {
      const auto i = static_cast<Eigen::Index>(n);
      terms[n] = w(i) * w(i) * diff(i) * diff(i);
    }
    if (!series_ladder(terms).bounded) throw std::domain_error("compatibility condition violated");
  }

  // (c): mild solution with B = A^R - A_{-1}R
  const InputOperator B = make_input_operator(bcs);
  const EvolutionSystem sys = EvolutionSystem::general(sg, B, f);
  SolverConfig c = cfg;
  c.record_substeps = true;
  const Trajectory tr = solve(sys, x0, u, tau, c);

  CrosscheckReport rep;
  rep.tolerance = tolerance;
  rep.solver_status = tr.status_name();
  rep.times = tr.times;

  const InputOperator Rop(R, OperatorClass::bounded());
  const InputOperator ARop(AR, OperatorClass::bounded());
  const PolynomialSignal du = u.derivative();
  const Vector Ru0 = R * u.value(0.0);

  // nonlinear convolution along the trajectory nodes, same piecewise-linear rule as the solver
  Vector conv = Vector::Zero(static_cast<Eigen::Index>(N));
  Vector g_prev = f.eval(tr.states[0], u.value(0.0)).coeffs();
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    const double t = tr.times[j];
    if (j > 0) {
      const double h = t - tr.times[j - 1];
      const Vector g = f.eval(tr.states[j], u.value(t)).coeffs();
      for (Eigen::Index n = 0; n < conv.size(); ++n) {
        const double z = mu(n) * h;
        conv(n) = std::exp(z) * conv(n) + h * phi(1, z) * g_prev(n) + h * phi(2, z) * (g(n) - g_prev(n));
      }
      g_prev = g;
    }
    const Vector decay = (mu * t).array().exp().matrix();
    const Vector ar_conv = convolve(sg, ARop, u, t).coeffs();
    const Vector a = decay.cwiseProduct(x0.coeffs() - Ru0) + ar_conv - convolve(sg, Rop, du, t).coeffs() +
                     R * u.value(t) + conv;
    const Vector b = decay.cwiseProduct(x0.coeffs()) + ar_conv - mu.cwiseProduct(convolve(sg, Rop, u, t).coeffs()) + conv;
    const Vector& x = tr.states[j].coeffs();
    rep.max_ab = std::max(rep.max_ab, (a - b).norm());
    rep.max_ac = std::max(rep.max_ac, (a - x).norm());
    rep.max_bc = std::max(rep.max_bc, (b - x).norm());
  }
  return rep;
}

}  // namespace mildflow
