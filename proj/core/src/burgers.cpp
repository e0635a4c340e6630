#include "mildflow/burgers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace mildflow {

namespace {

const double kPi = std::numbers::pi;
const double kBasis = std::sqrt(2.0 / std::numbers::pi);

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan p = nullptr;
  Plan(int n, fftw_r2r_kind kind) {
    std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    p = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw planning failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void run(std::vector<double>& in, std::vector<double>& out) const { fftw_execute_r2r(p, in.data(), out.data()); }
};

}  // namespace

LocalTerm LocalTerm::zero() {
  LocalTerm t;
  t.f = [](double, double) { return 0.0; };
  t.h = [](double) { return 0.0; };
  t.g = [](double r) { return 1.0 + r; };
  t.lipschitz = [](double) { return 0.0; };
  return t;
}

LocalTerm LocalTerm::sin_arctan(double a) {
  if (a < 0.0) throw std::invalid_argument("amplitude must be nonnegative");
  LocalTerm t;
  t.name = "sin_arctan";
  t.f = [a](double z, double y) { return a * std::sin(z) * std::atan(y); };
  t.h = [a](double z) { return a * std::sin(z); };
  t.g = [](double r) { return r; };
  t.lipschitz = [a](double) { return a; };
  return t;
}

LocalTerm LocalTerm::cubic(double a) {
  if (a < 0.0) throw std::invalid_argument("amplitude must be nonnegative");
  LocalTerm t;
  t.name = "cubic";
  t.f = [a](double, double y) { return -a * y * y * y; };
  t.h = [a](double) { return a; };
  t.g = [](double r) { return r * r * r; };
  t.lipschitz = [a](double R) { return 3.0 * a * R * R; };
  return t;
}

LocalTerm LocalTerm::source(double a) {
  LocalTerm t;
  t.name = "source";
  t.f = [a](double z, double) { return a * std::sin(z); };
  t.h = [a](double z) { return std::abs(a) * std::sin(z); };
  t.g = [](double) { return 1.0; };
  t.lipschitz = [](double) { return 0.0; };
  return t;
}

struct BurgersSystem::Impl {
  std::size_t N;
  std::size_t J;
  std::vector<double> z;
  LocalTerm local;
  DiagonalSemigroup sg;
  std::unique_ptr<Plan> sine;    // RODFT00, size J-1
  std::unique_ptr<Plan> cosine;  // REDFT00, size J+1
  double h_norm = 0.0;

  Impl(std::size_t modes, LocalTerm f)
      : N(modes), J(2 * modes + 2), local(std::move(f)), sg(DiagonalSemigroup::dirichlet_laplacian_0_pi(modes)) {
    z.resize(J - 1);
    for (std::size_t j = 1; j < J; ++j) z[j - 1] = kPi * static_cast<double>(j) / static_cast<double>(J);
    sine = std::make_unique<Plan>(static_cast<int>(J - 1), FFTW_RODFT00);
    cosine = std::make_unique<Plan>(static_cast<int>(J + 1), FFTW_REDFT00);
    double s = 0.0;
    for (double zj : z) s += local.h(zj) * local.h(zj);
    h_norm = std::sqrt(s * kPi / static_cast<double>(J));
  }

  std::vector<double> to_physical(const Vector& a) const {
    std::vector<double> in(J - 1, 0.0), out(J - 1);
    for (std::size_t n = 0; n < N; ++n) in[n] = 0.5 * kBasis * a(static_cast<Eigen::Index>(n));
    sine->run(in, out);
    return out;
  }

  std::vector<double> derivative(const Vector& a) const {
    std::vector<double> in(J + 1, 0.0), out(J + 1);
    for (std::size_t n = 1; n <= N; ++n) in[n] = 0.5 * kBasis * static_cast<double>(n) * a(static_cast<Eigen::Index>(n - 1));
    cosine->run(in, out);
    return {out.begin() + 1, out.end() - 1};
  }

  Vector from_physical(std::vector<double> values) const {
    std::vector<double> out(J - 1);
    sine->run(values, out);
    Vector a(static_cast<Eigen::Index>(N));
    const double scale = 0.5 * kBasis * kPi / static_cast<double>(J);
    for (std::size_t n = 0; n < N; ++n) a(static_cast<Eigen::Index>(n)) = scale * out[n];
    return a;
  }

  Vector F(const Vector& a) const {
    const std::vector<double> x = to_physical(a);
    const std::vector<double> dx = derivative(a);
    std::vector<double> g(J - 1);
    for (std::size_t j = 0; j < J - 1; ++j) g[j] = -x[j] * dx[j] + local.f(z[j], x[j]);
    return from_physical(std::move(g));
  }
};

BurgersSystem::BurgersSystem(std::size_t modes, LocalTerm local, double boundary_alpha)
    : boundary_alpha_(boundary_alpha) {
  if (modes == 0) throw std::invalid_argument("Burgers system needs at least one mode");
  if (!local.f || !local.h || !local.g || !local.lipschitz) throw std::invalid_argument("incomplete local term");
  if (!(boundary_alpha > 0.0 && boundary_alpha < 0.25))
    throw std::invalid_argument("boundary operator class exponent must lie in (0, 1/4)");
  impl_ = std::make_shared<const Impl>(modes, std::move(local));
}

std::size_t BurgersSystem::modes() const { return impl_->N; }
const std::vector<double>& BurgersSystem::grid() const { return impl_->z; }
const LocalTerm& BurgersSystem::local() const { return impl_->local; }
const DiagonalSemigroup& BurgersSystem::semigroup() const { return impl_->sg; }

std::vector<double> BurgersSystem::to_physical(const SpectralState& x) const {
  if (x.size() != modes()) throw std::invalid_argument("state size does not match Burgers modes");
  return impl_->to_physical(x.coeffs());
}

std::vector<double> BurgersSystem::derivative_physical(const SpectralState& x) const {
  if (x.size() != modes()) throw std::invalid_argument("state size does not match Burgers modes");
  return impl_->derivative(x.coeffs());
}

SpectralState BurgersSystem::from_physical(const std::vector<double>& values) const {
  if (values.size() != impl_->J - 1) throw std::invalid_argument("expected one value per grid point");
  return SpectralState(impl_->from_physical(values));
}

SpectralState BurgersSystem::nonlinearity_F(const SpectralState& x) const {
  if (x.size() != modes()) throw std::invalid_argument("state size does not match Burgers modes");
  return SpectralState(impl_->F(x.coeffs()));
}

double BurgersSystem::norm_h1(const SpectralState& x) {
  double s = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) s += static_cast<double>((n + 1) * (n + 1)) * x[n] * x[n];
  return std::sqrt(s);
}

double BurgersSystem::envelope_norm() const { return impl_->h_norm; }

BurgersSystem::Check BurgersSystem::certify_sup_bound(const SpectralState& x) const {
  Check c;
  for (double v : to_physical(x)) c.lhs = std::max(c.lhs, std::abs(v));
  c.rhs = std::sqrt(kPi) * norm_h1(x);
  return c;
}

BurgersSystem::Check BurgersSystem::certify_F_bound(const SpectralState& x) const {
  const double n = norm_h1(x);
  Check c;
  c.lhs = norm_x(nonlinearity_F(x));
  c.rhs = std::sqrt(2.0 * kPi) * n * n + std::sqrt(2.0) * envelope_norm() * std::abs(local().g(std::sqrt(kPi) * n));
  return c;
}

BurgersSystem::Check BurgersSystem::certify_lipschitz(const SpectralState& x1, const SpectralState& x2) const {
  const double n1 = norm_h1(x1);
  const double n2 = norm_h1(x2);
  const double d = norm_h1(x1 - x2);
  const double L = local().lipschitz(std::sqrt(kPi) * std::max(n1, n2));
  Check c;
  c.lhs = norm_x(nonlinearity_F(x1) - nonlinearity_F(x2));
  c.rhs = std::sqrt(kPi) * (n1 + n2) * d + kPi * L * d;
  return c;
}

Vector BurgersSystem::lifting_coeffs() const {
  Vector r(static_cast<Eigen::Index>(modes()));
  for (Eigen::Index n = 0; n < r.size(); ++n) r(n) = kBasis / static_cast<double>(n + 1);
  return r;
}

InputOperator BurgersSystem::boundary_operator() const {
  Vector b(static_cast<Eigen::Index>(modes()));
  for (Eigen::Index n = 0; n < b.size(); ++n) b(n) = kBasis * static_cast<double>(n + 1);
  return InputOperator::column(std::move(b), OperatorClass::smooth_class(boundary_alpha_));
}

Nonlinearity BurgersSystem::nonlinearity() const {
  auto impl = impl_;
  Nonlinearity f;
  f.eval = [impl](const SpectralState& x, const Vector&) { return SpectralState(impl->F(x.coeffs())); };
  // sup|x| <= sqrt(pi) |x|_{1/2}, and the omega = 1 norm dominates |x|_{1/2}.
  f.lipschitz = [impl](double K) {
    return 2.0 * std::sqrt(kPi) * K + kPi * impl->local.lipschitz(std::sqrt(kPi) * K);
  };
  f.growth_c = impl->F(Vector::Zero(static_cast<Eigen::Index>(impl->N))).norm();
  f.input_free = true;
  return f;
}

EvolutionSystem BurgersSystem::system() const {
  const InputOperator B = InputOperator::hstack(InputOperator::identity(modes()), boundary_operator());
  AnalyticOptions opts;
  opts.waive_input_regularity = true;
  return EvolutionSystem::analytic(semigroup(), 0.5, B, nonlinearity(), std::nullopt, opts);
}

EvolutionSystem BurgersSystem::system_general() const {
  Nonlinearity f = nonlinearity();
  const double s = static_cast<double>(modes());  // |x|_{1/2} <= N |x| on the truncation
  auto impl = impl_;
  f.lipschitz = [impl, s](double r) {
    const double K = s * r;
    return s * (2.0 * std::sqrt(kPi) * K + kPi * impl->local.lipschitz(std::sqrt(kPi) * K));
  };
  const InputOperator B = InputOperator::hstack(InputOperator::identity(modes()), boundary_operator());
  return EvolutionSystem::general(semigroup(), B, std::move(f));
}

Trajectory BurgersSystem::simulate(const SpectralState& x0, const InputSignal& u, const InputSignal& d, double t_end,
                                   const SolverConfig& cfg) const {
  if (u.dim() != modes()) throw std::invalid_argument("distributed input needs one channel per mode");
  if (d.dim() != 1) throw std::invalid_argument("boundary input must be scalar");
  return solve_analytic(system(), x0, InputSignal::stack(u, d), t_end, cfg);
}

}  // namespace mildflow
