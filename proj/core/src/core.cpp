#include "mildflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mildflow {

namespace {

constexpr double kGridTol = 1e-13;

Vector random_direction(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// Merged breakpoints of two grids on [0, horizon].
std::vector<double> merge_grids(std::span<const double> a, std::span<const double> b, double horizon) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  for (double t : a)
    if (t < horizon) out.push_back(t);
  for (double t : b)
    if (t < horizon) out.push_back(t);
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double t : out)
    if (unique.empty() || t - unique.back() > kGridTol * std::max(1.0, horizon)) unique.push_back(t);
  unique.back() = horizon;
  return unique;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralState

SpectralState::SpectralState(Vector coeffs, bool blown_up)
    : coeffs_(std::move(coeffs)), blown_up_(blown_up) {}

SpectralState SpectralState::unit(std::size_t modes, std::size_t mode) {
  if (mode >= modes) throw std::invalid_argument("unit mode index out of range");
  SpectralState s(modes);
  s.coeffs_(static_cast<Eigen::Index>(mode)) = 1.0;
  return s;
}

SpectralState operator+(const SpectralState& a, const SpectralState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state size mismatch");
  return SpectralState(a.coeffs_ + b.coeffs_);
}

SpectralState operator-(const SpectralState& a, const SpectralState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state size mismatch");
  return SpectralState(a.coeffs_ - b.coeffs_);
}

SpectralState operator*(double s, const SpectralState& a) { return SpectralState(s * a.coeffs_); }

double norm_x(const SpectralState& x) {
  if (x.blown_up()) throw std::domain_error("state is post-blow-up");
  if (!x.finite()) throw std::domain_error("state has non-finite coefficients");
  return x.coeffs().norm();
}

double weighted_norm(const SpectralState& x, const Vector& weights) {
  if (weights.size() == 0) return norm_x(x);
  if (x.blown_up()) throw std::domain_error("state is post-blow-up");
  if (weights.size() != x.coeffs().size()) throw std::invalid_argument("weight size mismatch");
  return x.coeffs().cwiseProduct(weights).norm();
}

// ---------------------------------------------------------------------------
// InputSignal

InputSignal::InputSignal(std::vector<double> grid, std::vector<Vector> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.empty() || grid_.size() != values_.size() + 1)
    throw std::invalid_argument("input signal needs one value per grid cell");
  if (grid_.front() != 0.0) throw std::invalid_argument("input grid must start at 0");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
    if (!(grid_[i + 1] > grid_[i])) throw std::invalid_argument("input grid must be strictly increasing");
  if (!std::isfinite(grid_.back())) throw std::invalid_argument("input horizon must be finite");
  const auto d = values_.front().size();
  for (const auto& v : values_) {
    if (v.size() != d) throw std::invalid_argument("input values must share one dimension");
    if (!v.allFinite()) throw std::invalid_argument("input values must be finite");
  }
}

InputSignal InputSignal::constant(const Vector& value, double horizon) {
  return InputSignal({0.0, horizon}, {value});
}

InputSignal InputSignal::zero(std::size_t dim, double horizon) {
  return constant(Vector::Zero(static_cast<Eigen::Index>(dim)), horizon);
}

std::size_t InputSignal::cell_index(double t) const {
  if (t < 0.0) throw std::out_of_range("input evaluated at negative time");
  if (t > horizon() * (1.0 + kGridTol) + kGridTol) throw std::out_of_range("input evaluated beyond its horizon");
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(grid_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, values_.size() - 1);
}

const Vector& InputSignal::at(double t) const { return values_[cell_index(t)]; }

double InputSignal::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s = std::max(s, v.norm());
  return s;
}

double InputSignal::sup_norm(double a, double b) const {
  if (b <= a) return at(a).norm();
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (grid_[i] < b && grid_[i + 1] > a) s = std::max(s, values_[i].norm());
  return s;
}

InputSignal InputSignal::shift(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("shift must be nonnegative");
  if (tau == 0.0) return *this;
  if (tau >= horizon()) throw std::invalid_argument("shift reaches past the input horizon");
  const std::size_t first = cell_index(tau);
  std::vector<double> grid{0.0};
  std::vector<Vector> values;
  for (std::size_t i = first; i < values_.size(); ++i) {
    const double end = grid_[i + 1] - tau;
    if (end <= 0.0) continue;
    grid.push_back(end);
    values.push_back(values_[i]);
  }
  return InputSignal(std::move(grid), std::move(values));
}

InputSignal InputSignal::restrict_to(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("restriction length must be positive");
  if (t > horizon() * (1.0 + kGridTol) + kGridTol) throw std::invalid_argument("restriction beyond input horizon");
  std::vector<double> grid{0.0};
  std::vector<Vector> values;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (grid_[i] >= t) break;
    grid.push_back(std::min(grid_[i + 1], t));
    values.push_back(values_[i]);
  }
  grid.back() = t;
  return InputSignal(std::move(grid), std::move(values));
}

InputSignal InputSignal::window(double tau, double length) const {
  InputSignal s = shift(tau);
  return s.restrict_to(std::min(length, s.horizon()));
}

std::vector<double> InputSignal::breakpoints(double a, double b) const {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < grid_.size(); ++i)
    if (grid_[i] > a && grid_[i] < b) out.push_back(grid_[i]);
  return out;
}

InputSignal InputSignal::scaled(double s) const {
  std::vector<Vector> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(s * v);
  return InputSignal(grid_, std::move(values));
}

InputSignal operator-(const InputSignal& a, const InputSignal& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("input dimension mismatch");
  const double horizon = std::min(a.horizon(), b.horizon());
  auto grid = merge_grids(a.grid(), b.grid(), horizon);
  std::vector<Vector> values;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    values.push_back(a.at(mid) - b.at(mid));
  }
  return InputSignal(std::move(grid), std::move(values));
}

InputSignal InputSignal::stack(const InputSignal& a, const InputSignal& b) {
  const double horizon = std::min(a.horizon(), b.horizon());
  auto grid = merge_grids(a.grid(), b.grid(), horizon);
  std::vector<Vector> values;
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    Vector v(da + db);
    v.head(da) = a.at(mid);
    v.tail(db) = b.at(mid);
    values.push_back(std::move(v));
  }
  return InputSignal(std::move(grid), std::move(values));
}

InputSignal concat(const InputSignal& u1, const InputSignal& u2, double t) {
  if (t < 0.0) throw std::invalid_argument("concatenation time must be nonnegative");
  if (t > u1.horizon() * (1.0 + kGridTol) + kGridTol)
    throw std::invalid_argument("concatenation time exceeds the first input's horizon");
  if (u1.dim() != u2.dim()) throw std::invalid_argument("input dimension mismatch");
  if (t == 0.0) return u2;
  const InputSignal head = u1.restrict_to(std::min(t, u1.horizon()));
  std::vector<double> grid(head.grid().begin(), head.grid().end());
  std::vector<Vector> values = head.values();
  grid.back() = t;
  for (std::size_t i = 0; i < u2.cells(); ++i) {
    grid.push_back(t + u2.grid()[i + 1]);
    values.push_back(u2.values()[i]);
  }
  return InputSignal(std::move(grid), std::move(values));
}

// ---------------------------------------------------------------------------
// PolynomialSignal

PolynomialSignal::PolynomialSignal(std::vector<Vector> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  for (const auto& c : coeffs_)
    if (c.size() != coeffs_.front().size()) throw std::invalid_argument("polynomial coefficient size mismatch");
}

Vector PolynomialSignal::value(double t) const {
  Vector v = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) v = v * t + coeffs_[k];
  return v;
}

PolynomialSignal PolynomialSignal::derivative() const {
  if (coeffs_.size() == 1) return PolynomialSignal({Vector::Zero(coeffs_.front().size())});
  std::vector<Vector> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
  return PolynomialSignal(std::move(d));
}

PolynomialSignal PolynomialSignal::shift(double tau) const {
  const std::size_t n = coeffs_.size();
  std::vector<Vector> out(n, Vector::Zero(coeffs_.front().size()));
  for (std::size_t k = 0; k < n; ++k) {
    double binom = 1.0;  // C(k, j)
    for (std::size_t j = 0; j <= k; ++j) {
      out[j] += binom * std::pow(tau, static_cast<double>(k - j)) * coeffs_[k];
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
  }
  return PolynomialSignal(std::move(out));
}

double PolynomialSignal::sup_bound(double a, double b) const {
  const double r = std::max(std::abs(a), std::abs(b));
  double s = 0.0;
  double p = 1.0;
  for (const auto& c : coeffs_) {
    s += c.norm() * p;
    p *= r;
  }
  return s;
}

// ---------------------------------------------------------------------------
// KinfFunction

KinfFunction KinfFunction::identity() {
  return KinfFunction([](double r) { return r; });
}

KinfFunction KinfFunction::linear(double slope) {
  if (!(slope > 0.0)) throw std::invalid_argument("K-infinity slope must be positive");
  return KinfFunction([slope](double r) { return slope * r; });
}

KinfFunction KinfFunction::power(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0)) throw std::invalid_argument("K-infinity power needs positive parameters");
  return KinfFunction([scale, exponent](double r) { return scale * std::pow(r, exponent); });
}

KinfFunction::Certificate KinfFunction::certify() const {
  Certificate cert;
  cert.zero_at_origin = fn_(0.0) == 0.0;
  cert.strictly_increasing = true;
  double prev = fn_(0.0);
  for (int k = -20; k <= 40; ++k) {
    const double v = fn_(std::ldexp(1.0, k));
    if (!(v > prev)) cert.strictly_increasing = false;
    prev = v;
  }
  cert.unbounded = fn_(std::ldexp(1.0, 40)) >= 10.0 * fn_(1.0);
  return cert;
}

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity Nonlinearity::zero(std::size_t modes) {
  Nonlinearity f;
  f.eval = [modes](const SpectralState&, const Vector&) { return SpectralState(modes); };
  f.lipschitz = [](double) { return 0.0; };
  f.global_lipschitz = 0.0;
  f.input_modulus = KinfFunction::identity();
  return f;
}

Nonlinearity Nonlinearity::scalar_square() {
  Nonlinearity f;
  f.eval = [](const SpectralState& x, const Vector&) {
    if (x.size() != 1) throw std::invalid_argument("scalar_square acts on a single mode");
    return SpectralState(Vector::Constant(1, x[0] * x[0]));
  };
  f.lipschitz = [](double r) { return 2.0 * r; };
  f.input_modulus = KinfFunction::identity();
  return f;
}

Nonlinearity Nonlinearity::arctan(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("arctan amplitude must be nonnegative");
  Nonlinearity f;
  f.eval = [a](const SpectralState& x, const Vector&) {
    return SpectralState(Vector(x.coeffs().unaryExpr([a](double v) { return a * std::atan(v); })));
  };
  f.lipschitz = [a](double) { return a; };
  f.global_lipschitz = a;
  f.input_modulus = KinfFunction::identity();
  return f;
}

SampleCheck check_lipschitz(const Nonlinearity& f, std::size_t modes, std::size_t input_dim, double radius,
                            std::size_t count, std::uint64_t seed, const Vector& weights) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(modes);
  const auto m = static_cast<Eigen::Index>(input_dim);
  auto point = [&](double r) {
    SpectralState dir(random_direction(rng, n));
    const double nrm = weighted_norm(dir, weights);
    return (r * unit(rng) / nrm) * dir;
  };
  SampleCheck out;
  const double lip = f.lipschitz(radius);
  for (std::size_t i = 0; i < count; ++i) {
    const SpectralState x = point(radius);
    const SpectralState y = point(radius);
    Vector v = Vector::Zero(m);
    if (m > 0) {
      v = random_direction(rng, m);
      v *= radius * unit(rng) / v.norm();
    }
    const double lhs = norm_x(f.eval(y, v) - f.eval(x, v));
    const double dist = weighted_norm(y - x, weights);
    if (dist == 0.0) continue;
    const double ratio = lip > 0.0 ? lhs / (lip * dist) : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    ++out.samples;
  }
  return out;
}

SampleCheck check_growth(const Nonlinearity& f, std::size_t modes, std::size_t input_dim, double radius,
                         std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(input_dim);
  const SpectralState origin(modes);
  SampleCheck out;
  for (std::size_t i = 0; i < count; ++i) {
    Vector v = Vector::Zero(m);
    if (m > 0 && i > 0) {
      v = random_direction(rng, m);
      v *= radius * unit(rng) / v.norm();
    }
    const double lhs = norm_x(f.eval(origin, v));
    const double rhs = f.growth_sigma(v.norm()) + f.growth_c;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    ++out.samples;
  }
  return out;
}

LadderVerdict series_ladder(std::span<const double> terms, double ratio_limit) {
  LadderVerdict v;
  const std::size_t n = terms.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n / 4) v.quarter += terms[i];
    if (i < n / 2) v.half += terms[i];
    v.full += terms[i];
  }
  const double inc_low = v.half - v.quarter;
  const double inc_high = v.full - v.half;
  // a tail holding a negligible share of the sum cannot signal divergence
  if (inc_high <= 1e-2 * v.full) {
    v.increment_ratio = 0.0;
    v.bounded = true;
    return v;
  }
  v.increment_ratio = inc_low > 0.0 ? inc_high / inc_low : std::numeric_limits<double>::infinity();
  v.bounded = v.increment_ratio < ratio_limit;
  return v;
}

}  // namespace mildflow
