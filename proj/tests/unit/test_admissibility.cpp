#include <doctest.h>

#include <mildflow/admissibility.hpp>

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace mildflow;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

InputOperator boundary_column(std::size_t N, double alpha = 0.2) {
  Vector b(static_cast<Eigen::Index>(N));
  for (Eigen::Index n = 0; n < b.size(); ++n) b(n) = std::sqrt(2.0 / std::numbers::pi) * double(n + 1);
  return InputOperator::column(b, OperatorClass::smooth_class(alpha));
}

}  // namespace

TEST_CASE("operator classes") {
  CHECK_THROWS(OperatorClass::smooth_class(0.0));
  CHECK_THROWS(OperatorClass::smooth_class(1.5));
  CHECK(OperatorClass::smooth_class(0.2).describe() == "smooth_class(0.2)");
  const InputOperator s = InputOperator::hstack(InputOperator::identity(4), boundary_column(4));
  CHECK(s.inputs() == 5);
  CHECK(s.declared_class().kind == OperatorClassKind::smooth_class);
}

TEST_CASE("weighted operator norm") {
  Matrix C(3, 2);
  C << 1.0, 2.0, -0.5, 0.0, 3.0, 1.0;
  Vector w(3);
  w << 1.0, 2.0, 0.5;
  const Eigen::JacobiSVD<Matrix> svd(w.asDiagonal() * C);
  CHECK(weighted_operator_norm(C, w) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  CHECK(weighted_operator_norm(Matrix::Identity(4, 4) * 3.0) == doctest::Approx(3.0));
}

TEST_CASE("piecewise-constant convolution matches variation of constants") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(16);
  const InputOperator B = boundary_column(16);
  const std::vector<double> grid{0.0, 0.3, 0.7, 1.0};
  const std::vector<double> g{1.0, -2.0, 0.5};
  std::vector<Vector> vals;
  for (double v : g) vals.push_back(Vector::Constant(1, v));
  const SpectralState y = convolve(h, B, InputSignal(grid, vals), 0.85);
  for (int n = 1; n <= 16; ++n) {
    std::vector<double> gn;
    for (double v : g) gn.push_back(v * B.coeffs()(n - 1, 0));
    CHECK(y[n - 1] == doctest::Approx(oracle::mode_response(-double(n) * n, 0.0, grid, gn, 0.85)).epsilon(1e-12));
  }
}

TEST_CASE("polynomial convolution matches quadrature") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(8);
  const InputOperator B = boundary_column(8);
  const PolynomialSignal p({Vector::Constant(1, 1.0), Vector::Constant(1, 1.0), Vector::Constant(1, 0.0),
                            Vector::Constant(1, -1.0 / 6.0)});
  const double t = 0.9;
  const SpectralState y = convolve(h, B, p, t);
  for (int n = 1; n <= 8; ++n) {
    const double mu = -double(n) * n;
    const double q = oracle::simpson([&](double s) { return std::exp(mu * (t - s)) * p.value(s)(0); }, 0.0, t, 20000);
    CHECK(y[n - 1] == doctest::Approx(q * B.coeffs()(n - 1, 0)).epsilon(1e-10));
  }
}

TEST_CASE("exp_integral") {
  Vector mu(3);
  mu << 0.0, -2.0, 1e-12;
  const Vector e = exp_integral(mu, 0.5);
  CHECK(e(0) == doctest::Approx(0.5));
  CHECK(e(1) == doctest::Approx(-std::expm1(-1.0) / 2.0));
  CHECK(e(2) == doctest::Approx(0.5));
}

TEST_CASE("smooth class ladder separates alpha around 1/4") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(1024);
  const InputOperator B = boundary_column(1024);
  CHECK(smooth_class_ladder(h, B, 0.2).bounded);
  CHECK_FALSE(smooth_class_ladder(h, B, 0.4).bounded);
}

TEST_CASE("h_t bracket on a single mode is tight") {
  Vector mu(1);
  mu << -3.0;
  const DiagonalSemigroup s = DiagonalSemigroup::from_eigenvalues(mu);
  const InputOperator B(Matrix::Constant(1, 1, 2.0), OperatorClass::bounded());
  const double t = 0.4;
  const double exact = 2.0 * -std::expm1(-3.0 * t) / 3.0;
  const HBracket b = measure_h(s, B, t, kInf);
  CHECK(b.lower == doctest::Approx(exact).epsilon(1e-12));
  CHECK(b.upper >= b.lower * (1.0 - 1e-12));
  CHECK(truncation_h_inf(s, B, t) == doctest::Approx(exact));
  CHECK(truncation_h_2(s, B, t) == doctest::Approx(2.0 * std::sqrt(-std::expm1(-6.0 * t) / 6.0)));
}

TEST_CASE("boundary operator: lower bounds under the class bound") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(256);
  const InputOperator B = boundary_column(256);
  for (int k = 2; k <= 12; k += 2) {
    const double t = std::ldexp(1.0, -k);
    const HBracket b = measure_h(h, B, t, kInf);
    CHECK(b.lower > 0.0);
    CHECK(b.lower <= b.upper);
    CHECK(b.lower <= upper_bound_h(h, B, 0.0, t));
    const HBracket b2 = measure_h(h, B, t, 2.0);
    CHECK(b2.lower <= b2.upper * (1.0 + 1e-12));
  }
  CHECK_THROWS_WITH(upper_bound_h(h, B, 0.2, 0.1), "exponent out of admissible range");
  CHECK_THROWS(measure_h(h, B, 0.1, 3.0));
}

TEST_CASE("zero-class constants") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(8);
  CHECK(c_constant(h, InputOperator::identity(8), 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_WITH(c_constant(h, InputOperator(Matrix::Identity(8, 8), OperatorClass::q_admissible(2.0)), 0.5),
                    "B2 must be zero-class");
  CHECK(bounded_convolution_bound(1.0, 0.0, 2.0, 0.5) == doctest::Approx(1.0));
  CHECK(bounded_convolution_bound(2.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0 * std::expm1(1.0)));
}

TEST_CASE("dyadic estimate and log-log slope") {
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {1.0, std::sqrt(2.0), 2.0}) == doctest::Approx(0.5));
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(256);
  const AdmissibilityEstimate e = estimate_h(h, boundary_column(256), 2, 8, kInf);
  REQUIRE(e.t_grid.size() == 7);
  for (std::size_t i = 0; i + 1 < e.t_grid.size(); ++i) {
    CHECK(e.t_grid[i] < e.t_grid[i + 1]);
    CHECK(e.h_values[i] <= e.h_values[i + 1]);
  }
  CHECK(e.fitted_exponent > 0.0);
}
