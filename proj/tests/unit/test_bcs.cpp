#include <doctest.h>

#include <mildflow/bcs.hpp>

#include <cmath>
#include <numbers>

using namespace mildflow;

namespace {

PolynomialSignal scalar_poly(std::vector<double> c) {
  std::vector<Vector> v;
  for (double x : c) v.push_back(Vector::Constant(1, x));
  return PolynomialSignal(v);
}

}  // namespace

TEST_CASE("heat with Dirichlet input: B = A^R - A R") {
  const BoundaryControlSystem bcs = BoundaryControlSystem::dirichlet_heat_0_pi(64);
  const InputOperator B = make_input_operator(bcs);
  REQUIRE(B.modes() == 64);
  for (int n = 1; n <= 64; ++n) CHECK(B.coeffs()(n - 1, 0) == doctest::Approx(n * std::sqrt(2.0 / std::numbers::pi)));
  CHECK(B.declared_class().kind == OperatorClassKind::smooth_class);
  CHECK(B.declared_class().param < 0.25);
}

TEST_CASE("operators outside X_-1 are rejected") {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(256);
  Matrix R(256, 1), AR = Matrix::Zero(256, 1);
  for (int n = 1; n <= 256; ++n) R(n - 1, 0) = n;  // A R grows like n^3
  const BoundaryControlSystem bcs = BoundaryControlSystem::from_tables(h, R, AR);
  CHECK_THROWS_WITH(make_input_operator(bcs), "input operator does not land in X_-1");
}

TEST_CASE("three representations agree") {
  const BoundaryControlSystem bcs = BoundaryControlSystem::dirichlet_heat_0_pi(32);
  const PolynomialSignal u = scalar_poly({0.0, 0.0, 1.0});
  const CrosscheckReport r = representation_crosscheck(bcs, Nonlinearity::zero(32), SpectralState(32), u, 1.0);
  CHECK(r.passed());
  CHECK(r.max_difference() < 1e-8);

  const PolynomialSignal w = scalar_poly({1.0, 1.0, 0.0, -1.0 / 6.0});
  const SpectralState x0 = bcs.lifting(Vector::Ones(1));
  const CrosscheckReport s = representation_crosscheck(bcs, Nonlinearity::arctan(0.1), x0, w, 1.0);
  CHECK(s.passed());
}

TEST_CASE("incompatible initial data") {
  const BoundaryControlSystem bcs = BoundaryControlSystem::dirichlet_heat_0_pi(256);
  CHECK_THROWS_WITH(representation_crosscheck(bcs, Nonlinearity::zero(256), SpectralState(256),
                                              scalar_poly({1.0}), 0.5),
                    "compatibility condition violated");
}
