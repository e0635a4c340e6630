#include <doctest.h>

#include <mildflow/burgers.hpp>
#include <mildflow/flow_props.hpp>

#include <cmath>

using namespace mildflow;

namespace {

EvolutionSystem arctan_heat(std::size_t N = 8) {
  return EvolutionSystem::general(DiagonalSemigroup::dirichlet_laplacian_0_pi(N), InputOperator::identity(N),
                                  Nonlinearity::arctan(0.5));
}

EvolutionSystem quadratic() {
  return EvolutionSystem::general(DiagonalSemigroup::from_eigenvalues(Vector::Zero(1)), InputOperator::zero(1, 1),
                                  Nonlinearity::scalar_square());
}

SampleConfig few(std::size_t n) {
  SampleConfig s;
  s.count = n;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_CASE("random samples respect radii") {
  const EvolutionSystem sys = arctan_heat();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    CHECK(sys.working_norm(random_state(sys, 2.0, 2.0, rng)) <= 2.0 + 1e-12);
    CHECK(random_input(8, 1.0, 4, 0.5, rng).sup_norm() <= 0.5 + 1e-12);
  }
}

TEST_CASE("axioms hold on the arctan system") {
  const auto reps = check_axioms(arctan_heat(), 1.0, few(6));
  REQUIRE(reps.size() == 4);
  for (const auto& r : reps) {
    INFO(r.property);
    CHECK(r.passed());
    CHECK(r.samples == 6);
  }
}

TEST_CASE("cocycle residuals") {
  const EvolutionSystem sys = arctan_heat();
  std::mt19937_64 rng(9);
  const SpectralState x0 = random_state(sys, 1.0, 2.0, rng);
  const InputSignal u = random_input(8, 1.0, 4, 1.0, rng);
  SolverConfig cfg;
  cfg.substeps_per_window = 8;
  cfg.max_window = 0.5;
  const CocycleResiduals r = cocycle_residuals(sys, x0, u, 0.37, 0.41, cfg);
  CHECK(r.aligned <= 1e-9);
  REQUIRE(r.unaligned.size() == 3);
  CHECK(r.unaligned[2] <= r.unaligned[0]);
}

TEST_CASE("deviation bound") {
  const PropertyReport r = check_deviation_sampled(arctan_heat(), 2.0, few(8));
  CHECK(r.passed());
  CHECK(r.worst_ratio > 0.0);
  const SpectralState x1(Vector::Constant(1, 2.0)), x2(Vector::Constant(1, 2.1));
  const PropertyReport b = check_deviation(quadratic(), x1, x2, InputSignal::zero(1, 1.0), 1.0);
  CHECK_FALSE(b.applicable);
  CHECK(b.verdict() == "inapplicable");
}

TEST_CASE("continuous dependence") {
  const EvolutionSystem sys = arctan_heat();
  const SpectralState x1(Vector::Constant(8, 0.2));
  const SpectralState x2(Vector::Constant(8, 0.21));
  const InputSignal u1 = InputSignal::constant(Vector::Constant(8, 0.1), 1.0);
  const InputSignal u2 = InputSignal::constant(Vector::Constant(8, 0.12), 1.0);
  CHECK(check_continuous_dependence(sys, x1, u1, x2, u2, 1.0).passed());
  EvolutionSystem q = quadratic();
  Nonlinearity f = q.f();
  f.input_modulus.reset();
  f.input_free = false;
  q = q.with_nonlinearity(f);
  CHECK_THROWS_WITH(check_continuous_dependence(q, SpectralState(1), InputSignal::zero(1, 1.0), SpectralState(1),
                                                InputSignal::zero(1, 1.0), 1.0),
                    "no input modulus declared");
}

TEST_CASE("saturation keeps the vector field inside the unit ball") {
  const Nonlinearity s = saturate(quadratic());
  CHECK(s.global_lipschitz.value() == doctest::Approx(2.0));
  CHECK(s.eval(SpectralState(Vector::Constant(1, 5.0)), Vector::Zero(1))[0] == doctest::Approx(1.0));
  CHECK(s.eval(SpectralState(Vector::Constant(1, 0.5)), Vector::Zero(1))[0] == doctest::Approx(0.25));
}

TEST_CASE("CEP on a stable system and a non-equilibrium") {
  const CepReport rep = check_cep(arctan_heat(4), {0.5, 1.0}, {0.5}, few(4));
  REQUIRE(rep.cells.size() == 2);
  for (const auto& c : rep.cells) {
    CHECK(c.found);
    CHECK(c.delta > 0.0);
    CHECK(c.delta <= c.eps);
  }
  const BurgersSystem b(8, LocalTerm::source(1.0));
  CHECK_THROWS_WITH(check_cep(b.system_general(), {1.0}, {1.0}, few(2)), "origin is not an equilibrium");
}

TEST_CASE("bounded reachability sets") {
  SampleConfig s = few(6);
  s.state_radius = 2.0;
  s.input_radius = 2.0;
  const PropertyReport ok = check_brs(arctan_heat(), 2.0, 2.0, s);
  CHECK(ok.passed());
  CHECK(ok.worst_ratio <= 1.0);
  const PropertyReport bad = check_brs(quadratic(), 1.0, 1.5, few(3));
  CHECK_FALSE(bad.passed());
  CHECK(bad.verdict() == "fail");
}
