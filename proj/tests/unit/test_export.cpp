#include <doctest.h>

#include <mildflow/export.hpp>

#include <sstream>

using namespace mildflow;

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e22, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trajectory and diagnostics output") {
  const EvolutionSystem sys = EvolutionSystem::general(DiagonalSemigroup::dirichlet_laplacian_0_pi(2),
                                                       InputOperator::identity(2), Nonlinearity::zero(2));
  const Trajectory tr = solve(sys, SpectralState(Vector::Ones(2)), InputSignal::zero(2, 0.5), 0.5);
  std::ostringstream a, b, d;
  write_trajectory_csv(a, tr);
  write_trajectory_csv(b, tr);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,norm_X,coeff_1,coeff_2\n", 0) == 0);
  write_diagnostics_json(d, tr);
  CHECK(d.str().find("\"status\": \"completed\"") != std::string::npos);
}

TEST_CASE("report summary lists verdicts") {
  PropertyReport r("deviation");
  r.samples = 3;
  r.worst_ratio = 0.5;
  std::ostringstream s, j;
  write_reports_summary(s, {r});
  CHECK(s.str().find("deviation: pass") != std::string::npos);
  write_reports_json(j, {r});
  CHECK(j.str().find("\"verdict\": \"pass\"") != std::string::npos);
}
