#include <doctest.h>

#include <mildflow_cli/cli.hpp>

#include "scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using mildflow::cli::Options;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mildflow_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Options opts_for(const fs::path& scenario, const fs::path& out) {
  Options o;
  o.scenario = scenario.string();
  o.out_dir = out.string();
  o.quiet = true;
  return o;
}

const char* kLinearDecay = R"({
  "system": {"semigroup": {"eigenvalues": [-1, -1, -1]}},
  "x0": [1, 2, 2],
  "t_end": 2,
  "solver": {"max_window": 0.25}
})";

}  // namespace

TEST_CASE("solve on linear decay reproduces e^{-t}|x0|") {
  const fs::path dir = scratch("decay");
  const int rc = mildflow::cli::run("solve", opts_for(write(dir, kLinearDecay), dir / "out"));
  REQUIRE(rc == 0);
  std::istringstream csv(slurp(dir / "out" / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,norm_X,coeff_1,coeff_2,coeff_3");
  int rows = 0;
  while (std::getline(csv, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const double nx = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(nx - 3.0 * std::exp(-t)) <= 1e-10);
    ++rows;
  }
  CHECK(rows > 8);
  CHECK(fs::exists(dir / "out" / "diagnostics.json"));
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = scratch("rerun");
  const fs::path s = write(dir, R"({
    "system": {"semigroup": {"family": "dirichlet_laplacian_0_pi", "modes": 4},
               "B": {"family": "identity"}, "nonlinearity": {"id": "arctan", "a": 0.5}},
    "props": {"tau": 0.5, "samples": 3, "checks": ["deviation", "brs"]}
  })");
  REQUIRE(mildflow::cli::run("props", opts_for(s, dir / "a")) == 0);
  REQUIRE(mildflow::cli::run("props", opts_for(s, dir / "b")) == 0);
  CHECK(slurp(dir / "a" / "reports.json") == slurp(dir / "b" / "reports.json"));
  Options o = opts_for(s, dir / "c");
  o.seed = 99;
  REQUIRE(mildflow::cli::run("props", o) == 0);
  CHECK(slurp(dir / "a" / "reports.json") != slurp(dir / "c" / "reports.json"));
}

TEST_CASE("expected failures of the quadratic blow-up") {
  const fs::path dir = scratch("blowup");
  const fs::path s = write(dir, R"({
    "system": {"semigroup": {"eigenvalues": [0]}, "nonlinearity": {"id": "scalar_square"}},
    "x0": [1],
    "t_end": 2,
    "props": {"tau": 1.5, "samples": 3, "checks": ["brs"]},
    "expect": {"status": "blowup", "fail": ["brs"]}
  })");
  CHECK(mildflow::cli::run("props", opts_for(s, dir / "props")) == 0);
  CHECK(slurp(dir / "props" / "summary.txt").find("brs: expected-fail") != std::string::npos);
  CHECK(mildflow::cli::run("solve", opts_for(s, dir / "solve")) == 0);
  CHECK(slurp(dir / "solve" / "diagnostics.json").find("\"blowup\"") != std::string::npos);
}

TEST_CASE("unmet expectations are property failures") {
  const fs::path dir = scratch("unmet");
  const fs::path s = write(dir, R"({
    "system": {"semigroup": {"eigenvalues": [0]}, "nonlinearity": {"id": "scalar_square"}},
    "x0": [1],
    "t_end": 2
  })");
  CHECK(mildflow::cli::run("solve", opts_for(s, dir / "out")) == 2);
}

TEST_CASE("configuration errors leave no outputs") {
  const fs::path dir = scratch("errors");
  CHECK(mildflow::cli::run("solve", opts_for(dir / "missing.json", dir / "out")) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
  const fs::path bad = write(dir, R"({"system": {"semigroup": {"eigenvalues": [-1, "x"]}}, "x0": [1], "t_end": 1})");
  CHECK(mildflow::cli::run("solve", opts_for(bad, dir / "out")) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(mildflow::cli::run("nonsense", opts_for(write(dir, kLinearDecay), dir / "out")) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("schema errors carry the path of the offending field") {
  using namespace mildflow::cli;
  const nlohmann::json j = nlohmann::json::parse(R"({
    "system": {"semigroup": {"eigenvalues": [-1, "x"]}},
    "other": {"semigroup": {"family": "dirichlet_laplacian_0_pi", "modes": 4},
              "nonlinearity": {"id": "cosine"}},
    "solver": {"substeps_per_window": 4}
  })");
  const Node root(j, "");
  CHECK_THROWS_WITH_AS(parse_system(root.at("system"), {}), "/system/semigroup/eigenvalues/1: expected a number",
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_system(root.at("other"), {}), "/other/nonlinearity/id: unknown nonlinearity 'cosine'",
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_solver(Scenario{j}, {}), "/solver: substeps_per_window must be at least 8", ConfigError);
  Overrides ov;
  ov.substeps = 32;
  CHECK(parse_solver(Scenario{j}, ov).substeps_per_window == 32);
  CHECK_THROWS_WITH_AS(root.at("missing"), "/missing: missing required field", ConfigError);
}

TEST_CASE("modes override") {
  const nlohmann::json j = nlohmann::json::parse(R"({"semigroup": {"family": "dirichlet_laplacian_0_pi", "modes": 4}})");
  mildflow::cli::Overrides ov;
  ov.modes = 7;
  CHECK(mildflow::cli::parse_system(mildflow::cli::Node(j, ""), ov).size() == 7);
}

TEST_CASE("admissibility and bcs commands") {
  const fs::path dir = scratch("adm");
  const fs::path a = write(dir, R"({
    "system": {"semigroup": {"family": "dirichlet_laplacian_0_pi", "modes": 256},
               "B": {"family": "dirichlet_boundary_0"}},
    "admissibility": {"k_min": 2, "k_max": 8}
  })");
  CHECK(mildflow::cli::run("admissibility", opts_for(a, dir / "a")) == 0);
  CHECK(slurp(dir / "a" / "estimates.csv").rfind("t,h_lower,h_upper\n", 0) == 0);
  const fs::path b = write(dir, R"({
    "bcs": {"family": "dirichlet_heat_0_pi", "modes": 32},
    "input": {"coefficients": [0, 0, 1]},
    "t_end": 1
  })");
  CHECK(mildflow::cli::run("bcs", opts_for(b, dir / "b")) == 0);
  CHECK(slurp(dir / "b" / "crosscheck.json").find("\"passed\": true") != std::string::npos);
}

TEST_CASE("burgers command writes snapshots") {
  const fs::path dir = scratch("burgers");
  const fs::path s = write(dir, R"({
    "burgers": {"modes": 8, "local": {"family": "sin_arctan", "a": 0.5}},
    "x0": {"unit": 1, "scale": 0.5},
    "boundary": {"constant": 0.05},
    "t_end": 0.1,
    "outputs": {"snapshots": [0, 0.05, 0.1]}
  })");
  REQUIRE(mildflow::cli::run("burgers", opts_for(s, dir / "out")) == 0);
  std::istringstream snap(slurp(dir / "out" / "snapshots.csv"));
  std::string header;
  std::getline(snap, header);
  CHECK(header == "z,x_t0,x_t0.05,x_t0.1");
  int rows = 0;
  for (std::string line; std::getline(snap, line);) ++rows;
  CHECK(rows == 17);
  CHECK(slurp(dir / "out" / "trajectory.csv").rfind("t,norm_X,norm_Xalpha,", 0) == 0);
}
