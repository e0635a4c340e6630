#include "mildflow_cli/cli.hpp"

#include "scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace mildflow::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kPropertyFailure = 2;

// Outputs are staged in memory so that a failing command leaves nothing behind.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::ostringstream log;

  void add(std::string name, const std::ostringstream& body) { files.emplace_back(std::move(name), body.str()); }
};

void commit(const Outputs& out, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& [name, body] : out.files) {
    const fs::path p = fs::path(dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!(f << body)) throw ConfigError("cannot write '" + p.string() + "'");
  }
}

Overrides overrides_of(const Options& opts) { return {opts.modes, opts.substeps}; }

std::uint64_t seed_of(const Node& block, const Options& opts, std::uint64_t fallback) {
  if (opts.seed) return *opts.seed;
  if (block.has("seed")) {
    const long s = block.at("seed").integer();
    if (s < 0) block.at("seed").fail("expected a nonnegative integer");
    return static_cast<std::uint64_t>(s);
  }
  return fallback;
}

std::set<std::string> expected_failures(const Node& root) {
  std::set<std::string> out;
  if (!root.has("expect")) return out;
  const Node e = root.at("expect");
  if (!e.has("fail")) return out;
  const Node f = e.at("fail");
  for (std::size_t i = 0; i < f.size(); ++i) out.insert(f.at(i).string());
  return out;
}

std::string expected_status(const Node& root) {
  if (root.has("expect") && root.at("expect").has("status")) {
    const std::string s = root.at("expect").at("status").string();
    if (s != "completed" && s != "blowup" && s != "failed") root.at("expect").at("status").fail("unknown status '" + s + "'");
    return s;
  }
  return "completed";
}

std::vector<double> snapshot_times(const Node& root) {
  if (root.has("outputs") && root.at("outputs").has("snapshots")) return root.at("outputs").at("snapshots").numbers();
  return {};
}

int trajectory_verdict(const Trajectory& tr, const std::string& expected, std::ostream& log) {
  log << "status " << tr.status_name();
  if (tr.status == TrajectoryStatus::blowup) log << " at t = " << format_double(tr.blowup_time);
  if (tr.status == TrajectoryStatus::failed) log << " (" << tr.failure_reason << ")";
  log << ", " << tr.windows.size() << " windows, final t = " << format_double(tr.final_time()) << "\n";
  if (tr.status_name() == expected) return kPass;
  log << "expected status " << expected << "\n";
  return kPropertyFailure;
}

int cmd_solve(const Scenario& s, const Options& opts, Outputs& out) {
  const Node root = s.root();
  const Overrides ov = overrides_of(opts);
  const EvolutionSystem sys = parse_system(root.at("system"), ov);
  const double t_end = root.at("t_end").positive();
  const SpectralState x0 = parse_state(root.at("x0"), sys.size());
  const SolverConfig cfg = parse_solver(s, ov);
  const std::string expected = expected_status(root);

  Trajectory tr;
  if (root.has("input") && root.at("input").has("coefficients")) {
    const PolynomialSignal u = parse_polynomial(root.at("input"), sys.input_dim());
    tr = solve(sys, x0, u, t_end, cfg);
  } else {
    const InputSignal u = root.has("input") ? parse_input(root.at("input"), sys.input_dim(), t_end)
                                            : InputSignal::zero(sys.input_dim(), t_end);
    tr = solve_system(sys, x0, u, t_end, cfg);
  }

  std::ostringstream csv, diag;
  write_trajectory_csv(csv, tr);
  write_diagnostics_json(diag, tr);
  out.add("trajectory.csv", csv);
  out.add("diagnostics.json", diag);
  return trajectory_verdict(tr, expected, out.log);
}

int cmd_burgers(const Scenario& s, const Options& opts, Outputs& out) {
  const Node root = s.root();
  const Overrides ov = overrides_of(opts);
  const BurgersSystem b = parse_burgers(root.at("burgers"), ov);
  const std::size_t N = b.modes();
  const double t_end = root.at("t_end").positive();
  const SpectralState x0 = root.has("x0") ? parse_state(root.at("x0"), N) : SpectralState(N);
  const InputSignal u = root.has("input") ? parse_input(root.at("input"), N, t_end) : InputSignal::zero(N, t_end);
  const InputSignal d = root.has("boundary") ? parse_input(root.at("boundary"), 1, t_end) : InputSignal::zero(1, t_end);
  SolverConfig cfg = parse_solver(s, ov);
  const std::vector<double> snaps = snapshot_times(root);
  for (double t : snaps) {
    if (!(t >= 0.0 && t <= t_end)) root.at("outputs").at("snapshots").fail("snapshot times must lie in [0, t_end]");
    if (t > 0.0 && t < t_end) cfg.checkpoints.push_back(t);
  }
  const std::string expected = expected_status(root);

  const Trajectory tr = b.simulate(x0, u, d, t_end, cfg);
  std::vector<double> available;
  for (double t : snaps)
    if (t <= tr.final_time()) available.push_back(t);

  std::ostringstream csv, diag, snap;
  write_trajectory_csv(csv, tr);
  write_diagnostics_json(diag, tr);
  out.add("trajectory.csv", csv);
  out.add("diagnostics.json", diag);
  if (!snaps.empty()) {
    write_snapshots_csv(snap, b, tr, available);
    out.add("snapshots.csv", snap);
  }
  return trajectory_verdict(tr, expected, out.log);
}

SampleConfig sample_config(const Node& p, std::uint64_t seed) {
  SampleConfig c;
  c.seed = seed;
  if (p.has("samples")) {
    const long n = p.at("samples").integer();
    if (n < 1) p.at("samples").fail("expected a positive integer");
    c.count = static_cast<std::size_t>(n);
  }
  c.state_radius = p.number_or("state_radius", c.state_radius);
  c.input_radius = p.number_or("input_radius", c.input_radius);
  c.coefficient_decay = p.number_or("coefficient_decay", c.coefficient_decay);
  if (p.has("input_cells")) c.input_cells = static_cast<int>(p.at("input_cells").integer());
  c.report_tolerance = p.number_or("tolerance", c.report_tolerance);
  return c;
}

PropertyReport sampled_continuity(const EvolutionSystem& sys, double tau, const SampleConfig& sc,
                                  const SolverConfig& cfg, double perturbation) {
  PropertyReport rep{"continuous_dependence"};
  if (!sys.f().input_modulus) {
    rep.applicable = false;
    rep.note = "no input modulus declared";
    return rep;
  }
  std::mt19937_64 rng(sc.seed);
  for (std::size_t i = 0; i < sc.count; ++i) {
    const SpectralState x1 = random_state(sys, sc.state_radius, sc.coefficient_decay, rng);
    const SpectralState dx = random_state(sys, perturbation, sc.coefficient_decay, rng);
    const InputSignal u1 = random_input(sys.input_dim(), tau, sc.input_cells, sc.input_radius, rng);
    const InputSignal du = random_input(sys.input_dim(), tau, sc.input_cells, perturbation, rng);
    const InputSignal u2 = u1 - du.scaled(-1.0);
    const PropertyReport r = check_continuous_dependence(sys, x1, u1, x1 + dx, u2, tau, cfg);
    rep.samples += r.samples;
    if (!r.applicable) {
      rep.applicable = false;
      rep.note = r.note;
      return rep;
    }
    if (r.worst_ratio >= rep.worst_ratio) {
      rep.worst_ratio = r.worst_ratio;
      rep.witness = r.witness;
      rep.witness.emplace_back("sample", static_cast<double>(i));
    }
  }
  return rep;
}

int cmd_props(const Scenario& s, const Options& opts, Outputs& out) {
  const Node root = s.root();
  const Overrides ov = overrides_of(opts);
  EvolutionSystem sys = root.has("burgers") ? [&] {
    const Node bn = root.at("burgers");
    const BurgersSystem b = parse_burgers(bn, ov);
    const std::string mode = bn.has("mode") ? bn.at("mode").string() : "analytic";
    if (mode == "analytic") return b.system();
    if (mode == "general") return b.system_general();
    bn.at("mode").fail("unknown mode '" + mode + "'");
  }() : parse_system(root.at("system"), ov);
  const SolverConfig cfg = parse_solver(s, ov);
  const Node p = root.at("props");
  const SampleConfig sc = sample_config(p, seed_of(p, opts, 1));
  const double tau = p.at("tau").positive();
  const std::set<std::string> expect_fail = expected_failures(root);

  std::vector<std::string> checks{"axioms", "deviation", "brs"};
  if (p.has("checks")) {
    checks.clear();
    const Node c = p.at("checks");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string name = c.at(i).string();
      static const std::set<std::string> known{"axioms", "deviation", "continuous_dependence", "brs", "cep"};
      if (!known.count(name)) c.at(i).fail("unknown check '" + name + "'");
      checks.push_back(name);
    }
  }

  std::vector<PropertyReport> reports;
  std::vector<CepCell> cep_cells;
  for (const std::string& c : checks) {
    if (c == "axioms") {
      for (auto& r : check_axioms(sys, tau, sc, cfg)) reports.push_back(std::move(r));
    } else if (c == "deviation") {
      reports.push_back(check_deviation_sampled(sys, tau, sc, cfg));
    } else if (c == "continuous_dependence") {
      reports.push_back(sampled_continuity(sys, tau, sc, cfg, p.number_or("perturbation", 1e-3)));
    } else if (c == "brs") {
      reports.push_back(check_brs(sys, p.number_or("brs_radius", sc.state_radius), tau, sc, cfg));
    } else if (c == "cep") {
      const std::vector<double> eps = p.has("cep_eps") ? p.at("cep_eps").numbers() : std::vector<double>{0.5, 1.0};
      const std::vector<double> hs = p.has("cep_h") ? p.at("cep_h").numbers() : std::vector<double>{0.5, 1.0};
      CepReport cep = check_cep(sys, eps, hs, sc, cfg);
      cep_cells = std::move(cep.cells);
      reports.push_back(std::move(cep.report));
    }
  }

  int code = kPass;
  std::ostringstream summary;
  write_reports_summary(summary, reports, cep_cells);
  for (const auto& r : reports) {
    const bool expected = expect_fail.count(r.property) > 0;
    if (expected && r.verdict() == "fail") {
      summary << r.property << ": expected-fail\n";
    } else if (expected) {
      summary << r.property << ": expected to fail but got " << r.verdict() << "\n";
      code = kPropertyFailure;
    } else if (r.verdict() == "fail") {
      code = kPropertyFailure;
    }
  }
  for (const std::string& name : expect_fail) {
    const bool present = std::any_of(reports.begin(), reports.end(), [&](const auto& r) { return r.property == name; });
    if (!present) root.at("expect").fail("expected failure of '" + name + "' but that check was not run");
  }

  std::ostringstream json;
  write_reports_json(json, reports, cep_cells);
  out.add("reports.json", json);
  out.add("summary.txt", summary);
  out.log << summary.str();
  return code;
}

int cmd_admissibility(const Scenario& s, const Options& opts, Outputs& out) {
  const Node root = s.root();
  const Overrides ov = overrides_of(opts);
  const EvolutionSystem sys = parse_system(root.at("system"), ov);
  if (!sys.diagonal()) root.at("system").fail("admissibility estimates need a diagonal semigroup");
  const Node a = root.at("admissibility");
  const int k_min = static_cast<int>(a.at("k_min").integer());
  const int k_max = static_cast<int>(a.at("k_max").integer());
  if (k_min > k_max) a.fail("k_min must not exceed k_max");
  const double q = a.has("q") ? (a.at("q").is_string() && a.at("q").string() == "inf"
                                     ? std::numeric_limits<double>::infinity()
                                     : a.at("q").number())
                              : std::numeric_limits<double>::infinity();
  const int probes = a.has("probe_cells") ? static_cast<int>(a.at("probe_cells").integer()) : 12;
  const double min_slope = a.number_or("min_slope", 0.0);

  const AdmissibilityEstimate est = [&] {
    try {
      return estimate_h(sys.semigroup(), sys.B(), k_min, k_max, q, probes);
    } catch (const std::invalid_argument& e) {
      a.fail(e.what());
    }
  }();

  int code = kPass;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < est.t_grid.size(); ++i)
    if (est.h_values[i] > est.upper[i] * (1.0 + 1e-9)) ++violations;
  out.log << "fitted exponent " << format_double(est.fitted_exponent) << ", " << violations
          << " grid points above the upper bound\n";
  if (violations > 0 || est.fitted_exponent < min_slope) code = kPropertyFailure;

  std::ostringstream csv;
  write_estimates_csv(csv, est);
  out.add("estimates.csv", csv);
  return code;
}

int cmd_bcs(const Scenario& s, const Options& opts, Outputs& out) {
  const Node root = s.root();
  const Overrides ov = overrides_of(opts);
  const Node bn = root.at("bcs");
  const BoundaryControlSystem bcs = parse_bcs(bn, ov);
  const std::size_t N = bcs.semigroup.size();
  const Nonlinearity f = root.has("nonlinearity") ? parse_nonlinearity(root.at("nonlinearity"), N, false)
                                                  : Nonlinearity::zero(N);
  const PolynomialSignal u = parse_polynomial(root.at("input"), bcs.input_dim);
  // default start is the compatible state R u(0)
  const SpectralState x0 = root.has("x0") ? parse_state(root.at("x0"), N) : bcs.lifting(u.value(0.0));
  const double tau = root.at("t_end").positive();
  const double tol = bn.number_or("tolerance", 1e-6);
  const SolverConfig cfg = parse_solver(s, ov);
  const std::uint64_t seed = seed_of(bn, opts, 7);

  auto guard = [&](auto&& fn) {
    try {
      return fn();
    } catch (const std::invalid_argument& e) {
      bn.fail(e.what());
    }
  };
  const InputOperator B = guard([&] { return make_input_operator(bcs, seed); });
  const CrosscheckReport rep = guard([&] { return representation_crosscheck(bcs, f, x0, u, tau, cfg, tol); });

  out.log << "operator class " << B.declared_class().describe() << ", max pairwise difference "
          << format_double(rep.max_difference()) << " (tolerance " << format_double(tol) << ")\n";
  std::ostringstream json;
  write_crosscheck_json(json, rep, B);
  out.add("crosscheck.json", json);
  return rep.passed() ? kPass : kPropertyFailure;
}

}  // namespace

int run(const std::string& command, const Options& opts) {
  Outputs out;
  int code = kUsage;
  try {
    const Scenario s = load_scenario(opts.scenario);
    if (command == "solve") code = cmd_solve(s, opts, out);
    else if (command == "burgers") code = cmd_burgers(s, opts, out);
    else if (command == "props") code = cmd_props(s, opts, out);
    else if (command == "admissibility") code = cmd_admissibility(s, opts, out);
    else if (command == "bcs") code = cmd_bcs(s, opts, out);
    else throw ConfigError("unknown command '" + command + "'");
    commit(out, opts.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!opts.quiet) std::cout << out.log.str();
  return code;
}

int main(int argc, char** argv) {
  CLI::App app{"mildflow: mild solutions of semilinear evolution equations"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--scenario", opts.scenario, "Scenario JSON file")->required();
  app.add_option("--out", opts.out_dir, "Output directory");
  app.add_option("--seed", opts.seed, "Sampling seed");
  app.add_option("--substeps", opts.substeps, "Substeps per Picard window")->check(CLI::PositiveNumber);
  app.add_option("--modes", opts.modes, "Spectral truncation N")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opts.quiet, "Suppress the console summary");
  std::string command;
  for (const char* name : {"solve", "burgers", "props", "admissibility", "bcs"})
    app.add_subcommand(name)->fallthrough()->callback([&command, name] { command = name; });
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  return run(command, opts);
}

}  // namespace mildflow::cli
