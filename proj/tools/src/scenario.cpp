#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace mildflow::cli {

using nlohmann::json;

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  if (!j_->contains(key)) throw ConfigError(path_ + "/" + key + ": missing required field");
  return Node((*j_)[key], path_ + "/" + key);
}

Node Node::at(std::size_t i) const {
  if (!j_->is_array()) fail("expected an array");
  if (i >= j_->size()) fail("index out of range");
  return Node((*j_)[i], path_ + "/" + std::to_string(i));
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::fail(const std::string& what) const { throw ConfigError((path_.empty() ? "/" : path_) + ": " + what); }

double Node::number() const {
  if (!j_->is_number()) fail("expected a number");
  const double v = j_->get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

double Node::positive() const {
  const double v = number();
  if (!(v > 0.0)) fail("expected a positive number");
  return v;
}

long Node::integer() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<long>();
}

bool Node::boolean() const {
  if (!j_->is_boolean()) fail("expected true or false");
  return j_->get<bool>();
}

std::string Node::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

std::vector<double> Node::numbers() const {
  std::vector<double> v;
  for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).number());
  return v;
}

Matrix Node::matrix() const {
  const std::size_t rows = size();
  if (rows == 0) fail("expected a nonempty array of rows");
  const std::size_t cols = at(0).size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const Node row = at(r);
    if (row.size() != cols) row.fail("rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).number();
  }
  return m;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
  Scenario s;
  try {
    s.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario is not valid JSON: " + std::string(e.what()));
  }
  if (!s.doc.is_object()) throw ConfigError("/: scenario must be a JSON object");
  return s;
}

namespace {

// Library validation errors surface with the path of the block that produced them.
template <typename F>
auto guarded(const Node& n, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    n.fail(e.what());
  }
}

std::size_t modes_of(const Node& n, const Overrides& ov) {
  if (ov.modes) return *ov.modes;
  const long m = n.at("modes").integer();
  if (m < 1) n.at("modes").fail("expected a positive integer");
  return static_cast<std::size_t>(m);
}

struct ParsedGenerator {
  std::optional<DiagonalSemigroup> diag;
  std::optional<DenseGenerator> dense;
  std::size_t size() const { return diag ? diag->size() : dense->size(); }
};

ParsedGenerator parse_generator(const Node& n, const Overrides& ov) {
  ParsedGenerator g;
  if (n.has("family")) {
    const std::string fam = n.at("family").string();
    if (fam != "dirichlet_laplacian_0_pi") n.at("family").fail("unknown semigroup family '" + fam + "'");
    g.diag = DiagonalSemigroup::dirichlet_laplacian_0_pi(modes_of(n, ov));
  } else if (n.has("eigenvalues")) {
    Vector mu = n.at("eigenvalues").vector();
    g.diag = guarded(n, [&] {
      if (!n.has("omega")) return DiagonalSemigroup::from_eigenvalues(mu);
      std::optional<double> lambda;
      if (n.has("lambda")) lambda = n.at("lambda").number();
      return DiagonalSemigroup(mu, n.at("omega").number(), n.number_or("M", 1.0), lambda);
    });
  } else if (n.has("matrix")) {
    g.dense = guarded(n, [&] { return DenseGenerator(n.at("matrix").matrix()); });
  } else {
    n.fail("semigroup needs one of family, eigenvalues, matrix");
  }
  return g;
}

OperatorClass parse_class(const Node& n) {
  if (n.is_string()) {
    if (n.string() == "bounded") return OperatorClass::bounded();
    n.fail("unknown operator class '" + n.string() + "'");
  }
  if (n.has("q_admissible")) return OperatorClass::q_admissible(n.at("q_admissible").number());
  if (n.has("smooth_class")) return guarded(n, [&] { return OperatorClass::smooth_class(n.at("smooth_class").number()); });
  n.fail("expected bounded, {q_admissible: q} or {smooth_class: alpha}");
}

}  // namespace

InputOperator parse_operator(const Node& n, std::size_t modes) {
  if (n.has("family")) {
    const std::string fam = n.at("family").string();
    if (fam == "zero") {
      const long m = n.has("inputs") ? n.at("inputs").integer() : 1;
      if (m < 1) n.at("inputs").fail("expected a positive integer");
      return InputOperator::zero(modes, static_cast<std::size_t>(m));
    }
    if (fam == "identity") return InputOperator::identity(modes);
    if (fam == "dirichlet_boundary_0") {
      Vector b(static_cast<Eigen::Index>(modes));
      for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = std::sqrt(2.0 / std::numbers::pi) * static_cast<double>(k + 1);
      const double alpha = n.number_or("alpha", 0.2);
      return guarded(n, [&] { return InputOperator::column(b, OperatorClass::smooth_class(alpha)); });
    }
    n.at("family").fail("unknown operator family '" + fam + "'");
  }
  const Matrix c = n.at("coeffs").matrix();
  if (static_cast<std::size_t>(c.rows()) != modes) n.at("coeffs").fail("expected one row per mode");
  const OperatorClass cls = n.has("class") ? parse_class(n.at("class")) : OperatorClass::bounded();
  return guarded(n, [&] { return InputOperator(c, cls); });
}

namespace {

LocalTerm parse_local(const Node& n) {
  const std::string fam = n.at("family").string();
  const double a = n.number_or("a", 1.0);
  return guarded(n, [&] {
    if (fam == "zero") return LocalTerm::zero();
    if (fam == "sin_arctan") return LocalTerm::sin_arctan(a);
    if (fam == "cubic") return LocalTerm::cubic(a);
    if (fam == "source") return LocalTerm::source(a);
    n.at("family").fail("unknown local term '" + fam + "'");
  });
}

}  // namespace

Nonlinearity parse_nonlinearity(const Node& n, std::size_t modes, bool analytic) {
  const std::string id = n.at("id").string();
  if (id == "zero") return Nonlinearity::zero(modes);
  if (id == "scalar_square") {
    if (modes != 1) n.fail("scalar_square needs a single mode");
    return Nonlinearity::scalar_square();
  }
  if (id == "arctan") return guarded(n, [&] { return Nonlinearity::arctan(n.number_or("a", 1.0)); });
  if (id == "burgers_local") {
    const LocalTerm local = n.has("local") ? parse_local(n.at("local")) : LocalTerm::zero();
    const BurgersSystem b(modes, local);
    return analytic ? b.nonlinearity() : b.system_general().f();
  }
  n.at("id").fail("unknown nonlinearity '" + id + "'");
}

EvolutionSystem parse_system(const Node& n, const Overrides& ov) {
  const ParsedGenerator g = parse_generator(n.at("semigroup"), ov);
  const std::size_t N = g.size();
  std::string mode = g.dense ? "bounded_generator" : "general";
  if (n.has("mode")) mode = n.at("mode").string();
  const bool analytic = mode == "analytic";
  const InputOperator B = n.has("B") ? parse_operator(n.at("B"), N) : InputOperator::zero(N, 1);
  std::optional<InputOperator> B2;
  if (n.has("B2")) B2 = parse_operator(n.at("B2"), N);
  const Nonlinearity f = n.has("nonlinearity") ? parse_nonlinearity(n.at("nonlinearity"), N, analytic)
                                               : Nonlinearity::zero(N);
  return guarded(n, [&] {
    if (mode == "general") {
      if (!g.diag) n.at("mode").fail("general mode needs a diagonal semigroup");
      return EvolutionSystem::general(*g.diag, B, f, B2);
    }
    if (analytic) {
      if (!g.diag) n.at("mode").fail("analytic mode needs a diagonal semigroup");
      AnalyticOptions opts;
      if (n.has("kappa")) opts.kappa = n.at("kappa").number();
      if (n.has("waive_input_regularity")) opts.waive_input_regularity = n.at("waive_input_regularity").boolean();
      return EvolutionSystem::analytic(*g.diag, n.at("alpha").number(), B, f, B2, opts);
    }
    if (mode == "bounded_generator") {
      if (!g.dense) n.at("mode").fail("bounded_generator mode needs a matrix");
      return EvolutionSystem::bounded_generator(*g.dense, B, f, B2);
    }
    n.at("mode").fail("unknown mode '" + mode + "'");
  });
}

BurgersSystem parse_burgers(const Node& n, const Overrides& ov) {
  const std::size_t N = modes_of(n, ov);
  const LocalTerm local = n.has("local") ? parse_local(n.at("local")) : LocalTerm::zero();
  return guarded(n, [&] { return BurgersSystem(N, local, n.number_or("boundary_alpha", 0.2)); });
}

SpectralState parse_state(const Node& n, std::size_t modes) {
  if (n.is_array()) {
    const std::vector<double> v = n.numbers();
    if (v.size() > modes) n.fail("more coefficients than modes");
    Vector c = Vector::Zero(static_cast<Eigen::Index>(modes));
    for (std::size_t i = 0; i < v.size(); ++i) c(static_cast<Eigen::Index>(i)) = v[i];
    return SpectralState(c);
  }
  if (n.has("unit")) {
    const long k = n.at("unit").integer();
    if (k < 1 || static_cast<std::size_t>(k) > modes) n.at("unit").fail("mode index out of range");
    return n.number_or("scale", 1.0) * SpectralState::unit(modes, static_cast<std::size_t>(k - 1));
  }
  if (n.has("zero")) return SpectralState(modes);
  n.fail("expected a coefficient array, {unit, scale} or {zero: true}");
}

InputSignal parse_input(const Node& n, std::size_t dim, double t_end) {
  auto value = [&](const Node& v) -> Vector {
    if (!v.is_array()) {
      if (dim != 1) v.fail("expected a vector of length " + std::to_string(dim));
      return Vector::Constant(1, v.number());
    }
    Vector x = v.vector();
    if (static_cast<std::size_t>(x.size()) != dim) v.fail("expected a vector of length " + std::to_string(dim));
    return x;
  };
  if (n.has("zero")) return InputSignal::zero(dim, n.number_or("horizon", t_end));
  if (n.has("constant")) return InputSignal::constant(value(n.at("constant")), n.number_or("horizon", t_end));
  const Node grid = n.at("grid");
  const Node vals = n.at("values");
  std::vector<Vector> values;
  for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(value(vals.at(i)));
  return guarded(n, [&] { return InputSignal(grid.numbers(), values); });
}

PolynomialSignal parse_polynomial(const Node& n, std::size_t dim) {
  const Node c = n.at("coefficients");
  std::vector<Vector> coeffs;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Node ck = c.at(k);
    Vector v = ck.is_array() ? ck.vector() : Vector::Constant(1, ck.number());
    if (static_cast<std::size_t>(v.size()) != dim) ck.fail("expected a vector of length " + std::to_string(dim));
    coeffs.push_back(v);
  }
  return guarded(n, [&] { return PolynomialSignal(coeffs); });
}

SolverConfig parse_solver(const Scenario& s, const Overrides& ov) {
  SolverConfig c;
  const Node root = s.root();
  if (root.has("solver")) {
    const Node n = root.at("solver");
    if (!n.is_object()) n.fail("expected an object");
    if (n.has("substeps_per_window")) c.substeps_per_window = static_cast<int>(n.at("substeps_per_window").integer());
    if (n.has("picard_tol")) c.picard_tol = n.at("picard_tol").number();
    if (n.has("max_picard_iters")) c.max_picard_iters = static_cast<int>(n.at("max_picard_iters").integer());
    if (n.has("blowup_threshold")) c.blowup_threshold = n.at("blowup_threshold").number();
    if (n.has("contraction_target")) c.contraction_target = n.at("contraction_target").number();
    if (n.has("max_window_bisections"))
      c.max_window_bisections = static_cast<int>(n.at("max_window_bisections").integer());
    if (n.has("max_window")) c.max_window = n.at("max_window").number();
    if (n.has("min_window")) c.min_window = n.at("min_window").number();
    if (n.has("record_substeps")) c.record_substeps = n.at("record_substeps").boolean();
    if (n.has("checkpoints")) c.checkpoints = n.at("checkpoints").numbers();
  }
  if (ov.substeps) c.substeps_per_window = *ov.substeps;
  const Node where = root.has("solver") ? root.at("solver") : root;
  guarded(where, [&] { c.validate(); });
  return c;
}

BoundaryControlSystem parse_bcs(const Node& n, const Overrides& ov) {
  if (n.has("family")) {
    const std::string fam = n.at("family").string();
    if (fam != "dirichlet_heat_0_pi") n.at("family").fail("unknown BCS family '" + fam + "'");
    return BoundaryControlSystem::dirichlet_heat_0_pi(modes_of(n, ov));
  }
  const ParsedGenerator g = parse_generator(n.at("semigroup"), ov);
  if (!g.diag) n.at("semigroup").fail("boundary control systems need a diagonal semigroup");
  return guarded(n, [&] {
    return BoundaryControlSystem::from_tables(*g.diag, n.at("lifting").matrix(), n.at("formal_AR").matrix());
  });
}

}  // namespace mildflow::cli
