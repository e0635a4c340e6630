#pragma once

#include <mildflow/mildflow.hpp>

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mildflow::cli {

/// Configuration error carrying the JSON path of the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Read-only view of a JSON value that knows its own path.
class Node {
 public:
  Node(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const nlohmann::json& raw() const { return *j_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node at(const std::string& key) const;
  Node at(std::size_t i) const;
  std::size_t size() const;
  bool is_array() const { return j_->is_array(); }
  bool is_object() const { return j_->is_object(); }
  bool is_string() const { return j_->is_string(); }

  double number() const;
  double positive() const;
  long integer() const;
  bool boolean() const;
  std::string string() const;
  std::vector<double> numbers() const;
  Vector vector() const { auto v = numbers(); return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }
  Matrix matrix() const;

  double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  const nlohmann::json* j_;
  std::string path_;
};

struct Scenario {
  nlohmann::json doc;
  Node root() const { return Node(doc, ""); }
};

Scenario load_scenario(const std::string& path);

struct Overrides {
  std::optional<std::size_t> modes;
  std::optional<int> substeps;
};

EvolutionSystem parse_system(const Node& n, const Overrides& ov);
BurgersSystem parse_burgers(const Node& n, const Overrides& ov);
SpectralState parse_state(const Node& n, std::size_t modes);
InputSignal parse_input(const Node& n, std::size_t dim, double t_end);
PolynomialSignal parse_polynomial(const Node& n, std::size_t dim);
SolverConfig parse_solver(const Scenario& s, const Overrides& ov);
InputOperator parse_operator(const Node& n, std::size_t modes);
Nonlinearity parse_nonlinearity(const Node& n, std::size_t modes, bool analytic);
BoundaryControlSystem parse_bcs(const Node& n, const Overrides& ov);

}  // namespace mildflow::cli
