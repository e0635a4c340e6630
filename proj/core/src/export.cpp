#include "mildflow/export.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>

namespace mildflow {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no inf/nan; they are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json pairs(const std::vector<std::pair<std::string, double>>& kv) {
  json o = json::object();
  for (const auto& [k, v] : kv) o[k] = number(v);
  return o;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  const bool alpha = tr.alpha_weights.size() != 0;
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
  os << "t,norm_X";
  if (alpha) os << ",norm_Xalpha";
  for (std::size_t k = 1; k <= n; ++k) os << ",coeff_" << k;
  os << '\n';
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    os << format_double(tr.times[i]) << ',' << format_double(tr.norm_x(i));
    if (alpha) os << ',' << format_double(tr.norm_alpha(i));
    for (std::size_t k = 0; k < n; ++k) os << ',' << format_double(tr.states[i][k]);
    os << '\n';
  }
}

void write_diagnostics_json(std::ostream& os, const Trajectory& tr) {
  json j;
  j["status"] = tr.status_name();
  if (tr.status == TrajectoryStatus::blowup) j["blowup_time"] = number(tr.blowup_time);
  if (tr.status == TrajectoryStatus::failed) j["failure_reason"] = tr.failure_reason;
  j["final_time"] = tr.times.empty() ? 0.0 : tr.final_time();
  j["alpha"] = tr.alpha;
  j["window_boundaries"] = tr.window_boundaries;
  json w = json::array();
  for (const auto& d : tr.windows) {
    w.push_back({{"t_start", d.t_start},
                 {"width", d.width},
                 {"K", number(d.K)},
                 {"lipschitz", number(d.lipschitz)},
                 {"kernel", number(d.kernel)},
                 {"h", number(d.h)},
                 {"contraction_bound", number(d.contraction_bound)},
                 {"observed_contraction", number(d.observed_contraction)},
                 {"iterations", d.iterations},
                 {"fixed_point_residual", number(d.fixed_point_residual)}});
  }
  j["windows"] = w;
  os << std::setw(2) << j << '\n';
}

void write_snapshots_csv(std::ostream& os, const BurgersSystem& burgers, const Trajectory& tr,
                         const std::vector<double>& times) {
  std::vector<std::vector<double>> cols;
  os << "z";
  for (double t : times) {
    cols.push_back(burgers.to_physical(tr.state_at(t)));
    os << ",x_t" << format_double(t);
  }
  os << '\n';
  const auto& z = burgers.grid();
  for (std::size_t j = 0; j < z.size(); ++j) {
    os << format_double(z[j]);
    for (const auto& c : cols) os << ',' << format_double(c[j]);
    os << '\n';
  }
}

void write_reports_json(std::ostream& os, const std::vector<PropertyReport>& reports,
                        const std::vector<CepCell>& cep_cells) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"property", r.property},
                   {"verdict", r.verdict()},
                   {"samples", r.samples},
                   {"worst_ratio", number(r.worst_ratio)},
                   {"tolerance", r.tolerance},
                   {"note", r.note},
                   {"witness", pairs(r.witness)},
                   {"details", pairs(r.details)},
                   {"scope", "sampled pairs only; universally quantified statements are not proven"}});
  }
  json j{{"reports", arr}};
  if (!cep_cells.empty()) {
    json cells = json::array();
    for (const auto& c : cep_cells)
      cells.push_back({{"eps", c.eps}, {"h", c.horizon}, {"found", c.found}, {"delta", c.delta}});
    j["cep_table"] = cells;
  }
  os << std::setw(2) << j << '\n';
}

void write_reports_summary(std::ostream& os, const std::vector<PropertyReport>& reports,
                           const std::vector<CepCell>& cep_cells) {
  for (const auto& r : reports) {
    os << r.property << ": " << r.verdict() << " (samples " << r.samples << ", worst ratio "
       << format_double(r.worst_ratio) << ")";
    if (!r.note.empty()) os << " - " << r.note;
    os << '\n';
  }
  for (const auto& c : cep_cells) {
    os << "  cep eps=" << format_double(c.eps) << " h=" << format_double(c.horizon) << ": ";
    if (c.found)
      os << "delta=" << format_double(c.delta) << '\n';
    else
      os << "not found at ladder floor\n";
  }
}

void write_estimates_csv(std::ostream& os, const AdmissibilityEstimate& est) {
  os << "t,h_lower,h_upper\n";
  for (std::size_t i = 0; i < est.t_grid.size(); ++i)
    os << format_double(est.t_grid[i]) << ',' << format_double(est.h_values[i]) << ','
       << format_double(est.upper[i]) << '\n';
}

void write_crosscheck_json(std::ostream& os, const CrosscheckReport& rep, const InputOperator& B) {
  json j{{"solver_status", rep.solver_status},
         {"max_ab", rep.max_ab},
         {"max_ac", rep.max_ac},
         {"max_bc", rep.max_bc},
         {"max_difference", rep.max_difference()},
         {"tolerance", rep.tolerance},
         {"passed", rep.passed()},
         {"nodes", rep.times.size()},
         {"input_operator_class", B.declared_class().describe()}};
  os << std::setw(2) << j << '\n';
}

}  // namespace mildflow
