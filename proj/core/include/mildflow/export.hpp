#pragma once

#include "mildflow/admissibility.hpp"
#include "mildflow/bcs.hpp"
#include "mildflow/burgers.hpp"
#include "mildflow/flow_props.hpp"
#include "mildflow/solver.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace mildflow {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Columns t, norm_X, [norm_Xalpha], coeff_1..coeff_N.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
/// Windows, contraction factors and status as JSON.
void write_diagnostics_json(std::ostream& os, const Trajectory& tr);

/// Physical-grid snapshots: columns z, then one column per requested time.
void write_snapshots_csv(std::ostream& os, const BurgersSystem& burgers, const Trajectory& tr,
                         const std::vector<double>& times);

void write_reports_json(std::ostream& os, const std::vector<PropertyReport>& reports,
                        const std::vector<CepCell>& cep_cells = {});
void write_reports_summary(std::ostream& os, const std::vector<PropertyReport>& reports,
                           const std::vector<CepCell>& cep_cells = {});

/// Columns t, h_lower, h_upper.
void write_estimates_csv(std::ostream& os, const AdmissibilityEstimate& est);

void write_crosscheck_json(std::ostream& os, const CrosscheckReport& rep, const InputOperator& B);

}  // namespace mildflow
