#pragma once

#include <map>
#include <string>
#include <vector>

#include "lwr/ga.hpp"
#include "lwr/scenario.hpp"
#include "lwr/scheduler.hpp"

namespace lwr {

/// Reads a scenario document (JSON, unit-suffixed field names). Throws
/// schema_error naming the offending field. w_mps may be omitted, in which
/// case it is derived from v*k_c = w*(k_j - k_c).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& sc);
void save_scenario(const Scenario& sc, const std::string& path);

/// GA configuration document.
GAConfig load_ga_config(const std::string& path);

/// Phase timings and summary stats of one CLI run.
struct RunReport {
  double internal_conditions_s = 0.0;
  double grid_s = 0.0;
  double oracle_s = 0.0;
  double optimize_s = 0.0;
  double total_outflow = 0.0;
  std::vector<double> per_bottleneck_delay;
  std::map<std::string, std::string> outputs;  ///< label -> file path
};
std::string report_to_json(const RunReport& report);

/// CSV writers. All files use '.' decimals, a mandatory header row and
/// newline-terminated rows.
void write_trajectories_csv(const std::string& path, const MultiResult& result);
void write_internal_conditions_csv(const std::string& path,
                                   const MultiResult& result);
void write_density_csv(const std::string& path, const DensityField& field);
void write_ga_history_csv(const std::string& path, const FitnessReport& report);

}  // namespace lwr
