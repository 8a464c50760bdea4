#pragma once

#include "tonekit/spectrum.hpp"

#include <nlohmann/json.hpp>

namespace tonekit {

struct UnknownScenarioError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  unsigned seed = 0;
  int samples = 4096;
  int resolution = 16;  // base mesh density, scenarios scale it as needed
  std::vector<double> eps_sequence = {0.8, 0.4, 0.2, 0.1};
};

/// Stable-ordered scenario names accepted by run_scenario.
std::vector<std::string> list_scenarios();

/// Runs one scenario end to end (geometry estimates, candidate fields, FEM
/// eigenvalues, inequality checks) and returns the report. Reports are
/// deterministic: the same name and options always produce the same bytes
/// when dumped.
nlohmann::json run_scenario(const std::string& name, const RunOptions& opts = {});

/// All scenarios, keyed by name, plus the echoed options.
nlohmann::json run_all(const RunOptions& opts = {});

/// Extracts a named series ("exhaustion", "sup_series", "convergence",
/// "checks") from a scenario report as CSV with a header row.
std::string plot_csv(const nlohmann::json& report, const std::string& series);

}  // namespace tonekit
