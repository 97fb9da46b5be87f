#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfl/numeric.hpp"
#include "gfl/report.hpp"

namespace gfl {

// Command-line overrides applied on top of a scenario's own settings.
struct ScenarioOverrides {
  std::optional<double> rank_tol;
  std::optional<double> psd_tol;
  std::optional<double> eq_tol;
  std::optional<uint64_t> seed;
};

struct ScenarioResult {
  Report report;
  std::string report_json;
};

// Executes one scenario document.  Kinds: factorize, pd_check,
// subordination, rdf_coherence, measure_coherence, semivariation, wold,
// simulate.  Inputs may be inline objects or {"$file": relative-path}
// references resolved against base_dir.  Numerical failures surface as
// failing clauses; ParseError and ValidationError are thrown.
ScenarioResult run_scenario_json(const std::string& text,
                                 const std::string& base_dir,
                                 const ScenarioOverrides& overrides = {});

ScenarioResult run_scenario_file(const std::string& path,
                                 const ScenarioOverrides& overrides = {});

struct SuiteEntry {
  std::string file;
  std::string name;
  bool pass = false;
  std::string error;  // nonempty when the scenario could not run
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  int total = 0;
  int passed = 0;
  int failed = 0;
  std::string summary_json;
  bool pass() const { return failed == 0; }
};

// Runs every *.json in the directory in filename order; per-file errors are
// recorded in the summary, never aborting the sweep.
SuiteResult run_suite(const std::string& directory,
                      const ScenarioOverrides& overrides = {});

}  // namespace gfl
