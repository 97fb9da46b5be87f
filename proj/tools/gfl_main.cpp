#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gfl/errors.hpp"
#include "gfl/io.hpp"
#include "gfl/scenario.hpp"

namespace {

// Exit codes: 0 all clauses pass, 1 failing clause, 2 parse error,
// 3 validation error.
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

void emit(const std::string& text, const std::optional<std::string>& out) {
  std::cout << text;
  if (out) gfl::io::save_text_file_atomic(*out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for operator-valued covariance models"};
  app.require_subcommand(1);

  gfl::ScenarioOverrides overrides;
  std::optional<std::string> out_path;
  app.add_option("--tol-rank", overrides.rank_tol,
                 "Rank cutoff relative to the largest singular value");
  app.add_option("--tol-psd", overrides.psd_tol,
                 "Eigenvalue cutoff relative to the largest magnitude");
  app.add_option("--tol-eq", overrides.eq_tol,
                 "Residual cutoff for approximate equality");
  app.add_option("--seed", overrides.seed, "Override the scenario seed");
  app.add_option("--out", out_path, "Also write the report to this path");

  std::string scenario_path;
  CLI::App* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  std::string suite_dir;
  CLI::App* suite =
      app.add_subcommand("suite", "Run every *.json scenario in a directory");
  suite->add_option("directory", suite_dir, "Scenario directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const gfl::ScenarioResult result =
          gfl::run_scenario_file(scenario_path, overrides);
      emit(result.report_json, out_path);
      return result.report.pass() ? 0 : kExitFail;
    }
    const gfl::SuiteResult result = gfl::run_suite(suite_dir, overrides);
    emit(result.summary_json, out_path);
    return result.pass() ? 0 : kExitFail;
  } catch (const gfl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const gfl::Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
