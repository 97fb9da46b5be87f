#include "gfl/scenario.hpp"

#include <algorithm>
#include <filesystem>

#include "gfl/io.hpp"
#include "gfl/kernels.hpp"
#include "gfl/measures.hpp"
#include "gfl/simulate.hpp"
#include "gfl/wold.hpp"
#include "json_codec.hpp"

namespace gfl {

namespace {

using io::detail::json;

// All scenario randomness defaults to one fixed constant so unseeded runs
// are still reproducible.
constexpr uint64_t kDefaultSeed = 1729;

uint64_t require_seed(const json& j, const char* key) {
  const json& v = io::detail::require(j, key);
  if (!v.is_number_integer() || v.get<int64_t>() < 0)
    throw ValidationError("scenario: seed must be a nonnegative integer");
  return v.get<uint64_t>();
}

// Inputs are inline objects or {"$file": path} references against base_dir.
json resolve_input(const json& j, const std::string& base_dir) {
  if (j.is_object() && j.contains("$file")) {
    const json& ref = j["$file"];
    if (!ref.is_string())
      throw ValidationError("scenario: $file reference must be a string");
    const std::filesystem::path path =
        std::filesystem::path(base_dir) / ref.get<std::string>();
    return io::detail::parse_text(io::load_text_file(path.string()));
  }
  return j;
}

json input(const json& inputs, const char* key, const std::string& base_dir) {
  return resolve_input(io::detail::require(inputs, key), base_dir);
}

std::vector<TestFunction> basis_or_default(const json& inputs,
                                           const std::string& base_dir,
                                           const Grid& grid) {
  std::vector<TestFunction> basis;
  if (inputs.contains("basis")) {
    const json arr = input(inputs, "basis", base_dir);
    if (!arr.is_array() || arr.empty())
      throw ValidationError("scenario: basis must be a nonempty array");
    basis.reserve(arr.size());
    for (const auto& b : arr) {
      basis.push_back(io::detail::test_function_from_json(
          resolve_input(b, base_dir)));
      if (basis.back().grid() != grid)
        throw GridMismatch("scenario: basis grid mismatch");
    }
  } else {
    basis.reserve(static_cast<std::size_t>(grid.size()));
    for (Index c = 0; c < grid.size(); ++c)
      basis.push_back(cell_indicator(grid, c));
  }
  return basis;
}

ThresholdChain chain_or_default(const json& inputs, const Grid& grid) {
  if (!inputs.contains("chain")) return ThresholdChain::diagonal(grid);
  const json& c = inputs["chain"];
  if (c.is_string()) {
    if (c.get<std::string>() == "diagonal")
      return ThresholdChain::diagonal(grid);
    throw ValidationError("scenario: unknown chain token");
  }
  if (!c.is_array() || c.empty())
    throw ValidationError("scenario: chain must be \"diagonal\" or a list");
  std::vector<std::array<double, 2>> thresholds;
  thresholds.reserve(c.size());
  for (const auto& t : c) {
    if (!t.is_array() || t.size() != static_cast<std::size_t>(grid.d))
      throw ValidationError("scenario: each threshold needs one coordinate per axis");
    std::array<double, 2> coords{0.0, 0.0};
    for (std::size_t a = 0; a < t.size(); ++a) {
      if (!t[a].is_number())
        throw ValidationError("scenario: threshold coordinates must be numbers");
      coords[a] = t[a].get<double>();
    }
    thresholds.push_back(coords);
  }
  return ThresholdChain(grid, std::move(thresholds));
}

Report run_factorize(const json& inputs, const std::string& base_dir,
                     const ToleranceContext& ctx) {
  const OperatorKernel k =
      io::detail::kernel_from_json(input(inputs, "kernel", base_dir));
  Report report;
  json artifacts{{"labels", k.size()}, {"q", k.q()}};
  const bool pd = is_positive_definite(k, ctx);
  report.add_flag("kernel_positive_definite", pd);
  if (pd) {
    const StochasticMapping phi = kolmogorov_factorize(k, ctx);
    report.add("factorization_roundtrip",
               rel_residual(covariance_kernel(phi, ctx).assembled(),
                            k.assembled()),
               ctx.eq_tol);
    report.add_flag("coordinates_minimal",
                    phi.space().p ==
                        std::max<Index>(numerical_rank(k.assembled(), ctx), 1));
    artifacts["p"] = phi.space().p;
  } else {
    report.add_skipped("factorization_roundtrip");
    report.add_skipped("coordinates_minimal");
  }
  report.artifacts_json = artifacts.dump();
  return report;
}

Report run_pd_check(const json& inputs, const std::string& base_dir,
                    const ToleranceContext& ctx, uint64_t seed) {
  const OperatorKernel k =
      io::detail::kernel_from_json(input(inputs, "kernel", base_dir));
  Report report;
  const HermitianEig eig = hermitian_eig(k.assembled(), ctx);
  const double lambda_min = eig.eigenvalues[eig.eigenvalues.size() - 1];
  const double scale = std::max(std::abs(eig.eigenvalues[0]),
                                std::abs(lambda_min));
  const double deficit =
      lambda_min < 0.0 ? -lambda_min / std::max(1.0, scale) : 0.0;
  report.add("min_eigenvalue_nonnegative", deficit, ctx.psd_tol);
  const bool pd = is_positive_definite(k, ctx);
  report.add_flag(
      "coefficient_sample_agrees",
      pd == operator_coefficient_positivity_sample(k, 200, seed, ctx));
  json artifacts{{"min_eigenvalue", lambda_min},
                 {"max_abs_eigenvalue", scale},
                 {"positive_definite", pd}};
  report.artifacts_json = artifacts.dump();
  return report;
}

Report run_subordination(const json& inputs, const std::string& base_dir,
                         const ToleranceContext& ctx) {
  const StochasticMapping phi =
      io::detail::mapping_from_json(input(inputs, "phi", base_dir));
  const StochasticMapping psi =
      io::detail::mapping_from_json(input(inputs, "psi", base_dir));
  Report report;
  const SubordinationCheck check = subordination_check(phi, psi, ctx);
  report.add("section_membership", check.membership_residual, ctx.eq_tol);
  const bool subordinate = subordination_criterion(phi, psi, ctx);
  report.add_flag(
      "criterion_matches_space_inclusion",
      subordinate == contains(measurements_space(psi, ctx),
                              measurements_space(phi, ctx), ctx));
  const SubordinationFlags flags = is_subordinate(phi, psi, ctx);
  json artifacts{{"subordinate", subordinate},
                 {"vector_subordinate", flags.vector},
                 {"operator_subordinate", flags.operator_},
                 {"gramian_residual", check.gramian_residual}};
  report.artifacts_json = artifacts.dump();
  return report;
}

Report run_rdf_coherence(const json& inputs, const std::string& base_dir,
                         const ToleranceContext& ctx) {
  const RandomField f =
      io::detail::field_from_json(input(inputs, "field", base_dir));
  return coherence_check(f, basis_or_default(inputs, base_dir, f.grid()), ctx);
}

Report run_measure_coherence(const json& inputs, const std::string& base_dir,
                             const ToleranceContext& ctx) {
  const StochasticMeasure xi =
      io::detail::measure_from_json(input(inputs, "measure", base_dir));
  return coherence_check(xi, basis_or_default(inputs, base_dir, xi.grid()),
                         ctx);
}

Report run_semivariation(const json& inputs, const std::string& base_dir,
                         const ToleranceContext& ctx, uint64_t seed) {
  const StochasticMeasure xi =
      io::detail::measure_from_json(input(inputs, "measure", base_dir));
  const CellSet cells = io::detail::cell_set_from_json(
      input(inputs, "cells", base_dir), xi.grid());
  SemivariationStrategy strategy = SemivariationStrategy::exhaustive();
  if (inputs.contains("strategy")) {
    const json s = input(inputs, "strategy", base_dir);
    const std::string kind = io::detail::require_string(s, "kind");
    if (kind == "ascent") {
      int restarts = 8;
      if (s.contains("restarts"))
        restarts = static_cast<int>(io::detail::require_integer(s, "restarts"));
      strategy = SemivariationStrategy::ascent(restarts, seed);
    } else if (kind != "exhaustive") {
      throw ValidationError("scenario: unknown semivariation strategy");
    }
  }
  Report report;
  const SemivariationResult scalar = semivariation(xi, cells, strategy, ctx);
  const SemivariationResult op =
      operator_semivariation(xi, cells, strategy, ctx);
  report.add("scalar_le_operator",
             std::max(0.0, scalar.lower_bound - op.lower_bound), ctx.eq_tol);
  json artifacts{{"semivariation", scalar.lower_bound},
                 {"operator_semivariation", op.lower_bound},
                 {"converged", scalar.converged && op.converged},
                 {"cells", io::detail::cell_set_to_json(cells)}};
  report.artifacts_json = artifacts.dump();
  return report;
}

Report run_wold(const json& inputs, const std::string& base_dir,
                const ToleranceContext& ctx) {
  const RandomField f =
      io::detail::field_from_json(input(inputs, "field", base_dir));
  const ThresholdChain chain = chain_or_default(inputs, f.grid());

  Report report = wold_coherence(f, chain, ctx);

  std::vector<TestFunction> basis;
  basis.reserve(static_cast<std::size_t>(f.grid().size()));
  for (Index c = 0; c < f.grid().size(); ++c)
    basis.push_back(cell_indicator(f.grid(), c));
  const RandomDistributionField u = field_to_rdf(f, basis);
  const Report split = wold_split_report(u, basis, chain, ctx);
  for (const auto& clause : split.clauses) {
    const bool seen =
        std::any_of(report.clauses.begin(), report.clauses.end(),
                    [&](const Clause& c) { return c.name == clause.name; });
    if (!seen) report.clauses.push_back(clause);
  }

  json artifacts{{"classification", to_string(classify(u, basis, chain, ctx))},
                 {"thresholds", chain.thresholds.size()}};
  report.artifacts_json = artifacts.dump();
  return report;
}

Report run_simulate(const json& inputs, const std::string& base_dir,
                    const ToleranceContext& ctx, uint64_t seed) {
  const OperatorKernel k =
      io::detail::kernel_from_json(input(inputs, "kernel", base_dir));
  const json n_json = input(inputs, "n_list", base_dir);
  if (!n_json.is_array() || n_json.empty())
    throw ValidationError("scenario: n_list must be a nonempty array");
  std::vector<Index> n_list;
  n_list.reserve(n_json.size());
  for (const auto& n : n_json) {
    if (!n.is_number_integer())
      throw ValidationError("scenario: n_list entries must be integers");
    n_list.push_back(n.get<Index>());
  }
  const ConvergenceReport conv = convergence_report(k, n_list, seed, ctx);
  Report report = conv.report;
  json points = json::array();
  for (const auto& pt : conv.points)
    points.push_back(json{{"n", pt.n_samples}, {"rel_error", pt.rel_error}});
  json artifacts{{"points", std::move(points)},
                 {"ratios", conv.ratios},
                 {"seed", seed}};
  report.artifacts_json = artifacts.dump();
  return report;
}

}  // namespace

ScenarioResult run_scenario_json(const std::string& text,
                                 const std::string& base_dir,
                                 const ScenarioOverrides& overrides) {
  const json doc = io::detail::parse_text(text);
  const std::string name = io::detail::require_string(doc, "name");
  const std::string kind = io::detail::require_string(doc, "kind");

  ToleranceContext ctx;
  if (doc.contains("tolerances"))
    ctx = io::detail::tolerance_from_json(doc["tolerances"]);
  if (overrides.rank_tol) ctx.rank_tol = *overrides.rank_tol;
  if (overrides.psd_tol) ctx.psd_tol = *overrides.psd_tol;
  if (overrides.eq_tol) ctx.eq_tol = *overrides.eq_tol;
  ctx.validate();

  uint64_t seed = kDefaultSeed;
  if (doc.contains("seed")) seed = require_seed(doc, "seed");
  if (overrides.seed) seed = *overrides.seed;

  const json& inputs = io::detail::require(doc, "inputs");
  if (!inputs.is_object())
    throw ValidationError("scenario: inputs must be an object");

  Report report;
  if (kind == "factorize") {
    report = run_factorize(inputs, base_dir, ctx);
  } else if (kind == "pd_check") {
    report = run_pd_check(inputs, base_dir, ctx, seed);
  } else if (kind == "subordination") {
    report = run_subordination(inputs, base_dir, ctx);
  } else if (kind == "rdf_coherence") {
    report = run_rdf_coherence(inputs, base_dir, ctx);
  } else if (kind == "measure_coherence") {
    report = run_measure_coherence(inputs, base_dir, ctx);
  } else if (kind == "semivariation") {
    report = run_semivariation(inputs, base_dir, ctx, seed);
  } else if (kind == "wold") {
    report = run_wold(inputs, base_dir, ctx);
  } else if (kind == "simulate") {
    report = run_simulate(inputs, base_dir, ctx, seed);
  } else {
    throw ValidationError("scenario: unknown kind \"" + kind + "\"");
  }
  report.name = name;

  ScenarioResult result;
  result.report = std::move(report);
  result.report_json = io::to_json(result.report);
  return result;
}

ScenarioResult run_scenario_file(const std::string& path,
                                 const ScenarioOverrides& overrides) {
  const std::string text = io::load_text_file(path);
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  if (base_dir.empty()) base_dir = ".";
  return run_scenario_json(text, base_dir, overrides);
}

SuiteResult run_suite(const std::string& directory,
                      const ScenarioOverrides& overrides) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory))
    throw ValidationError("suite: not a directory: " + directory);

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  SuiteResult result;
  for (const auto& file : files) {
    SuiteEntry entry;
    entry.file = fs::path(file).filename().string();
    try {
      const ScenarioResult scenario = run_scenario_file(file, overrides);
      entry.name = scenario.report.name;
      entry.pass = scenario.report.pass();
    } catch (const Error& e) {
      entry.pass = false;
      entry.error = e.what();
    }
    result.entries.push_back(std::move(entry));
  }
  result.total = static_cast<int>(result.entries.size());
  for (const auto& e : result.entries)
    if (e.pass)
      ++result.passed;
    else
      ++result.failed;

  json entries = json::array();
  for (const auto& e : result.entries) {
    json row{{"file", e.file}, {"name", e.name}, {"pass", e.pass}};
    if (!e.error.empty()) row["error"] = e.error;
    entries.push_back(std::move(row));
  }
  const json summary{{"total", result.total},
                     {"passed", result.passed},
                     {"failed", result.failed},
                     {"entries", std::move(entries)}};
  result.summary_json = summary.dump(2) + "\n";
  return result;
}

}  // namespace gfl
