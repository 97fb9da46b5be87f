#pragma once

#include <string>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/measures.hpp"
#include "gfl/report.hpp"

namespace gfl {

// Strictly decreasing (componentwise) thresholds drawn from grid coordinates;
// the finite stand-in for the descending family {t <= t0} over all of R^d.
struct ThresholdChain {
  Grid grid;
  std::vector<std::array<double, 2>> thresholds;

  ThresholdChain(Grid grid_, std::vector<std::array<double, 2>> thresholds_);

  // Grid diagonal, descending from the far corner; cofinal on the grid.
  static ThresholdChain diagonal(const Grid& grid);
};

// Per-threshold observable modules (and their vector-space analogues) of a
// random distribution field, plus the remote past intersections.
struct ObservableStructure {
  std::vector<Submodule> modules;       // gspace ambient p
  std::vector<Subspace> vector_spaces;  // ambient q*p, flattened values
  Submodule remote_past;
  Subspace vector_remote_past;

  ObservableStructure(ModuleSpace space, Index count);
};

// Generators at threshold t0: U_phi over basis functions whose support box
// lies in {t <= t0}; empty admissible sets give the zero submodule.
ObservableStructure observable_structure(const RandomDistributionField& u,
                                         const std::vector<TestFunction>& basis,
                                         const ThresholdChain& chain,
                                         const ToleranceContext& ctx = {});

// U = U P + U (I - P) with P the gramian projection onto the remote past.
struct WoldSplit {
  RandomDistributionField deterministic_part;
  RandomDistributionField purely_nondeterministic_part;
  Matrix projector;  // p x p, applied on the right
};

WoldSplit wold_decompose(const RandomDistributionField& u,
                         const std::vector<TestFunction>& basis,
                         const ThresholdChain& chain,
                         const ToleranceContext& ctx = {});

enum class Classification { deterministic, purely_nondeterministic, mixed };

std::string to_string(Classification c);

// deterministic: remote past = full modular domain (zero fields count as
// deterministic); purely nondeterministic: trivial remote past, nonzero
// domain; mixed otherwise.
Classification classify(const RandomDistributionField& u,
                        const std::vector<TestFunction>& basis,
                        const ThresholdChain& chain,
                        const ToleranceContext& ctx = {});

// Verifies the decomposition clauses on the basis: the deterministic part
// has a threshold-independent observable structure equal to the remote past,
// the nondeterministic part has trivial remote past, both parts are
// subordinate to u, their cross covariance distribution vanishes, and the
// observable dimensions add up.
Report wold_split_report(const RandomDistributionField& u,
                         const std::vector<TestFunction>& basis,
                         const ThresholdChain& chain,
                         const ToleranceContext& ctx = {});

// Coherence across the field, its cell measure, and its smeared distribution
// field (cell-indicator basis): observable spaces agree per threshold,
// classifications agree, and splitting commutes with smearing.
Report wold_coherence(const RandomField& f, const ThresholdChain& chain,
                      const ToleranceContext& ctx = {});

}  // namespace gfl
