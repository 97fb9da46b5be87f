#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfl/kernels.hpp"
#include "gfl/report.hpp"

namespace gfl {

// N zero-mean complex Gaussian draws of a q-vector per label, with the
// prescribed operator covariance across labels; reproducible from the seed.
struct SampleBatch {
  std::vector<std::string> labels;
  Index q = 1;
  Index n_samples = 1;
  uint64_t seed = 0;
  std::vector<Matrix> draws;  // per label: q x N, column = one draw
};

SampleBatch sample_gaussian(const OperatorKernel& k, Index n_samples,
                            uint64_t seed, const ToleranceContext& ctx = {});

// Identifies the sample index with the measurement coordinate: p = N and the
// value at each label is its draw matrix scaled by 1/sqrt(N), so the mapping
// covariance kernel is exactly the empirical second-moment kernel.
StochasticMapping empirical_mapping(const SampleBatch& batch);

struct EmpiricalKernel {
  OperatorKernel kernel;
  Index n_samples = 1;
  uint64_t seed = 0;
};

EmpiricalKernel empirical_kernel(const SampleBatch& batch);

struct ConvergencePoint {
  Index n_samples = 0;
  double rel_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  std::vector<double> ratios;  // successive error quotients
  bool decreasing = false;
  bool trend_ok = false;  // quadrupled-N quotients within [1.4, 2.9]
  Report report;
};

// Per-N relative error of the empirical kernel against K, with independent
// per-N sample streams split deterministically from the one seed.
ConvergenceReport convergence_report(const OperatorKernel& k,
                                     const std::vector<Index>& n_list,
                                     uint64_t seed,
                                     const ToleranceContext& ctx = {});

}  // namespace gfl
