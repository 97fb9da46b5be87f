#include "gfl/simulate.hpp"

#include <cmath>
#include <limits>

#include "gfl/rng.hpp"

namespace gfl {

SampleBatch sample_gaussian(const OperatorKernel& k, Index n_samples,
                            uint64_t seed, const ToleranceContext& ctx) {
  ctx.validate();
  if (n_samples < 1)
    throw ValidationError("sample_gaussian: n_samples must be >= 1");
  const StochasticMapping phi = kolmogorov_factorize(k, ctx);
  const Index p = phi.space().p;

  // One latent draw per sample, shared across labels, so the cross blocks
  // get the prescribed covariance phi_i phi_j^H.
  Rng rng(seed);
  const Matrix z = rng.complex_gaussian_matrix(p, n_samples);

  SampleBatch batch;
  batch.labels = k.labels();
  batch.q = k.q();
  batch.n_samples = n_samples;
  batch.seed = seed;
  batch.draws.reserve(batch.labels.size());
  for (std::size_t i = 0; i < batch.labels.size(); ++i)
    batch.draws.push_back(phi.value(batch.labels[i]).value() * z);
  return batch;
}

StochasticMapping empirical_mapping(const SampleBatch& batch) {
  if (batch.labels.empty() || batch.labels.size() != batch.draws.size())
    throw ValidationError("empirical_mapping: malformed batch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(batch.n_samples));
  const ModuleSpace space(batch.q, batch.n_samples);
  std::vector<RandomVariable> values;
  values.reserve(batch.draws.size());
  for (const auto& d : batch.draws) values.emplace_back(space, d * scale);
  return StochasticMapping(batch.labels, std::move(values));
}

EmpiricalKernel empirical_kernel(const SampleBatch& batch) {
  return EmpiricalKernel{covariance_kernel(empirical_mapping(batch)),
                         batch.n_samples, batch.seed};
}

ConvergenceReport convergence_report(const OperatorKernel& k,
                                     const std::vector<Index>& n_list,
                                     uint64_t seed,
                                     const ToleranceContext& ctx) {
  ctx.validate();
  if (n_list.empty())
    throw ValidationError("convergence_report: empty sample-count list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1)
      throw ValidationError("convergence_report: sample counts must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw ValidationError(
          "convergence_report: sample counts must strictly increase");
  }

  const Matrix target = k.assembled();
  const double target_norm = target.norm();

  ConvergenceReport out;
  out.points.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const uint64_t stream_seed = Rng::split(seed, static_cast<uint64_t>(i));
    const SampleBatch batch =
        sample_gaussian(k, n_list[i], stream_seed, ctx);
    const Matrix estimate = empirical_kernel(batch).kernel.assembled();
    const double abs_error = (estimate - target).norm();
    const double rel_error =
        target_norm > 0.0 ? abs_error / target_norm : abs_error;
    out.points.push_back(ConvergencePoint{n_list[i], rel_error});
  }

  out.decreasing = true;
  bool any_quadrupled = false;
  bool band_ok = true;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
    const double e0 = out.points[i].rel_error;
    const double e1 = out.points[i + 1].rel_error;
    double ratio;
    if (e1 > 0.0)
      ratio = e0 / e1;
    else
      ratio = e0 > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    out.ratios.push_back(ratio);
    if (!(e1 < e0)) out.decreasing = false;
    if (out.points[i + 1].n_samples == 4 * out.points[i].n_samples) {
      any_quadrupled = true;
      if (!(ratio >= 1.4 && ratio <= 2.9)) band_ok = false;
    }
  }
  out.trend_ok = band_ok;

  out.report.name = "convergence";
  if (out.points.size() < 2) {
    out.report.add_skipped("errors_decreasing");
  } else {
    out.report.add_flag("errors_decreasing", out.decreasing);
  }
  if (any_quadrupled) {
    out.report.add_flag("quadrupled_ratio_trend", band_ok);
  } else {
    out.report.add_skipped("quadrupled_ratio_trend");
  }
  return out;
}

}  // namespace gfl
