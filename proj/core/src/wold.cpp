#include "gfl/wold.hpp"

#include <algorithm>
#include <cmath>

#include "gfl/mappings.hpp"

namespace gfl {

ThresholdChain::ThresholdChain(Grid grid_,
                               std::vector<std::array<double, 2>> thresholds_)
    : grid(std::move(grid_)), thresholds(std::move(thresholds_)) {
  if (thresholds.empty())
    throw ValidationError("ThresholdChain: empty threshold list");
  for (std::size_t k = 1; k < thresholds.size(); ++k) {
    bool non_increasing = true;
    bool strict = false;
    for (int a = 0; a < grid.d; ++a) {
      const auto aa = static_cast<std::size_t>(a);
      if (thresholds[k][aa] > thresholds[k - 1][aa]) non_increasing = false;
      if (thresholds[k][aa] < thresholds[k - 1][aa]) strict = true;
    }
    if (!non_increasing || !strict)
      throw ValidationError(
          "ThresholdChain: thresholds must strictly decrease componentwise");
  }
}

ThresholdChain ThresholdChain::diagonal(const Grid& grid) {
  std::vector<std::array<double, 2>> thresholds;
  thresholds.reserve(static_cast<std::size_t>(grid.n));
  for (Index i = grid.n - 1; i >= 0; --i) {
    std::array<double, 2> t{0.0, 0.0};
    for (int a = 0; a < grid.d; ++a)
      t[static_cast<std::size_t>(a)] =
          grid.origin[static_cast<std::size_t>(a)] +
          grid.delta * static_cast<double>(i);
    thresholds.push_back(t);
  }
  return ThresholdChain(grid, std::move(thresholds));
}

ObservableStructure::ObservableStructure(ModuleSpace space, Index count)
    : remote_past(Submodule::zero(space)),
      vector_remote_past(Subspace::zero(space.q * space.p)) {
  modules.reserve(static_cast<std::size_t>(count));
  vector_spaces.reserve(static_cast<std::size_t>(count));
}

namespace {

// Support box entirely inside the product region {t <= t0}; the tiny slack
// absorbs decimal round trips of threshold coordinates.
bool admissible(const TestFunction& phi, const std::array<double, 2>& t0) {
  const auto& box = phi.support();
  if (box.empty()) return true;
  const Grid& grid = phi.grid();
  const double slack = 1e-9 * grid.delta;
  for (int a = 0; a < grid.d; ++a) {
    const auto aa = static_cast<std::size_t>(a);
    const double hi_coord =
        grid.origin[aa] + grid.delta * static_cast<double>(box.hi[aa]);
    if (hi_coord > t0[aa] + slack) return false;
  }
  return true;
}

std::vector<RandomVariable> image_of_basis(const RandomDistributionField& u,
                                           const std::vector<TestFunction>& basis,
                                           const ToleranceContext& ctx) {
  std::vector<RandomVariable> images;
  images.reserve(basis.size());
  for (const auto& phi : basis) images.push_back(u.apply(phi, ctx));
  return images;
}

Subspace flat_span(const ModuleSpace& space,
                   const std::vector<RandomVariable>& values,
                   const ToleranceContext& ctx) {
  std::vector<Vector> flat;
  flat.reserve(values.size());
  for (const auto& v : values) flat.push_back(flatten(v.value()));
  return span(space.q * space.p, flat, ctx);
}

ObservableStructure structure_from_images(
    const ModuleSpace& space, const std::vector<TestFunction>& basis,
    const std::vector<RandomVariable>& images, const ThresholdChain& chain,
    const ToleranceContext& ctx) {
  ObservableStructure out(space,
                          static_cast<Index>(chain.thresholds.size()));
  for (const auto& t0 : chain.thresholds) {
    std::vector<RandomVariable> selected;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (admissible(basis[k], t0)) selected.push_back(images[k]);
    out.modules.push_back(submodule_generated(space, selected, ctx));
    out.vector_spaces.push_back(flat_span(space, selected, ctx));
  }
  Subspace remote = out.modules.front().gspace();
  Subspace vremote = out.vector_spaces.front();
  for (std::size_t k = 1; k < out.modules.size(); ++k) {
    remote = intersect(remote, out.modules[k].gspace(), ctx);
    vremote = intersect(vremote, out.vector_spaces[k], ctx);
  }
  out.remote_past = Submodule(space, std::move(remote));
  out.vector_remote_past = std::move(vremote);
  return out;
}

Classification classify_spaces(Index remote_dim, Index domain_dim) {
  if (domain_dim == 0) return Classification::deterministic;
  if (remote_dim == domain_dim) return Classification::deterministic;
  if (remote_dim == 0) return Classification::purely_nondeterministic;
  return Classification::mixed;
}

}  // namespace

ObservableStructure observable_structure(const RandomDistributionField& u,
                                         const std::vector<TestFunction>& basis,
                                         const ThresholdChain& chain,
                                         const ToleranceContext& ctx) {
  ctx.validate();
  if (basis.empty())
    throw ValidationError("observable_structure: empty basis");
  if (chain.grid != u.grid())
    throw GridMismatch("observable_structure: chain grid mismatch");
  const std::vector<RandomVariable> images = image_of_basis(u, basis, ctx);
  return structure_from_images(u.space(), basis, images, chain, ctx);
}

WoldSplit wold_decompose(const RandomDistributionField& u,
                         const std::vector<TestFunction>& basis,
                         const ThresholdChain& chain,
                         const ToleranceContext& ctx) {
  const std::vector<RandomVariable> images = image_of_basis(u, basis, ctx);
  const ObservableStructure obs =
      structure_from_images(u.space(), basis, images, chain, ctx);
  const Index p = u.space().p;
  const Matrix proj = obs.remote_past.gspace().projector();
  const Matrix comp = Matrix::Identity(p, p) - proj;

  std::vector<RandomVariable> det_values;
  std::vector<RandomVariable> pnd_values;
  det_values.reserve(images.size());
  pnd_values.reserve(images.size());
  for (const auto& v : images) {
    det_values.emplace_back(u.space(), v.value() * proj);
    pnd_values.emplace_back(u.space(), v.value() * comp);
  }
  return WoldSplit{
      RandomDistributionField(u.grid(), basis, std::move(det_values)),
      RandomDistributionField(u.grid(), basis, std::move(pnd_values)), proj};
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::deterministic:
      return "deterministic";
    case Classification::purely_nondeterministic:
      return "purely_nondeterministic";
    case Classification::mixed:
      return "mixed";
  }
  return "mixed";
}

Classification classify(const RandomDistributionField& u,
                        const std::vector<TestFunction>& basis,
                        const ThresholdChain& chain,
                        const ToleranceContext& ctx) {
  const std::vector<RandomVariable> images = image_of_basis(u, basis, ctx);
  const ObservableStructure obs =
      structure_from_images(u.space(), basis, images, chain, ctx);
  const Submodule domain = submodule_generated(u.space(), images, ctx);
  return classify_spaces(obs.remote_past.gdim(), domain.gdim());
}

Report wold_split_report(const RandomDistributionField& u,
                         const std::vector<TestFunction>& basis,
                         const ThresholdChain& chain,
                         const ToleranceContext& ctx) {
  ctx.validate();
  Report report;
  report.name = "wold_split";

  const std::vector<RandomVariable> images = image_of_basis(u, basis, ctx);
  const ObservableStructure obs =
      structure_from_images(u.space(), basis, images, chain, ctx);
  const Submodule domain = submodule_generated(u.space(), images, ctx);
  const WoldSplit split = wold_decompose(u, basis, chain, ctx);

  // (i) the deterministic part's observable family is constant and equals
  // the remote past at every threshold.
  const ObservableStructure obs_det = observable_structure(
      split.deterministic_part, basis, chain, ctx);
  const Matrix remote_proj = obs.remote_past.gspace().projector();
  double det_residual = 0.0;
  for (const auto& m : obs_det.modules)
    det_residual = std::max(
        det_residual, rel_residual(m.gspace().projector(), remote_proj));
  report.add("deterministic_part_observable_equals_remote_past", det_residual,
             ctx.eq_tol);

  // (i) the nondeterministic part's remote past is trivial.
  const ObservableStructure obs_pnd = observable_structure(
      split.purely_nondeterministic_part, basis, chain, ctx);
  report.add("nondeterministic_part_remote_past_trivial",
             static_cast<double>(obs_pnd.remote_past.gdim()), 0.0);

  // (ii) both parts are subordinate to u.
  const Submodule det_domain = submodule_generated(
      u.space(), image_of_basis(split.deterministic_part, basis, ctx), ctx);
  const Submodule pnd_domain = submodule_generated(
      u.space(),
      image_of_basis(split.purely_nondeterministic_part, basis, ctx), ctx);
  report.add_flag("parts_subordinate",
                  contains(domain.gspace(), det_domain.gspace(), ctx) &&
                      contains(domain.gspace(), pnd_domain.gspace(), ctx));

  // (iii) gramian-uncorrelated parts, exact because P (I - P) = 0.
  double cross_residual = 0.0;
  double scale = 1.0;
  for (const auto& f : split.deterministic_part.values())
    for (const auto& g : split.purely_nondeterministic_part.values()) {
      cross_residual = std::max(cross_residual, gramian(f, g).norm());
      scale = std::max({scale, module_norm(f), module_norm(g)});
    }
  report.add("parts_uncorrelated", cross_residual / scale, ctx.eq_tol);

  // Parts reassemble u and the observable dimensions add up.
  double sum_residual = 0.0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const Matrix sum = split.deterministic_part.values()[k].value() +
                       split.purely_nondeterministic_part.values()[k].value();
    sum_residual = std::max(sum_residual, rel_residual(sum, images[k].value()));
  }
  report.add("parts_sum_to_whole", sum_residual, ctx.eq_tol);
  report.add_flag("observable_dimension_identity",
                  domain.gdim() ==
                      obs.remote_past.gdim() + pnd_domain.gdim());

  report.add_flag(
      "classification_" +
          to_string(classify_spaces(obs.remote_past.gdim(), domain.gdim())),
      true);
  return report;
}

Report wold_coherence(const RandomField& f, const ThresholdChain& chain,
                      const ToleranceContext& ctx) {
  ctx.validate();
  if (chain.grid != f.grid())
    throw GridMismatch("wold_coherence: chain grid mismatch");
  Report report;
  report.name = "wold_coherence";

  const Grid& grid = f.grid();
  std::vector<TestFunction> basis;
  basis.reserve(static_cast<std::size_t>(grid.size()));
  for (Index c = 0; c < grid.size(); ++c)
    basis.push_back(cell_indicator(grid, c));

  const StochasticMeasure xi = measure_from_field(f);
  const RandomDistributionField u = field_to_rdf(f, basis);
  const ObservableStructure obs_u = observable_structure(u, basis, chain, ctx);

  // Per-threshold observable spaces computed three ways: from field values,
  // from measure atoms, from smeared distribution values.
  const double slack = 1e-9 * grid.delta;
  double space_residual = 0.0;
  Index field_remote_dim = 0;
  {
    Subspace remote = Subspace::zero(f.space().p);
    bool first = true;
    for (std::size_t k = 0; k < chain.thresholds.size(); ++k) {
      std::vector<RandomVariable> f_vals;
      std::vector<RandomVariable> m_vals;
      for (Index c = 0; c < grid.size(); ++c) {
        const auto t = grid.point(c);
        bool inside = true;
        for (int a = 0; a < grid.d; ++a) {
          const auto aa = static_cast<std::size_t>(a);
          if (t[aa] > chain.thresholds[k][aa] + slack) inside = false;
        }
        if (!inside) continue;
        f_vals.push_back(f.value(c));
        m_vals.push_back(xi.atom(c));
      }
      const Submodule field_mod = submodule_generated(f.space(), f_vals, ctx);
      const Submodule measure_mod =
          submodule_generated(f.space(), m_vals, ctx);
      const Matrix field_proj = field_mod.gspace().projector();
      space_residual = std::max(
          space_residual,
          rel_residual(field_proj, measure_mod.gspace().projector()));
      space_residual = std::max(
          space_residual,
          rel_residual(field_proj, obs_u.modules[k].gspace().projector()));
      if (first) {
        remote = field_mod.gspace();
        first = false;
      } else {
        remote = intersect(remote, field_mod.gspace(), ctx);
      }
    }
    field_remote_dim = remote.dim();
  }
  report.add("observable_spaces_agree", space_residual, ctx.eq_tol);

  // Classifications agree across the three objects.
  const Submodule field_domain =
      submodule_generated(f.space(), f.values(), ctx);
  const Classification from_field =
      classify_spaces(field_remote_dim, field_domain.gdim());
  const Classification from_u = classify(u, basis, chain, ctx);
  const RandomDistributionField u_xi = measure_to_rdf(xi, basis);
  const Classification from_xi = classify(u_xi, basis, chain, ctx);
  report.add_flag("classifications_agree",
                  from_field == from_u && from_field == from_xi);
  report.add_flag("classification_" + to_string(from_field), true);

  // Splitting commutes with smearing: the deterministic part of the smeared
  // field is the smeared projected field.
  const WoldSplit split = wold_decompose(u, basis, chain, ctx);
  std::vector<RandomVariable> det_field_values;
  det_field_values.reserve(f.values().size());
  for (const auto& v : f.values())
    det_field_values.emplace_back(f.space(), v.value() * split.projector);
  const RandomField f_det(grid, det_field_values);
  const RandomDistributionField u_f_det = field_to_rdf(f_det, basis);
  double split_residual = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k)
    split_residual = std::max(
        split_residual,
        rel_residual(u_f_det.values()[k].value(),
                     split.deterministic_part.values()[k].value()));
  report.add("split_commutes_with_smearing", split_residual, ctx.eq_tol);

  // The measure of the projected field is the projected measure.
  double measure_split_residual = 0.0;
  const StochasticMeasure xi_det = measure_from_field(f_det);
  for (Index c = 0; c < grid.size(); ++c)
    measure_split_residual = std::max(
        measure_split_residual,
        rel_residual(xi_det.atom(c).value(),
                     xi.atom(c).value() * split.projector));
  report.add("measure_split_matches", measure_split_residual, ctx.eq_tol);

  return report;
}

}  // namespace gfl
