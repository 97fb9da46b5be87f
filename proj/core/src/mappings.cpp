#include "gfl/mappings.hpp"

#include <algorithm>
#include <unordered_set>

namespace gfl {

StochasticMapping::StochasticMapping(std::vector<std::string> labels,
                                     std::vector<RandomVariable> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  if (labels_.empty())
    throw ValidationError("StochasticMapping: empty label list");
  if (labels_.size() != values_.size())
    throw ValidationError("StochasticMapping: labels/values count mismatch");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw ValidationError("StochasticMapping: duplicate label '" + l + "'");
  for (const auto& v : values_)
    if (v.space() != values_.front().space())
      throw SpaceMismatch("StochasticMapping: values span multiple spaces");
}

const RandomVariable& StochasticMapping::value(const std::string& label) const {
  return values_[label_index(label)];
}

Index StochasticMapping::label_index(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw UnknownLabel("StochasticMapping: unknown label '" + label + "'");
  return static_cast<Index>(it - labels_.begin());
}

Vector flatten(const Matrix& m) {
  Vector v(m.size());
  Index k = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

Matrix unflatten(const Vector& v, Index q, Index p) {
  if (v.size() != q * p)
    throw DimensionMismatch("unflatten: length does not factor as q*p");
  Matrix m(q, p);
  Index k = 0;
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < p; ++j) m(i, j) = v(k++);
  return m;
}

Subspace vector_domain(const StochasticMapping& phi,
                       const ToleranceContext& ctx) {
  const Index ambient = phi.space().q * phi.space().p;
  std::vector<Vector> flat;
  flat.reserve(phi.values().size());
  for (const auto& v : phi.values()) flat.push_back(flatten(v.value()));
  return span(ambient, flat, ctx);
}

Submodule modular_domain(const StochasticMapping& phi,
                         const ToleranceContext& ctx) {
  return submodule_generated(phi.space(), phi.values(), ctx);
}

Subspace measurements_space(const StochasticMapping& phi,
                            const ToleranceContext& ctx) {
  return modular_domain(phi, ctx).gspace();
}

SubordinationFlags is_subordinate(const StochasticMapping& phi,
                                  const StochasticMapping& psi,
                                  const ToleranceContext& ctx) {
  if (phi.space() != psi.space())
    throw SpaceMismatch("is_subordinate: mappings live in different spaces");
  SubordinationFlags flags;
  flags.vector = contains(vector_domain(psi, ctx), vector_domain(phi, ctx), ctx);
  flags.operator_ =
      contains(measurements_space(psi, ctx), measurements_space(phi, ctx), ctx);
  return flags;
}

StochasticMapping product_mapping(const StochasticMapping& phi,
                                  const StochasticMapping& psi) {
  if (phi.space() != psi.space())
    throw SpaceMismatch("product_mapping: space mismatch");
  if (phi.labels() != psi.labels())
    throw LabelMismatch("product_mapping: label lists differ");
  const Index q = phi.space().q;
  const Index p = phi.space().p;
  const ModuleSpace doubled(2 * q, p);
  std::vector<RandomVariable> values;
  values.reserve(phi.values().size());
  for (std::size_t i = 0; i < phi.values().size(); ++i) {
    Matrix stacked(2 * q, p);
    stacked.topRows(q) = phi.values()[i].value();
    stacked.bottomRows(q) = psi.values()[i].value();
    values.emplace_back(doubled, std::move(stacked));
  }
  return StochasticMapping(phi.labels(), std::move(values));
}

}  // namespace gfl
