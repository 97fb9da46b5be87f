#include "gfl/hilbert.hpp"

#include <cmath>

namespace gfl {

RandomVariable::RandomVariable(ModuleSpace space, Matrix value)
    : space_(space), value_(std::move(value)) {
  if (value_.rows() != space_.q || value_.cols() != space_.p)
    throw DimensionMismatch("RandomVariable: value shape does not match space");
  if (!value_.allFinite())
    throw ValidationError("RandomVariable: non-finite entries");
}

RandomVariable RandomVariable::zero(const ModuleSpace& space) {
  return RandomVariable(space, Matrix::Zero(space.q, space.p));
}

Matrix gramian(const RandomVariable& f, const RandomVariable& g) {
  if (f.space() != g.space())
    throw SpaceMismatch("gramian: operands live in different module spaces");
  return f.value() * g.value().adjoint();
}

Complex scalar_product(const RandomVariable& f, const RandomVariable& g) {
  return gramian(f, g).trace();
}

double module_norm(const RandomVariable& f) { return f.value().norm(); }

RandomVariable outer_action(const Matrix& a, const RandomVariable& f) {
  const Index q = f.space().q;
  if (a.rows() != q || a.cols() != q)
    throw DimensionMismatch("outer_action: operator must be q x q");
  return RandomVariable(f.space(), a * f.value());
}

Submodule::Submodule(ModuleSpace space, Subspace gspace)
    : space_(space), gspace_(std::move(gspace)) {
  if (gspace_.ambient_dim() != space_.p)
    throw DimensionMismatch(
        "Submodule: measurements subspace must sit in C^p");
}

Submodule Submodule::zero(const ModuleSpace& space) {
  return Submodule(space, Subspace::zero(space.p));
}

Submodule Submodule::full(const ModuleSpace& space) {
  return Submodule(space, Subspace::full(space.p));
}

Submodule submodule_generated(const ModuleSpace& space,
                              const std::vector<RandomVariable>& generators,
                              const ToleranceContext& ctx) {
  if (generators.empty()) return Submodule::zero(space);
  Index total = 0;
  for (const auto& g : generators) {
    if (g.space() != space)
      throw SpaceMismatch("submodule_generated: generator space mismatch");
    total += g.space().q;
  }
  Matrix stacked(space.p, total);
  Index col = 0;
  for (const auto& g : generators) {
    stacked.middleCols(col, space.q) = g.value().adjoint();
    col += space.q;
  }
  return Submodule(space, column_space(stacked, ctx));
}

RandomVariable gramian_projection(const Submodule& sub,
                                  const RandomVariable& f) {
  if (sub.space() != f.space())
    throw SpaceMismatch("gramian_projection: space mismatch");
  return RandomVariable(f.space(), f.value() * sub.gspace().projector());
}

bool submodule_contains(const Submodule& sub, const RandomVariable& f,
                        const ToleranceContext& ctx) {
  if (sub.space() != f.space())
    throw SpaceMismatch("submodule_contains: space mismatch");
  const Matrix residual =
      f.value() - f.value() * sub.gspace().projector();
  return residual.norm() <= ctx.eq_tol * std::max(1.0, f.value().norm());
}

}  // namespace gfl
