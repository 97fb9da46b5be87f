#include "gfl/fields.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace gfl {

Grid::Grid(int d_, Index n_, double delta_, std::array<double, 2> origin_)
    : d(d_), n(n_), delta(delta_), origin(origin_) {
  if (d != 1 && d != 2) throw ValidationError("Grid: d must be 1 or 2");
  if (n < 2) throw ValidationError("Grid: need at least 2 points per axis");
  if (!(delta > 0.0)) throw ValidationError("Grid: delta must be positive");
  if (!std::isfinite(origin[0]) || !std::isfinite(origin[1]))
    throw ValidationError("Grid: non-finite origin");
}

Index Grid::size() const { return d == 1 ? n : n * n; }

double Grid::cell_volume() const { return d == 1 ? delta : delta * delta; }

std::array<Index, 2> Grid::multi_index(Index flat) const {
  if (flat < 0 || flat >= size())
    throw GridMismatch("Grid: flat index out of range");
  if (d == 1) return {flat, 0};
  return {flat / n, flat % n};
}

Index Grid::flat_index(const std::array<Index, 2>& mi) const {
  for (int k = 0; k < d; ++k)
    if (mi[static_cast<std::size_t>(k)] < 0 ||
        mi[static_cast<std::size_t>(k)] >= n)
      throw GridMismatch("Grid: multi index out of range");
  return d == 1 ? mi[0] : mi[0] * n + mi[1];
}

std::array<double, 2> Grid::point(Index flat) const {
  const auto mi = multi_index(flat);
  std::array<double, 2> t{0.0, 0.0};
  for (int k = 0; k < d; ++k)
    t[static_cast<std::size_t>(k)] =
        origin[static_cast<std::size_t>(k)] +
        delta * static_cast<double>(mi[static_cast<std::size_t>(k)]);
  return t;
}

bool IndexBox::contains(const std::array<Index, 2>& mi, int d) const {
  for (int k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (mi[kk] < lo[kk] || mi[kk] > hi[kk]) return false;
  }
  return true;
}

TestFunction::TestFunction(Grid grid, Vector samples, IndexBox support)
    : grid_(std::move(grid)),
      samples_(std::move(samples)),
      support_(support) {
  if (samples_.size() != grid_.size())
    throw GridMismatch("TestFunction: sample count != grid size");
  if (!samples_.allFinite())
    throw ValidationError("TestFunction: non-finite samples");
  for (Index c = 0; c < samples_.size(); ++c) {
    if (samples_(c) != Complex(0.0, 0.0) &&
        !support_.contains(grid_.multi_index(c), grid_.d))
      throw ValidationError("TestFunction: nonzero sample outside support");
  }
}

TestFunction bump(const Grid& grid, const std::array<double, 2>& center,
                  double radius) {
  if (!(radius > 0.0)) throw ValidationError("bump: radius must be positive");
  Vector samples = Vector::Zero(grid.size());
  double peak = 0.0;
  for (Index c = 0; c < grid.size(); ++c) {
    const auto t = grid.point(c);
    double r2 = 0.0;
    for (int k = 0; k < grid.d; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double u = (t[kk] - center[kk]) / radius;
      r2 += u * u;
    }
    if (r2 < 1.0) {
      const double v = std::exp(-1.0 / (1.0 - r2));
      samples(c) = v;
      peak = std::max(peak, v);
    }
  }
  if (peak == 0.0)
    throw ValidationError("bump: support lies entirely off the grid");
  samples /= peak;

  IndexBox box;
  box.lo = {grid.n, grid.n};
  box.hi = {-1, -1};
  for (Index c = 0; c < grid.size(); ++c) {
    if (samples(c) == Complex(0.0, 0.0)) continue;
    const auto mi = grid.multi_index(c);
    for (int k = 0; k < grid.d; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      box.lo[kk] = std::min(box.lo[kk], mi[kk]);
      box.hi[kk] = std::max(box.hi[kk], mi[kk]);
    }
  }
  if (grid.d == 1) {
    box.lo[1] = 0;
    box.hi[1] = 0;
  }
  return TestFunction(grid, std::move(samples), box);
}

TestFunction cell_indicator(const Grid& grid, Index cell) {
  const auto mi = grid.multi_index(cell);  // range check
  Vector samples = Vector::Zero(grid.size());
  samples(cell) = 1.0;
  IndexBox box;
  box.lo = mi;
  box.hi = mi;
  return TestFunction(grid, std::move(samples), box);
}

TestFunction conjugate(const TestFunction& phi) {
  return TestFunction(phi.grid(), phi.samples().conjugate(), phi.support());
}

TestFunction linear_combination(Complex alpha, const TestFunction& phi,
                                Complex beta, const TestFunction& psi) {
  if (phi.grid() != psi.grid())
    throw GridMismatch("linear_combination: grids differ");
  IndexBox box;
  const auto& a = phi.support();
  const auto& b = psi.support();
  if (a.empty()) {
    box = b;
  } else if (b.empty()) {
    box = a;
  } else {
    box.lo = {std::min(a.lo[0], b.lo[0]), std::min(a.lo[1], b.lo[1])};
    box.hi = {std::max(a.hi[0], b.hi[0]), std::max(a.hi[1], b.hi[1])};
  }
  return TestFunction(phi.grid(),
                      alpha * phi.samples() + beta * psi.samples(), box);
}

RandomField::RandomField(Grid grid, std::vector<RandomVariable> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != grid_.size())
    throw GridMismatch("RandomField: value count != grid size");
  for (const auto& v : values_)
    if (v.space() != values_.front().space())
      throw SpaceMismatch("RandomField: values span multiple spaces");
}

RandomVariable smear(const RandomField& f, const TestFunction& phi) {
  if (f.grid() != phi.grid()) throw GridMismatch("smear: grids differ");
  Matrix acc = Matrix::Zero(f.space().q, f.space().p);
  for (Index c = 0; c < f.grid().size(); ++c)
    acc += phi.samples()(c) * f.value(c).value();
  return RandomVariable(f.space(), f.grid().cell_volume() * acc);
}

OperatorKernel field_covariance_kernel(const RandomField& f) {
  const Index m = f.grid().size();
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  for (Index c = 0; c < m; ++c) labels.push_back(std::to_string(c));
  std::vector<std::vector<Matrix>> blocks(
      static_cast<std::size_t>(m),
      std::vector<Matrix>(static_cast<std::size_t>(m)));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          gramian(f.value(i), f.value(j));
  return OperatorKernel(std::move(labels), f.space().q, std::move(blocks));
}

RandomDistributionField::RandomDistributionField(
    Grid grid, std::vector<TestFunction> basis,
    std::vector<RandomVariable> values)
    : grid_(std::move(grid)),
      basis_(std::move(basis)),
      values_(std::move(values)) {
  if (basis_.empty())
    throw ValidationError("RandomDistributionField: empty basis");
  if (basis_.size() != values_.size())
    throw ValidationError(
        "RandomDistributionField: basis/value count mismatch");
  for (const auto& phi : basis_)
    if (phi.grid() != grid_)
      throw GridMismatch("RandomDistributionField: basis grid mismatch");
  for (const auto& v : values_)
    if (v.space() != values_.front().space())
      throw SpaceMismatch(
          "RandomDistributionField: values span multiple spaces");
  sample_matrix_ = Matrix(grid_.size(), static_cast<Index>(basis_.size()));
  for (std::size_t k = 0; k < basis_.size(); ++k)
    sample_matrix_.col(static_cast<Index>(k)) = basis_[k].samples();
}

RandomVariable RandomDistributionField::apply(const TestFunction& phi,
                                              const ToleranceContext& ctx) const {
  if (phi.grid() != grid_)
    throw GridMismatch("RandomDistributionField: test function grid mismatch");
  Eigen::JacobiSVD<Matrix> svd(sample_matrix_,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(ctx.rank_tol);
  const Vector coeff = svd.solve(phi.samples());
  const double residual = (sample_matrix_ * coeff - phi.samples()).norm();
  if (residual > ctx.eq_tol * std::max(1.0, phi.samples().norm()))
    throw OutsideSpan(
        "RandomDistributionField: test function outside the representable "
        "span");
  Matrix acc = Matrix::Zero(space().q, space().p);
  for (std::size_t k = 0; k < values_.size(); ++k)
    acc += coeff(static_cast<Index>(k)) * values_[k].value();
  return RandomVariable(space(), std::move(acc));
}

RandomDistributionField field_to_rdf(const RandomField& f,
                                     const std::vector<TestFunction>& basis) {
  std::vector<RandomVariable> values;
  values.reserve(basis.size());
  for (const auto& phi : basis) values.push_back(smear(f, phi));
  return RandomDistributionField(f.grid(), basis, std::move(values));
}

Matrix covariance_distribution(const RandomDistributionField& u,
                               const TestFunction& phi,
                               const TestFunction& psi,
                               const ToleranceContext& ctx) {
  return gramian(u.apply(phi, ctx), u.apply(psi, ctx));
}

Complex scalar_covariance_distribution(const RandomDistributionField& u,
                                       const TestFunction& phi,
                                       const TestFunction& psi,
                                       const ToleranceContext& ctx) {
  return covariance_distribution(u, phi, psi, ctx).trace();
}

Matrix kernel_to_distribution(const Grid& grid, const OperatorKernel& k,
                              const TestFunction& phi,
                              const TestFunction& psi) {
  if (k.size() != grid.size())
    throw GridMismatch("kernel_to_distribution: kernel is not grid-indexed");
  if (phi.grid() != grid || psi.grid() != grid)
    throw GridMismatch("kernel_to_distribution: test function grid mismatch");
  Matrix acc = Matrix::Zero(k.q(), k.q());
  for (Index s = 0; s < grid.size(); ++s) {
    if (phi.samples()(s) == Complex(0.0, 0.0)) continue;
    for (Index t = 0; t < grid.size(); ++t)
      acc += phi.samples()(s) * std::conj(psi.samples()(t)) * k.block(s, t);
  }
  const double vol = grid.cell_volume();
  return vol * vol * acc;
}

}  // namespace gfl
