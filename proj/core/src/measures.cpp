#include "gfl/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gfl/rng.hpp"

namespace gfl {

CellSet::CellSet(Grid grid, std::vector<Index> members)
    : grid_(std::move(grid)), members_(std::move(members)) {
  for (Index c : members_)
    if (c < 0 || c >= grid_.size())
      throw GridMismatch("CellSet: cell index out of range");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
}

StochasticMeasure::StochasticMeasure(Grid grid,
                                     std::vector<RandomVariable> atoms)
    : grid_(std::move(grid)), atoms_(std::move(atoms)) {
  if (static_cast<Index>(atoms_.size()) != grid_.size())
    throw GridMismatch("StochasticMeasure: atom count != grid size");
  for (const auto& a : atoms_)
    if (a.space() != atoms_.front().space())
      throw SpaceMismatch("StochasticMeasure: atoms span multiple spaces");
}

StochasticMeasure measure_from_field(const RandomField& f) {
  const double vol = f.grid().cell_volume();
  std::vector<RandomVariable> atoms;
  atoms.reserve(static_cast<std::size_t>(f.grid().size()));
  for (Index c = 0; c < f.grid().size(); ++c)
    atoms.emplace_back(f.space(), vol * f.value(c).value());
  return StochasticMeasure(f.grid(), std::move(atoms));
}

RandomVariable evaluate(const StochasticMeasure& xi, const CellSet& a) {
  if (xi.grid() != a.grid()) throw GridMismatch("evaluate: grids differ");
  Matrix acc = Matrix::Zero(xi.space().q, xi.space().p);
  for (Index c : a.members()) acc += xi.atom(c).value();
  return RandomVariable(xi.space(), std::move(acc));
}

RandomDistributionField measure_to_rdf(
    const StochasticMeasure& xi, const std::vector<TestFunction>& basis) {
  std::vector<RandomVariable> values;
  values.reserve(basis.size());
  for (const auto& phi : basis) {
    if (phi.grid() != xi.grid())
      throw GridMismatch("measure_to_rdf: basis grid mismatch");
    Matrix acc = Matrix::Zero(xi.space().q, xi.space().p);
    for (Index c = 0; c < xi.grid().size(); ++c)
      acc += phi.samples()(c) * xi.atom(c).value();
    values.emplace_back(xi.space(), std::move(acc));
  }
  return RandomDistributionField(xi.grid(), basis, std::move(values));
}

Bimeasure::Bimeasure(Grid grid, Index q,
                     std::vector<std::vector<Matrix>> table)
    : grid_(std::move(grid)), q_(q), table_(std::move(table)) {
  const auto m = static_cast<std::size_t>(grid_.size());
  if (table_.size() != m)
    throw GridMismatch("Bimeasure: table row count != grid size");
  for (const auto& row : table_) {
    if (row.size() != m) throw GridMismatch("Bimeasure: ragged table");
    for (const auto& e : row)
      if (e.rows() != q_ || e.cols() != q_)
        throw DimensionMismatch("Bimeasure: entry is not q x q");
  }
}

const Matrix& Bimeasure::entry(Index c1, Index c2) const {
  return table_.at(static_cast<std::size_t>(c1))
      .at(static_cast<std::size_t>(c2));
}

Matrix Bimeasure::value(const CellSet& a, const CellSet& b) const {
  if (a.grid() != grid_ || b.grid() != grid_)
    throw GridMismatch("Bimeasure: cell set grid mismatch");
  Matrix acc = Matrix::Zero(q_, q_);
  for (Index c1 : a.members())
    for (Index c2 : b.members()) acc += entry(c1, c2);
  return acc;
}

Bimeasure bimeasure_of(const StochasticMeasure& xi) {
  const auto m = static_cast<std::size_t>(xi.grid().size());
  std::vector<std::vector<Matrix>> table(m, std::vector<Matrix>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[i][j] = gramian(xi.atom(static_cast<Index>(i)),
                            xi.atom(static_cast<Index>(j)));
  return Bimeasure(xi.grid(), xi.space().q, std::move(table));
}

Bimeasure kernel_to_bimeasure(const Grid& grid, const OperatorKernel& k) {
  if (k.size() != grid.size())
    throw GridMismatch("kernel_to_bimeasure: kernel is not grid-indexed");
  const double w = grid.cell_volume() * grid.cell_volume();
  const auto m = static_cast<std::size_t>(grid.size());
  std::vector<std::vector<Matrix>> table(m, std::vector<Matrix>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[i][j] = w * k.block(static_cast<Index>(i), static_cast<Index>(j));
  return Bimeasure(grid, k.q(), std::move(table));
}

Matrix mt_integral(const Bimeasure& tau, const TestFunction& phi,
                   const TestFunction& psi) {
  if (phi.grid() != tau.grid() || psi.grid() != tau.grid())
    throw GridMismatch("mt_integral: test function grid mismatch");
  Matrix acc = Matrix::Zero(tau.q(), tau.q());
  for (Index c1 = 0; c1 < tau.grid().size(); ++c1) {
    if (phi.samples()(c1) == Complex(0.0, 0.0)) continue;
    for (Index c2 = 0; c2 < tau.grid().size(); ++c2)
      acc += phi.samples()(c1) * psi.samples()(c2) * tau.entry(c1, c2);
  }
  return acc;
}

namespace {

constexpr std::array<Complex, 4> kQuarterPhases = {
    Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(-1.0, 0.0),
    Complex(0.0, -1.0)};

// Depth-first sweep over phase tuples with shared partial sums; the leaf
// association order matches a plain left-to-right accumulation.
void phase_search(const std::vector<Matrix>& atoms, std::size_t depth,
                  std::vector<Matrix>& partial, double& best) {
  if (depth == atoms.size()) {
    best = std::max(best, partial[depth].norm());
    return;
  }
  for (const Complex& z : kQuarterPhases) {
    partial[depth + 1] = partial[depth] + z * atoms[depth];
    phase_search(atoms, depth + 1, partial, best);
  }
}

std::vector<Matrix> gather_atoms(const StochasticMeasure& xi,
                                 const CellSet& a) {
  if (xi.grid() != a.grid())
    throw GridMismatch("semivariation: cell set grid mismatch");
  std::vector<Matrix> atoms;
  atoms.reserve(static_cast<std::size_t>(a.size()));
  for (Index c : a.members()) atoms.push_back(xi.atom(c).value());
  return atoms;
}

double phase_objective(const std::vector<Matrix>& atoms,
                       const std::vector<Complex>& alpha, Matrix& scratch) {
  scratch.setZero();
  for (std::size_t c = 0; c < atoms.size(); ++c)
    scratch += alpha[c] * atoms[c];
  return scratch.norm();
}

SemivariationResult scalar_ascent(const std::vector<Matrix>& atoms, Index q,
                                  Index p, int restarts, uint64_t seed) {
  SemivariationResult best{0.0, true};
  if (atoms.empty()) return best;
  Matrix scratch(q, p);
  for (int r = 0; r < std::max(1, restarts); ++r) {
    std::vector<Complex> alpha(atoms.size(), Complex(1.0, 0.0));
    if (r > 0) {
      Rng rng(Rng::split(seed, static_cast<uint64_t>(r)));
      for (auto& z : alpha) {
        const double theta = 2.0 * M_PI * rng.uniform();
        z = Complex(std::cos(theta), std::sin(theta));
      }
    }
    double value = phase_objective(atoms, alpha, scratch);
    bool converged = false;
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (std::size_t c = 0; c < atoms.size(); ++c) {
        // Maximize |B + alpha_c A_c| over the unit circle: the optimizer is
        // the phase aligning tr(B^H A_c) with the real axis.
        const Matrix b = scratch - alpha[c] * atoms[c];
        const Complex z = (b.adjoint() * atoms[c]).trace();
        if (std::abs(z) > 0.0) alpha[c] = std::conj(z) / std::abs(z);
        scratch = b + alpha[c] * atoms[c];
      }
      const double next = phase_objective(atoms, alpha, scratch);
      if (next <= value * (1.0 + 1e-14) &&
          next >= value - 1e-14 * std::max(1.0, value)) {
        value = std::max(value, next);
        converged = true;
        break;
      }
      value = next;
    }
    if (value > best.lower_bound) best = {value, converged};
  }
  return best;
}

// Quaternary signed permutation unitaries: permutation matrices with fourth
// roots of unity as the nonzero entries; 4 matrices for q=1, 32 for q=2.
std::vector<Matrix> signed_permutation_family(Index q) {
  std::vector<Matrix> family;
  if (q == 1) {
    for (const Complex& z : kQuarterPhases) {
      Matrix m(1, 1);
      m(0, 0) = z;
      family.push_back(m);
    }
    return family;
  }
  for (int perm = 0; perm < 2; ++perm)
    for (const Complex& z0 : kQuarterPhases)
      for (const Complex& z1 : kQuarterPhases) {
        Matrix m = Matrix::Zero(2, 2);
        if (perm == 0) {
          m(0, 0) = z0;
          m(1, 1) = z1;
        } else {
          m(0, 1) = z0;
          m(1, 0) = z1;
        }
        family.push_back(m);
      }
  return family;
}

void family_search(const std::vector<Matrix>& atoms,
                   const std::vector<Matrix>& family, std::size_t depth,
                   std::vector<Matrix>& partial, double& best) {
  if (depth == atoms.size()) {
    best = std::max(best, partial[depth].norm());
    return;
  }
  for (const Matrix& u : family) {
    partial[depth + 1] = partial[depth] + u * atoms[depth];
    family_search(atoms, family, depth + 1, partial, best);
  }
}

double family_coordinate_ascent(const std::vector<Matrix>& atoms,
                                const std::vector<Matrix>& family, Index q,
                                Index p) {
  std::vector<std::size_t> pick(atoms.size(), 0);  // identity first in family
  Matrix total = Matrix::Zero(q, p);
  for (std::size_t c = 0; c < atoms.size(); ++c)
    total += family[pick[c]] * atoms[c];
  double value = total.norm();
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool improved = false;
    for (std::size_t c = 0; c < atoms.size(); ++c) {
      const Matrix b = total - family[pick[c]] * atoms[c];
      double local = -1.0;
      std::size_t arg = pick[c];
      for (std::size_t f = 0; f < family.size(); ++f) {
        const double cand = (b + family[f] * atoms[c]).norm();
        if (cand > local) {
          local = cand;
          arg = f;
        }
      }
      if (arg != pick[c] && local > value * (1.0 + 1e-14)) {
        pick[c] = arg;
        improved = true;
      }
      total = b + family[pick[c]] * atoms[c];
      value = total.norm();
    }
    if (!improved) break;
  }
  return value;
}

Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

SemivariationResult unitary_ascent(const std::vector<Matrix>& atoms, Index q,
                                   Index p, int restarts, uint64_t seed) {
  SemivariationResult best{0.0, true};
  if (atoms.empty()) return best;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    std::vector<Matrix> coeff(atoms.size(), Matrix::Identity(q, q));
    if (r > 0) {
      Rng rng(Rng::split(seed, 0x9e00 + static_cast<uint64_t>(r)));
      for (auto& u : coeff) {
        const Matrix g = rng.complex_gaussian_matrix(q, q);
        Eigen::HouseholderQR<Matrix> qr(g);
        u = qr.householderQ() * Matrix::Identity(q, q);
      }
    }
    Matrix total = Matrix::Zero(q, p);
    for (std::size_t c = 0; c < atoms.size(); ++c)
      total += coeff[c] * atoms[c];
    double value = total.norm();
    bool converged = false;
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (std::size_t c = 0; c < atoms.size(); ++c) {
        // Among unitary coefficients the cross term tr(A_c B^H u) is maximal
        // at the adjoint polar factor; the quadratic term is unitarily
        // invariant, so the update is coordinatewise optimal.
        const Matrix b = total - coeff[c] * atoms[c];
        const Matrix cross = atoms[c] * b.adjoint();
        if (cross.norm() > 0.0) coeff[c] = polar_unitary(cross);
        total = b + coeff[c] * atoms[c];
      }
      const double next = total.norm();
      if (next <= value * (1.0 + 1e-14) &&
          next >= value - 1e-14 * std::max(1.0, value)) {
        value = std::max(value, next);
        converged = true;
        break;
      }
      value = next;
    }
    if (value > best.lower_bound) best = {value, converged};
  }
  return best;
}

}  // namespace

SemivariationResult semivariation(const StochasticMeasure& xi,
                                  const CellSet& a,
                                  const SemivariationStrategy& strategy,
                                  const ToleranceContext& ctx) {
  ctx.validate();
  const std::vector<Matrix> atoms = gather_atoms(xi, a);
  const Index q = xi.space().q;
  const Index p = xi.space().p;
  if (strategy.kind == SemivariationStrategy::Kind::exhaustive_phases) {
    if (atoms.size() > 12)
      throw ValidationError(
          "semivariation: exhaustive_phases limited to 12 cells");
    double best = 0.0;
    std::vector<Matrix> partial(atoms.size() + 1, Matrix::Zero(q, p));
    phase_search(atoms, 0, partial, best);
    return {best, true};
  }
  return scalar_ascent(atoms, q, p, strategy.restarts, strategy.seed);
}

SemivariationResult operator_semivariation(
    const StochasticMeasure& xi, const CellSet& a,
    const SemivariationStrategy& strategy, const ToleranceContext& ctx) {
  ctx.validate();
  const std::vector<Matrix> atoms = gather_atoms(xi, a);
  const Index q = xi.space().q;
  const Index p = xi.space().p;

  if (q == 1) return semivariation(xi, a, strategy, ctx);

  SemivariationResult scalar;
  SemivariationResult op{0.0, true};
  if (strategy.kind == SemivariationStrategy::Kind::exhaustive_phases) {
    if (atoms.size() > 12)
      throw ValidationError(
          "operator_semivariation: exhaustive_phases limited to 12 cells");
    if (q > 2)
      throw ValidationError(
          "operator_semivariation: the exhaustive unitary family is defined "
          "for q <= 2; use alternating_ascent");
    scalar = semivariation(xi, a, strategy, ctx);
    const std::vector<Matrix> family = signed_permutation_family(q);
    // Full enumeration while the tuple count stays within the scalar
    // exhaustive budget 4^12; coordinate ascent over the family otherwise.
    const double budget = std::pow(4.0, 12);
    if (std::pow(static_cast<double>(family.size()),
                 static_cast<double>(atoms.size())) <= budget) {
      double best = 0.0;
      std::vector<Matrix> partial(atoms.size() + 1, Matrix::Zero(q, p));
      family_search(atoms, family, 0, partial, best);
      op = {best, true};
    } else {
      op = {family_coordinate_ascent(atoms, family, q, p), true};
    }
  } else {
    scalar = semivariation(xi, a, strategy, ctx);
    op = unitary_ascent(atoms, q, p, strategy.restarts, strategy.seed);
  }
  if (scalar.lower_bound > op.lower_bound)
    return {scalar.lower_bound, scalar.converged};
  return op;
}

namespace {

Subspace joint_row_space(const std::vector<RandomVariable>& values,
                         const ToleranceContext& ctx) {
  if (values.empty()) return Subspace::zero(0);
  return submodule_generated(values.front().space(), values, ctx).gspace();
}

std::vector<RandomVariable> resolve_basis(const RandomDistributionField& u,
                                          const std::vector<TestFunction>& basis,
                                          const ToleranceContext& ctx) {
  std::vector<RandomVariable> images;
  images.reserve(basis.size());
  for (const auto& phi : basis) images.push_back(u.apply(phi, ctx));
  return images;
}

void coherence_measure_clause(Report& report, const StochasticMeasure& xi,
                              const std::vector<TestFunction>& basis,
                              const ToleranceContext& ctx) {
  const RandomDistributionField u = measure_to_rdf(xi, basis);
  const Bimeasure tau = bimeasure_of(xi);
  const std::vector<RandomVariable> images = resolve_basis(u, basis, ctx);
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Matrix lhs = gramian(images[i], images[j]);
      const Matrix rhs = mt_integral(tau, basis[i], conjugate(basis[j]));
      worst = std::max(worst, rel_residual(lhs, rhs));
    }
  report.add("measure_covariance_vs_strict_integral", worst, ctx.eq_tol);
}

bool basis_spans_all_cells(const Grid& grid,
                           const std::vector<TestFunction>& basis,
                           const ToleranceContext& ctx) {
  Matrix samples(grid.size(), static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    samples.col(static_cast<Index>(k)) = basis[k].samples();
  return numerical_rank(samples, ctx) == grid.size();
}

}  // namespace

Report coherence_check(const RandomField& f,
                       const std::vector<TestFunction>& basis,
                       const ToleranceContext& ctx) {
  ctx.validate();
  if (basis.empty()) throw ValidationError("coherence_check: empty basis");
  Report report;
  report.name = "field_coherence";

  const StochasticMeasure xi = measure_from_field(f);
  coherence_measure_clause(report, xi, basis, ctx);

  const RandomDistributionField u = field_to_rdf(f, basis);
  const OperatorKernel gamma = field_covariance_kernel(f);
  const std::vector<RandomVariable> images = resolve_basis(u, basis, ctx);
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Matrix lhs = gramian(images[i], images[j]);
      const Matrix rhs =
          kernel_to_distribution(f.grid(), gamma, basis[i], basis[j]);
      worst = std::max(worst, rel_residual(lhs, rhs));
    }
  report.add("field_covariance_vs_kernel_quadrature", worst, ctx.eq_tol);

  if (!basis_spans_all_cells(f.grid(), basis, ctx)) {
    report.add_skipped("measurement_spaces_coincide");
    return report;
  }
  const Subspace g_field = joint_row_space(f.values(), ctx);
  const Subspace g_measure = joint_row_space(xi.atoms(), ctx);
  const Subspace g_rdf = joint_row_space(u.values(), ctx);
  const double space_residual =
      std::max(rel_residual(g_field.projector(), g_measure.projector()),
               rel_residual(g_field.projector(), g_rdf.projector()));
  report.add("measurement_spaces_coincide", space_residual, ctx.eq_tol);
  return report;
}

Report coherence_check(const StochasticMeasure& xi,
                       const std::vector<TestFunction>& basis,
                       const ToleranceContext& ctx) {
  ctx.validate();
  if (basis.empty()) throw ValidationError("coherence_check: empty basis");
  Report report;
  report.name = "measure_coherence";
  coherence_measure_clause(report, xi, basis, ctx);

  if (!basis_spans_all_cells(xi.grid(), basis, ctx)) {
    report.add_skipped("measurement_spaces_coincide");
    return report;
  }
  const RandomDistributionField u = measure_to_rdf(xi, basis);
  const Subspace g_measure = joint_row_space(xi.atoms(), ctx);
  const Subspace g_rdf = joint_row_space(u.values(), ctx);
  report.add("measurement_spaces_coincide",
             rel_residual(g_measure.projector(), g_rdf.projector()),
             ctx.eq_tol);
  return report;
}

}  // namespace gfl
