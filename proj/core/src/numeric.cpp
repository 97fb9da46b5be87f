#include "gfl/numeric.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gfl {

double rel_residual(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("rel_residual: shape mismatch");
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() / scale;
}

bool approx_equal(const Matrix& a, const Matrix& b,
                  const ToleranceContext& ctx) {
  return rel_residual(a, b) <= ctx.eq_tol;
}

HermitianEig hermitian_eig(const Matrix& a, const ToleranceContext& ctx) {
  ctx.validate();
  if (a.rows() != a.cols())
    throw DimensionMismatch("hermitian_eig: matrix not square");
  const double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() > 10.0 * ctx.eq_tol * scale)
    throw NotHermitian("hermitian_eig: input not Hermitian within tolerance");

  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_eig: eigensolver failed to converge");

  // Eigen returns eigenvalues ascending; flip to descending.
  const Index n = a.rows();
  HermitianEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = Matrix(n, n);
  for (Index i = 0; i < n; ++i)
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  return out;
}

Index numerical_rank(const Matrix& a, const ToleranceContext& ctx) {
  ctx.validate();
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double cutoff = ctx.rank_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return rank;
}

Subspace::Subspace(Index ambient_dim, Matrix orthonormal_basis,
                   const ToleranceContext& ctx)
    : ambient_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (ambient_ < 0) throw DimensionMismatch("Subspace: negative ambient dim");
  if (basis_.size() == 0 && basis_.cols() == 0) {
    basis_ = Matrix(ambient_, 0);
    return;
  }
  if (basis_.rows() != ambient_)
    throw DimensionMismatch("Subspace: basis rows != ambient dim");
  if (basis_.cols() > ambient_)
    throw DimensionMismatch("Subspace: more basis vectors than ambient dim");
  const Matrix gram = basis_.adjoint() * basis_;
  const Matrix eye = Matrix::Identity(basis_.cols(), basis_.cols());
  if ((gram - eye).norm() > ctx.eq_tol * std::max<double>(1, basis_.cols()))
    throw ValidationError("Subspace: basis not orthonormal within eq_tol");
}

Subspace Subspace::zero(Index ambient_dim) {
  return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Matrix Subspace::projector() const {
  if (dim() == 0) return Matrix::Zero(ambient_, ambient_);
  return basis_ * basis_.adjoint();
}

Subspace column_space(const Matrix& a, const ToleranceContext& ctx) {
  ctx.validate();
  const Index ambient = a.rows();
  if (a.cols() == 0 || a.norm() == 0.0) return Subspace::zero(ambient);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = ctx.rank_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return Subspace(ambient, svd.matrixU().leftCols(rank), ctx);
}

Subspace span(Index ambient_dim, const std::vector<Vector>& vectors,
              const ToleranceContext& ctx) {
  if (vectors.empty()) return Subspace::zero(ambient_dim);
  Matrix stacked(ambient_dim, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim)
      throw DimensionMismatch("span: generator dimension mismatch");
    stacked.col(static_cast<Index>(i)) = vectors[i];
  }
  return column_space(stacked, ctx);
}

Subspace intersect(const Subspace& s1, const Subspace& s2,
                   const ToleranceContext& ctx) {
  ctx.validate();
  if (s1.ambient_dim() != s2.ambient_dim())
    throw DimensionMismatch("intersect: ambient dimension mismatch");
  const Index n = s1.ambient_dim();
  if (n == 0) return Subspace::zero(0);
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix m = (eye - s1.projector()) + (eye - s2.projector());
  const HermitianEig eig = hermitian_eig(m, ctx);
  const double lmax = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  const double cutoff = ctx.rank_tol * std::max(1.0, lmax);
  // m is PSD; null vectors sit at the bottom of the descending spectrum.
  Index null_dim = 0;
  for (Index i = eig.eigenvalues.size(); i-- > 0;) {
    if (eig.eigenvalues(i) <= cutoff)
      ++null_dim;
    else
      break;
  }
  return Subspace(n, eig.eigenvectors.rightCols(null_dim), ctx);
}

bool contains(const Subspace& s1, const Subspace& s2,
              const ToleranceContext& ctx) {
  ctx.validate();
  if (s1.ambient_dim() != s2.ambient_dim())
    throw DimensionMismatch("contains: ambient dimension mismatch");
  if (s2.dim() == 0) return true;
  const Matrix residual = s2.basis() - s1.projector() * s2.basis();
  return residual.norm() <= ctx.eq_tol * std::max(1.0, s2.basis().norm());
}

}  // namespace gfl
