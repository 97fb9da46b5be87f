#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gfl/errors.hpp"

namespace gfl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical policy shared by every rank/PSD/equality decision in the
/// library. All three cutoffs are relative; see the individual operations
/// for the exact scale each one is measured against.
struct ToleranceContext {
  /// Singular values below rank_tol * sigma_max are treated as zero.
  double rank_tol = 1e-10;
  /// Eigenvalues above -psd_tol * |lambda|_max count as nonnegative.
  double psd_tol = 1e-10;
  /// Frobenius comparisons: equal when the residual is below
  /// eq_tol * max(1, norms of the operands).
  double eq_tol = 1e-9;

  void validate() const {
    if (!(rank_tol > 0.0) || !(psd_tol > 0.0) || !(eq_tol > 0.0))
      throw ValidationError("ToleranceContext: tolerances must be positive");
  }
};

/// ||a - b||_F / max(1, ||a||_F, ||b||_F).
double rel_residual(const Matrix& a, const Matrix& b);

bool approx_equal(const Matrix& a, const Matrix& b,
                  const ToleranceContext& ctx = {});

struct HermitianEig {
  RealVector eigenvalues;  ///< descending
  Matrix eigenvectors;     ///< unitary, column i pairs with eigenvalues[i]
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// The input is symmetrized before decomposition; deviations from
/// Hermitian symmetry beyond 10 * eq_tol (relative) are an error.
HermitianEig hermitian_eig(const Matrix& a, const ToleranceContext& ctx = {});

/// Number of singular values above rank_tol * sigma_max (0 for the zero
/// matrix).
Index numerical_rank(const Matrix& a, const ToleranceContext& ctx = {});

/// A subspace of C^ambient, stored as an orthonormal column basis.
class Subspace {
 public:
  Subspace() = default;

  /// Wraps an orthonormal basis; throws if the columns are not orthonormal
  /// within eq_tol or exceed the ambient dimension.
  Subspace(Index ambient_dim, Matrix orthonormal_basis,
           const ToleranceContext& ctx = {});

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projector basis * basis^H (ambient x ambient).
  Matrix projector() const;

 private:
  Index ambient_ = 0;
  Matrix basis_;  // ambient x dim
};

/// Orthonormal basis of the linear span of the given vectors. The empty
/// generator set yields the zero subspace of C^ambient_dim.
Subspace span(Index ambient_dim, const std::vector<Vector>& vectors,
              const ToleranceContext& ctx = {});

/// Orthonormal basis of the column space of a (rows define the ambient
/// dimension).
Subspace column_space(const Matrix& a, const ToleranceContext& ctx = {});

/// Intersection of two subspaces, computed as the null space of
/// (I - P1) + (I - P2) with the rank_tol eigenvalue cutoff.
Subspace intersect(const Subspace& s1, const Subspace& s2,
                   const ToleranceContext& ctx = {});

/// True iff s2 lies inside s1:
/// ||(I - P1) basis(s2)||_F <= eq_tol * max(1, ||basis(s2)||_F).
bool contains(const Subspace& s1, const Subspace& s2,
              const ToleranceContext& ctx = {});

}  // namespace gfl
