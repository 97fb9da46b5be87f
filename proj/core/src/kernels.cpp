#include "gfl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include <Eigen/SVD>

#include "gfl/rng.hpp"

namespace gfl {

OperatorKernel::OperatorKernel(std::vector<std::string> labels, Index q,
                               std::vector<std::vector<Matrix>> blocks,
                               bool require_hermitian,
                               const ToleranceContext& ctx)
    : labels_(std::move(labels)), q_(q), blocks_(std::move(blocks)) {
  if (labels_.empty()) throw ValidationError("OperatorKernel: no labels");
  if (q_ < 1) throw ValidationError("OperatorKernel: q must be >= 1");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw ValidationError("OperatorKernel: duplicate label '" + l + "'");
  const std::size_t m = labels_.size();
  if (blocks_.size() != m)
    throw DimensionMismatch("OperatorKernel: block row count != label count");
  for (const auto& row : blocks_) {
    if (row.size() != m)
      throw DimensionMismatch("OperatorKernel: ragged block rows");
    for (const auto& b : row) {
      if (b.rows() != q_ || b.cols() != q_)
        throw DimensionMismatch("OperatorKernel: block is not q x q");
      if (!b.allFinite())
        throw ValidationError("OperatorKernel: non-finite block entries");
    }
  }
  if (require_hermitian && !hermitian_symmetric(ctx))
    throw NotHermitian("OperatorKernel: blocks lack Hermitian symmetry");
}

const Matrix& OperatorKernel::block(Index i, Index j) const {
  return blocks_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
}

Index OperatorKernel::label_index(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw UnknownLabel("OperatorKernel: unknown label '" + label + "'");
  return static_cast<Index>(it - labels_.begin());
}

bool OperatorKernel::hermitian_symmetric(const ToleranceContext& ctx) const {
  const Index m = size();
  double scale = 1.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) scale = std::max(scale, block(i, j).norm());
  for (Index i = 0; i < m; ++i)
    for (Index j = i; j < m; ++j)
      if ((block(i, j) - block(j, i).adjoint()).norm() > ctx.eq_tol * scale)
        return false;
  return true;
}

Matrix OperatorKernel::assembled() const {
  const Index m = size();
  Matrix a(m * q_, m * q_);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      a.block(i * q_, j * q_, q_, q_) = block(i, j);
  return a;
}

OperatorKernel kernel_from_assembled(std::vector<std::string> labels, Index q,
                                     const Matrix& assembled,
                                     bool require_hermitian,
                                     const ToleranceContext& ctx) {
  const Index m = static_cast<Index>(labels.size());
  if (assembled.rows() != m * q || assembled.cols() != m * q)
    throw DimensionMismatch("kernel_from_assembled: matrix is not mq x mq");
  std::vector<std::vector<Matrix>> blocks(m, std::vector<Matrix>(m));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      blocks[i][j] = assembled.block(i * q, j * q, q, q);
  return OperatorKernel(std::move(labels), q, std::move(blocks),
                        require_hermitian, ctx);
}

OperatorKernel covariance_kernel(const StochasticMapping& phi,
                                 const ToleranceContext& ctx) {
  const Index m = phi.size();
  std::vector<std::vector<Matrix>> blocks(m, std::vector<Matrix>(m));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      blocks[i][j] = gramian(phi.value(i), phi.value(j));
  return OperatorKernel(phi.labels(), phi.space().q, std::move(blocks), true,
                        ctx);
}

OperatorKernel cross_covariance_kernel(const StochasticMapping& phi,
                                       const StochasticMapping& psi) {
  if (phi.space() != psi.space())
    throw SpaceMismatch("cross_covariance_kernel: space mismatch");
  if (phi.labels() != psi.labels())
    throw LabelMismatch("cross_covariance_kernel: label lists differ");
  const Index m = phi.size();
  std::vector<std::vector<Matrix>> blocks(m, std::vector<Matrix>(m));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      blocks[i][j] = gramian(phi.value(i), psi.value(j));
  return OperatorKernel(phi.labels(), phi.space().q, std::move(blocks), false);
}

ScalarKernel scalar_covariance(const StochasticMapping& phi,
                               const ToleranceContext& ctx) {
  const OperatorKernel k = covariance_kernel(phi, ctx);
  const Index m = k.size();
  ScalarKernel s;
  s.labels = k.labels();
  s.entries = Matrix(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) s.entries(i, j) = k.block(i, j).trace();
  return s;
}

bool is_positive_definite(const OperatorKernel& k,
                          const ToleranceContext& ctx) {
  if (!k.hermitian_symmetric(ctx))
    throw NotHermitian("is_positive_definite: kernel lacks Hermitian symmetry");
  const HermitianEig eig = hermitian_eig(k.assembled(), ctx);
  const Index n = eig.eigenvalues.size();
  if (n == 0) return true;
  const double max_abs =
      std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  return eig.eigenvalues(n - 1) >= -ctx.psd_tol * max_abs;
}

bool operator_coefficient_positivity_sample(const OperatorKernel& k,
                                            int trials, uint64_t seed,
                                            const ToleranceContext& ctx) {
  if (!k.hermitian_symmetric(ctx))
    throw NotHermitian(
        "operator_coefficient_positivity_sample: kernel lacks Hermitian "
        "symmetry");
  const Index m = k.size();
  const Index q = k.q();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    // One block row a = [a_1 ... a_m]; the quadratic form is a K a^H.
    const Matrix a = rng.complex_gaussian_matrix(q, m * q);
    Matrix form = Matrix::Zero(q, q);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        form += a.middleCols(i * q, q) * k.block(i, j) *
                a.middleCols(j * q, q).adjoint();
    const HermitianEig eig = hermitian_eig(form, ctx);
    const Index n = eig.eigenvalues.size();
    const double max_abs = std::max(std::abs(eig.eigenvalues(0)),
                                    std::abs(eig.eigenvalues(n - 1)));
    if (eig.eigenvalues(n - 1) < -ctx.psd_tol * std::max(1.0, max_abs))
      return false;
  }
  return true;
}

StochasticMapping kolmogorov_factorize(const OperatorKernel& k,
                                       const ToleranceContext& ctx) {
  const Index m = k.size();
  const Index q = k.q();
  const HermitianEig eig = hermitian_eig(k.assembled(), ctx);
  const Index n = eig.eigenvalues.size();
  const double max_abs =
      std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  if (eig.eigenvalues(n - 1) < -ctx.psd_tol * max_abs)
    throw NotPositiveDefinite(
        "kolmogorov_factorize: kernel has a negative eigenvalue beyond "
        "psd_tol");
  const double cutoff = ctx.psd_tol * std::max(0.0, max_abs);
  Index rank = 0;
  while (rank < n && eig.eigenvalues(rank) > cutoff) ++rank;

  // Zero kernel: the only factor is the zero mapping; keep one coordinate so
  // the module space stays valid.
  const Index p = std::max<Index>(rank, 1);
  Matrix w = Matrix::Zero(n, p);
  for (Index c = 0; c < rank; ++c)
    w.col(c) = eig.eigenvectors.col(c) * std::sqrt(eig.eigenvalues(c));

  const ModuleSpace space(q, p);
  std::vector<RandomVariable> values;
  values.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    values.emplace_back(space, w.middleRows(i * q, q));
  return StochasticMapping(k.labels(), std::move(values));
}

Matrix gramian_unitary_connector(const StochasticMapping& phi1,
                                 const StochasticMapping& phi2,
                                 const ToleranceContext& ctx) {
  if (phi1.space().q != phi2.space().q)
    throw SpaceMismatch("gramian_unitary_connector: state dimensions differ");
  if (phi1.labels() != phi2.labels())
    throw LabelMismatch("gramian_unitary_connector: label lists differ");
  const Matrix k1 = covariance_kernel(phi1, ctx).assembled();
  const Matrix k2 = covariance_kernel(phi2, ctx).assembled();
  if (rel_residual(k1, k2) > ctx.eq_tol)
    throw KernelMismatch(
        "gramian_unitary_connector: covariance kernels differ beyond eq_tol");

  const Index m = phi1.size();
  const Index q = phi1.space().q;
  Matrix s1(m * q, phi1.space().p);
  Matrix s2(m * q, phi2.space().p);
  for (Index i = 0; i < m; ++i) {
    s1.middleRows(i * q, q) = phi1.value(i).value();
    s2.middleRows(i * q, q) = phi2.value(i).value();
  }
  // Least squares for u^H in s2 u^H = s1; exact because both stacks factor
  // the same assembled kernel.
  Eigen::JacobiSVD<Matrix> svd(s2, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(ctx.rank_tol);
  const Matrix u_adj = svd.solve(s1);
  return u_adj.adjoint();
}

RKHMElement make_rkhm_element(KernelHandle kernel,
                              std::vector<Matrix> coefficients) {
  if (!kernel) throw ValidationError("make_rkhm_element: null kernel");
  if (static_cast<Index>(coefficients.size()) != kernel->size())
    throw ValidationError(
        "make_rkhm_element: coefficient count != label count");
  for (const auto& a : coefficients)
    if (a.rows() != kernel->q() || a.cols() != kernel->q())
      throw DimensionMismatch("make_rkhm_element: coefficient is not q x q");
  return RKHMElement{std::move(kernel), std::move(coefficients)};
}

RKHSElement make_rkhs_element(KernelHandle kernel,
                              std::vector<Vector> coefficients) {
  if (!kernel) throw ValidationError("make_rkhs_element: null kernel");
  if (static_cast<Index>(coefficients.size()) != kernel->size())
    throw ValidationError(
        "make_rkhs_element: coefficient count != label count");
  for (const auto& x : coefficients)
    if (x.size() != kernel->q())
      throw DimensionMismatch("make_rkhs_element: coefficient is not a "
                              "q-vector");
  return RKHSElement{std::move(kernel), std::move(coefficients)};
}

namespace {

void require_same_kernel(const KernelHandle& a, const KernelHandle& b,
                         const char* where) {
  if (!a || !b) throw ValidationError(std::string(where) + ": null kernel");
  if (a == b) return;
  if (a->labels() != b->labels() || a->q() != b->q() ||
      rel_residual(a->assembled(), b->assembled()) > 1e-12)
    throw KernelMismatch(std::string(where) +
                         ": elements refer to different kernels");
}

}  // namespace

Matrix rkhm_gramian(const RKHMElement& f, const RKHMElement& g) {
  require_same_kernel(f.kernel, g.kernel, "rkhm_gramian");
  const OperatorKernel& k = *f.kernel;
  const Index m = k.size();
  Matrix out = Matrix::Zero(k.q(), k.q());
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      out += f.coefficients[i] * k.block(i, j) * g.coefficients[j].adjoint();
  return out;
}

Vector rkhs_evaluate(const RKHSElement& f, const std::string& label) {
  const OperatorKernel& k = *f.kernel;
  const Index row = k.label_index(label);
  Vector out = Vector::Zero(k.q());
  for (Index i = 0; i < k.size(); ++i)
    out += k.block(row, i) * f.coefficients[i];
  return out;
}

Complex rkhs_inner(const RKHSElement& f, const RKHSElement& g) {
  require_same_kernel(f.kernel, g.kernel, "rkhs_inner");
  const OperatorKernel& k = *f.kernel;
  Complex out = 0.0;
  for (Index i = 0; i < k.size(); ++i)
    for (Index j = 0; j < k.size(); ++j)
      out += g.coefficients[j].dot(k.block(j, i) * f.coefficients[i]);
  return out;
}

SubordinationCheck subordination_check(const StochasticMapping& phi,
                                       const StochasticMapping& psi,
                                       const ToleranceContext& ctx) {
  if (phi.space() != psi.space())
    throw SpaceMismatch("subordination_check: space mismatch");
  if (phi.labels() != psi.labels())
    throw LabelMismatch("subordination_check: label lists differ");
  const Matrix s_psi = covariance_kernel(psi, ctx).assembled();
  const Matrix s_phi = covariance_kernel(phi, ctx).assembled();
  const Matrix cross = cross_covariance_kernel(phi, psi).assembled();

  // Pseudo-inverse of the psi kernel through its eigensystem.
  const HermitianEig eig = hermitian_eig(s_psi, ctx);
  const Index n = eig.eigenvalues.size();
  const double lmax = n > 0 ? std::abs(eig.eigenvalues(0)) : 0.0;
  Matrix pinv = Matrix::Zero(n, n);
  for (Index c = 0; c < n; ++c)
    if (eig.eigenvalues(c) > ctx.rank_tol * std::max(1e-300, lmax))
      pinv += eig.eigenvectors.col(c) * eig.eigenvectors.col(c).adjoint() /
              eig.eigenvalues(c);

  // Block row i of coeff holds the representing coefficients of the section
  // K_lambda_i inside the psi module.
  const Matrix coeff = cross * pinv;

  SubordinationCheck out;
  const Matrix reproduced = coeff * s_psi;
  out.membership_residual = rel_residual(reproduced, cross);
  out.membership = out.membership_residual <= ctx.eq_tol;

  const Matrix section_gram = coeff * s_psi * coeff.adjoint();
  out.gramian_residual = rel_residual(section_gram, s_phi);
  out.gramian_identity = out.gramian_residual <= ctx.eq_tol;
  return out;
}

bool subordination_criterion(const StochasticMapping& phi,
                             const StochasticMapping& psi,
                             const ToleranceContext& ctx) {
  return subordination_check(phi, psi, ctx).passed();
}

}  // namespace gfl
