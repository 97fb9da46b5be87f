#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gfl/mappings.hpp"

namespace gfl {

// An m x m array of q x q operator blocks indexed by labels.  Covariance
// kernels are Hermitian in the block sense (blocks[i][j] = blocks[j][i]^H);
// cross covariance kernels waive that symmetry.
class OperatorKernel {
 public:
  // Validates shapes and, when require_hermitian, block-Hermitian symmetry.
  OperatorKernel(std::vector<std::string> labels, Index q,
                 std::vector<std::vector<Matrix>> blocks,
                 bool require_hermitian = true,
                 const ToleranceContext& ctx = {});

  const std::vector<std::string>& labels() const { return labels_; }
  Index q() const { return q_; }
  Index size() const { return static_cast<Index>(labels_.size()); }
  const Matrix& block(Index i, Index j) const;
  Index label_index(const std::string& label) const;
  bool hermitian_symmetric(const ToleranceContext& ctx = {}) const;

  // The mq x mq matrix with (i,j) block = blocks[i][j].
  Matrix assembled() const;

 private:
  std::vector<std::string> labels_;
  Index q_ = 1;
  std::vector<std::vector<Matrix>> blocks_;
};

// Splits an mq x mq matrix back into m x m blocks of size q x q.
OperatorKernel kernel_from_assembled(std::vector<std::string> labels, Index q,
                                     const Matrix& assembled,
                                     bool require_hermitian = true,
                                     const ToleranceContext& ctx = {});

struct ScalarKernel {
  std::vector<std::string> labels;
  Matrix entries;  // m x m
};

// blocks[i][j] = [phi_i, phi_j]; positive definite by construction.
OperatorKernel covariance_kernel(const StochasticMapping& phi,
                                 const ToleranceContext& ctx = {});

// blocks[i][j] = [phi_i, psi_j]; adjoint-related to the swapped kernel.
OperatorKernel cross_covariance_kernel(const StochasticMapping& phi,
                                       const StochasticMapping& psi);

// entries[i][j] = tr blocks[i][j].
ScalarKernel scalar_covariance(const StochasticMapping& phi,
                               const ToleranceContext& ctx = {});

// Block-matrix PSD test: min eigenvalue >= -psd_tol * max |eigenvalue|.
bool is_positive_definite(const OperatorKernel& k,
                          const ToleranceContext& ctx = {});

// Brute-force positivity oracle over random operator coefficient systems:
// checks sum_{i,j} a_i K[i][j] a_j^H >= 0 for `trials` sampled tuples {a_i}.
bool operator_coefficient_positivity_sample(const OperatorKernel& k,
                                            int trials, uint64_t seed,
                                            const ToleranceContext& ctx = {});

// Factors a PD kernel as K[i][j] = [phi_i, phi_j] with the minimal number of
// measurement coordinates p = numerical rank of the assembled matrix.
// Eigendecomposition with eigenvalue clamping below psd_tol * max.
StochasticMapping kolmogorov_factorize(const OperatorKernel& k,
                                       const ToleranceContext& ctx = {});

// For two factorizations of one kernel, the unitary u (p1 x p2) between the
// measurement coordinates with phi1_i = phi2_i u^H; u^H u is the projector
// onto the measurements space of phi2 (identity when minimal).
Matrix gramian_unitary_connector(const StochasticMapping& phi1,
                                 const StochasticMapping& phi2,
                                 const ToleranceContext& ctx = {});

using KernelHandle = std::shared_ptr<const OperatorKernel>;

// Element sum_i a_i K(label_i, .) of the reproducing-kernel module of K,
// stored by its operator coefficients.
struct RKHMElement {
  KernelHandle kernel;
  std::vector<Matrix> coefficients;  // one q x q matrix per label
};

// Element sum_i K(., label_i) x_i of the reproducing-kernel Hilbert space of
// H-valued functions, stored by its vector coefficients.
struct RKHSElement {
  KernelHandle kernel;
  std::vector<Vector> coefficients;  // one q-vector per label
};

RKHMElement make_rkhm_element(KernelHandle kernel,
                              std::vector<Matrix> coefficients);
RKHSElement make_rkhs_element(KernelHandle kernel,
                              std::vector<Vector> coefficients);

// [F,G] = sum_{i,j} a_i K[i][j] b_j^H.
Matrix rkhm_gramian(const RKHMElement& f, const RKHMElement& g);

// F(label) = sum_i K[label][i] x_i.
Vector rkhs_evaluate(const RKHSElement& f, const std::string& label);

// <F,G> = sum_{i,j} y_j^H K[j][i] x_i.
Complex rkhs_inner(const RKHSElement& f, const RKHSElement& g);

struct SubordinationCheck {
  bool membership = false;        // each K_lambda lies in the module of K_psi
  bool gramian_identity = false;  // [K_lambda,K_mu] reproduces the covariance
  double membership_residual = 0.0;
  double gramian_residual = 0.0;
  bool passed() const { return membership && gramian_identity; }
};

// Reproducing-kernel subordination test: represent each cross-kernel section
// K_lambda = [phi(lambda), psi(.)] inside the module of the psi covariance
// kernel and compare its gramians with the phi covariance kernel.
SubordinationCheck subordination_check(const StochasticMapping& phi,
                                       const StochasticMapping& psi,
                                       const ToleranceContext& ctx = {});

bool subordination_criterion(const StochasticMapping& phi,
                             const StochasticMapping& psi,
                             const ToleranceContext& ctx = {});

}  // namespace gfl
