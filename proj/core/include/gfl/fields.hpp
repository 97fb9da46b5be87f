#pragma once

#include <array>
#include <string>
#include <vector>

#include "gfl/hilbert.hpp"
#include "gfl/kernels.hpp"
#include "gfl/report.hpp"

namespace gfl {

// Regular grid modeling R^d at desk scale, d in {1,2}, n points per axis.
// Cells are indexed flat, row-major over axes; each cell's quadrature node
// is its grid point.
struct Grid {
  int d = 1;
  Index n = 2;
  double delta = 1.0;
  std::array<double, 2> origin{0.0, 0.0};

  Grid() = default;
  Grid(int d_, Index n_, double delta_, std::array<double, 2> origin_);

  Index size() const;  // n^d
  double cell_volume() const;

  std::array<Index, 2> multi_index(Index flat) const;
  Index flat_index(const std::array<Index, 2>& mi) const;
  std::array<double, 2> point(Index flat) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.d == b.d && a.n == b.n && a.delta == b.delta &&
           a.origin == b.origin;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

// Axis-aligned box of grid indices, inclusive bounds per axis.
struct IndexBox {
  std::array<Index, 2> lo{0, 0};
  std::array<Index, 2> hi{-1, -1};  // hi < lo encodes the empty box

  bool empty() const { return hi[0] < lo[0] || hi[1] < lo[1]; }
  bool contains(const std::array<Index, 2>& mi, int d) const;
};

// Sampled test function: data on the grid, zero outside its support box.
class TestFunction {
 public:
  TestFunction(Grid grid, Vector samples, IndexBox support);

  const Grid& grid() const { return grid_; }
  const Vector& samples() const { return samples_; }
  const IndexBox& support() const { return support_; }

 private:
  Grid grid_;
  Vector samples_;
  IndexBox support_;
};

// Smooth compactly supported profile exp(-1/(1-|x|^2)) centered and scaled,
// sampled on the grid with maximum sample normalized to 1.
TestFunction bump(const Grid& grid, const std::array<double, 2>& center,
                  double radius);

// One-hot sample at a single cell.
TestFunction cell_indicator(const Grid& grid, Index cell);

TestFunction conjugate(const TestFunction& phi);
TestFunction linear_combination(Complex alpha, const TestFunction& phi,
                                Complex beta, const TestFunction& psi);

// Second-order random field: one RandomVariable per grid point.
class RandomField {
 public:
  RandomField(Grid grid, std::vector<RandomVariable> values);

  const Grid& grid() const { return grid_; }
  const ModuleSpace& space() const { return values_.front().space(); }
  const std::vector<RandomVariable>& values() const { return values_; }
  const RandomVariable& value(Index cell) const { return values_.at(cell); }

 private:
  Grid grid_;
  std::vector<RandomVariable> values_;
};

// Rectangle-rule pairing delta^d sum_t phi(t) F(t).
RandomVariable smear(const RandomField& f, const TestFunction& phi);

// Operator covariance kernel of the field over grid points, labels "0".."N-1".
OperatorKernel field_covariance_kernel(const RandomField& f);

// Random distribution field restricted to a finite test-function basis;
// linear on the representable span by construction (least-squares resolution
// of the sample vector in the basis).
class RandomDistributionField {
 public:
  RandomDistributionField(Grid grid, std::vector<TestFunction> basis,
                          std::vector<RandomVariable> values);

  const Grid& grid() const { return grid_; }
  const ModuleSpace& space() const { return values_.front().space(); }
  const std::vector<TestFunction>& basis() const { return basis_; }
  const std::vector<RandomVariable>& values() const { return values_; }

  // Resolves phi in the basis span and returns the matching combination of
  // values; OutsideSpan if the residual exceeds eq_tol * max(1, |phi|).
  RandomVariable apply(const TestFunction& phi,
                       const ToleranceContext& ctx = {}) const;

 private:
  Grid grid_;
  std::vector<TestFunction> basis_;
  std::vector<RandomVariable> values_;
  Matrix sample_matrix_;  // grid.size() x basis size, column k = samples of k
};

// apply(phi) = smear(f, phi) for each basis function.
RandomDistributionField field_to_rdf(const RandomField& f,
                                     const std::vector<TestFunction>& basis);

// C_U(phi (x) conj(psi)) = [U_phi, U_psi], a q x q matrix.
Matrix covariance_distribution(const RandomDistributionField& u,
                               const TestFunction& phi,
                               const TestFunction& psi,
                               const ToleranceContext& ctx = {});

Complex scalar_covariance_distribution(const RandomDistributionField& u,
                                       const TestFunction& phi,
                                       const TestFunction& psi,
                                       const ToleranceContext& ctx = {});

// delta^{2d} sum_{s,t} phi(s) conj(psi(t)) K(s,t) for a kernel over grid
// points; the quadrature image of the covariance distribution.
Matrix kernel_to_distribution(const Grid& grid, const OperatorKernel& k,
                              const TestFunction& phi,
                              const TestFunction& psi);

}  // namespace gfl
