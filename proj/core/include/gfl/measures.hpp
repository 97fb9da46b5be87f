#pragma once

#include <cstdint>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/report.hpp"

namespace gfl {

// Finite union of grid cells; the desk model of a bounded Borel set.
class CellSet {
 public:
  CellSet(Grid grid, std::vector<Index> members);

  const Grid& grid() const { return grid_; }
  const std::vector<Index>& members() const { return members_; }  // sorted
  Index size() const { return static_cast<Index>(members_.size()); }

 private:
  Grid grid_;
  std::vector<Index> members_;
};

// Atomic second-order stochastic measure: one atom per grid cell; the value
// on a cell set is the sum of its atoms, so finite additivity is exact.
class StochasticMeasure {
 public:
  StochasticMeasure(Grid grid, std::vector<RandomVariable> atoms);

  const Grid& grid() const { return grid_; }
  const ModuleSpace& space() const { return atoms_.front().space(); }
  const std::vector<RandomVariable>& atoms() const { return atoms_; }
  const RandomVariable& atom(Index cell) const { return atoms_.at(cell); }

 private:
  Grid grid_;
  std::vector<RandomVariable> atoms_;
};

// atom(c) = delta^d F(t_c): the indefinite integral of the field.
StochasticMeasure measure_from_field(const RandomField& f);

RandomVariable evaluate(const StochasticMeasure& xi, const CellSet& a);

// apply(phi) = sum_c phi(t_c) atom(c); atoms already carry the cell volume.
RandomDistributionField measure_to_rdf(const StochasticMeasure& xi,
                                       const std::vector<TestFunction>& basis);

// Covariance bimeasure: value(A,B) = [xi(A), xi(B)], stored atomically.
class Bimeasure {
 public:
  Bimeasure(Grid grid, Index q, std::vector<std::vector<Matrix>> table);

  const Grid& grid() const { return grid_; }
  Index q() const { return q_; }
  const Matrix& entry(Index c1, Index c2) const;
  Matrix value(const CellSet& a, const CellSet& b) const;

 private:
  Grid grid_;
  Index q_ = 1;
  std::vector<std::vector<Matrix>> table_;
};

Bimeasure bimeasure_of(const StochasticMeasure& xi);

// value(A,B) = delta^{2d} sum_{s in A, t in B} K(s,t).
Bimeasure kernel_to_bimeasure(const Grid& grid, const OperatorKernel& k);

// Strict double integral sum_{c,c'} phi(t_c) psi(t_{c'}) tau(c,c');
// bilinear, no conjugation: pass conjugated samples where the covariance
// pairing is intended.
Matrix mt_integral(const Bimeasure& tau, const TestFunction& phi,
                   const TestFunction& psi);

struct SemivariationStrategy {
  enum class Kind { exhaustive_phases, alternating_ascent };
  Kind kind = Kind::exhaustive_phases;
  int restarts = 8;       // ascent only
  uint64_t seed = 0;      // ascent only

  static SemivariationStrategy exhaustive() { return {}; }
  static SemivariationStrategy ascent(int restarts, uint64_t seed) {
    SemivariationStrategy s;
    s.kind = Kind::alternating_ascent;
    s.restarts = restarts;
    s.seed = seed;
    return s;
  }
};

// Both estimators return certified lower bounds of the corresponding sup.
struct SemivariationResult {
  double lower_bound = 0.0;
  bool converged = true;  // exhaustive search is exact over its grid
};

// sup over per-atom unimodular coefficients of |sum_c alpha_c atom(c)|.
// Exhaustive strategy enumerates all 4^{|A|} fourth-root-of-unity tuples
// (exact on that grid, |A| <= 12); ascent uses seeded coordinate updates
// over continuous phases.
SemivariationResult semivariation(const StochasticMeasure& xi,
                                  const CellSet& a,
                                  const SemivariationStrategy& strategy,
                                  const ToleranceContext& ctx = {});

// sup over per-atom operator contractions; search over quaternary signed
// permutation unitaries (q <= 2) or unitary coordinate ascent, floored by
// the scalar estimate so the ordering |xi|(A) <= |xi|_o(A) is structural.
SemivariationResult operator_semivariation(
    const StochasticMeasure& xi, const CellSet& a,
    const SemivariationStrategy& strategy, const ToleranceContext& ctx = {});

// Verifies on a test-function basis: (a) the covariance distribution of the
// smeared measure equals the strict integral of its bimeasure, (b) the
// covariance distribution of the smeared field equals the quadrature of its
// covariance kernel, (c) the measurements spaces of field, measure, and
// distribution field coincide (requires a basis spanning every cell).
Report coherence_check(const RandomField& f,
                       const std::vector<TestFunction>& basis,
                       const ToleranceContext& ctx = {});

// Clause (a) and the measurements-space comparison for a bare measure.
Report coherence_check(const StochasticMeasure& xi,
                       const std::vector<TestFunction>& basis,
                       const ToleranceContext& ctx = {});

}  // namespace gfl
