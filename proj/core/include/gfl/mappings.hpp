#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gfl/hilbert.hpp"

namespace gfl {

// A multivariate second-order stochastic mapping: a finite ordered family of
// labels with one RandomVariable per label, all in one ModuleSpace.
class StochasticMapping {
 public:
  StochasticMapping(std::vector<std::string> labels,
                    std::vector<RandomVariable> values);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<RandomVariable>& values() const { return values_; }
  const ModuleSpace& space() const { return values_.front().space(); }
  Index size() const { return static_cast<Index>(labels_.size()); }

  const RandomVariable& value(Index i) const { return values_.at(i); }
  const RandomVariable& value(const std::string& label) const;
  Index label_index(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<RandomVariable> values_;
};

// Row-major flattening of a q x p matrix into C^{q*p}; fixes the coordinate
// convention shared by vector_domain and the observable-space computations.
Vector flatten(const Matrix& m);
Matrix unflatten(const Vector& v, Index q, Index p);

// Complex-linear span of the value matrices inside C^{q*p}.
Subspace vector_domain(const StochasticMapping& phi,
                       const ToleranceContext& ctx = {});

// B(H)-module span of the values; its gspace is the measurements space.
Submodule modular_domain(const StochasticMapping& phi,
                         const ToleranceContext& ctx = {});

// Joint row-span coordinate subspace of C^p.
Subspace measurements_space(const StochasticMapping& phi,
                            const ToleranceContext& ctx = {});

struct SubordinationFlags {
  bool vector = false;
  bool operator_ = false;
};

// Inclusion of vector domains and of measurements spaces.
SubordinationFlags is_subordinate(const StochasticMapping& phi,
                                  const StochasticMapping& psi,
                                  const ToleranceContext& ctx = {});

// Stacks phi(label) above psi(label) into the doubled space q' = 2q.
StochasticMapping product_mapping(const StochasticMapping& phi,
                                  const StochasticMapping& psi);

}  // namespace gfl
