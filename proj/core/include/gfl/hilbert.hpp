#pragma once

#include <vector>

#include "gfl/errors.hpp"
#include "gfl/numeric.hpp"

namespace gfl {

// A finite model of a normal Hilbert module over B(H), dim H = q.  Elements
// are q x p complex matrices; the coordinate dimension p is the number of
// orthonormal scalar directions the element can touch.
struct ModuleSpace {
  Index q = 1;
  Index p = 1;

  ModuleSpace() = default;
  ModuleSpace(Index q_, Index p_) : q(q_), p(p_) {
    if (q < 1 || p < 1)
      throw ValidationError("ModuleSpace: q and p must be >= 1");
  }

  friend bool operator==(const ModuleSpace& a, const ModuleSpace& b) {
    return a.q == b.q && a.p == b.p;
  }
  friend bool operator!=(const ModuleSpace& a, const ModuleSpace& b) {
    return !(a == b);
  }
};

class RandomVariable {
 public:
  RandomVariable(ModuleSpace space, Matrix value);
  static RandomVariable zero(const ModuleSpace& space);

  const ModuleSpace& space() const { return space_; }
  const Matrix& value() const { return value_; }

 private:
  ModuleSpace space_;
  Matrix value_;
};

// Gramian [f,g] = F G^H, a q x q matrix; positive semidefinite when f == g.
Matrix gramian(const RandomVariable& f, const RandomVariable& g);

// Scalar product tr [f,g]; reduces the module to an ordinary Hilbert space.
Complex scalar_product(const RandomVariable& f, const RandomVariable& g);

// Module norm: trace norm of the gramian [f,f], i.e. the Frobenius norm of
// the coordinate matrix.
double module_norm(const RandomVariable& f);

// Left action of an operator a in B(H): (a f)(coordinates) = a F.
RandomVariable outer_action(const Matrix& a, const RandomVariable& f);

// A gramian-orthogonally complementable submodule, identified with its
// measurements subspace of C^p (the span of the rows of its elements,
// conjugated): f belongs iff every row of F lies in that subspace.
class Submodule {
 public:
  Submodule(ModuleSpace space, Subspace gspace);
  static Submodule zero(const ModuleSpace& space);
  static Submodule full(const ModuleSpace& space);

  const ModuleSpace& space() const { return space_; }
  const Subspace& gspace() const { return gspace_; }
  Index gdim() const { return gspace_.dim(); }

 private:
  ModuleSpace space_;
  Subspace gspace_;
};

// Smallest submodule containing the generators: the measurements subspace is
// the span of the columns of all F^H.
Submodule submodule_generated(const ModuleSpace& space,
                              const std::vector<RandomVariable>& generators,
                              const ToleranceContext& ctx = {});

// Gramian projection onto the submodule: F -> F P with P the projector onto
// the measurements subspace.  Idempotent, gramian self-adjoint.
RandomVariable gramian_projection(const Submodule& sub,
                                  const RandomVariable& f);

// Membership test: f is in the submodule iff the projection fixes it.
bool submodule_contains(const Submodule& sub, const RandomVariable& f,
                        const ToleranceContext& ctx = {});

}  // namespace gfl
