#pragma once

#include <stdexcept>
#include <string>

namespace gfl {

/// Base class for all gfl errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix/vector/subspace dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two objects that must live over the same module space do not.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Label lists of two indexed families disagree.
class LabelMismatch : public Error {
 public:
  using Error::Error;
};

/// A label that is not part of the kernel/mapping index set.
class UnknownLabel : public Error {
 public:
  using Error::Error;
};

/// Two grid-based objects use different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be Hermitian is not, beyond tolerance.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// A kernel required to be positive definite has a negative eigenvalue
/// beyond tolerance.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Two mappings fed to the unitary connector have different covariance
/// kernels.
class KernelMismatch : public Error {
 public:
  using Error::Error;
};

/// A test function is not representable in the basis of a distribution
/// field.
class OutsideSpan : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or JSON object.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates a semantic requirement.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfl
