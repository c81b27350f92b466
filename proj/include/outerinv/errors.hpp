#pragma once

#include <stdexcept>
#include <string>

namespace outerinv {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix or subspace dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix factorization failed to converge or produced invalid output.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// A square system is singular to working tolerance (rcond < 1e-14).
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Two subspaces that were required to be complementary are not.
class NotComplementaryError : public Error {
 public:
  using Error::Error;
};

/// The requested range/null-space prescription cannot be realized.
class InfeasiblePrescriptionError : public Error {
 public:
  using Error::Error;
};

/// The matrix has index > 1, so its group inverse does not exist.
class NoGroupInverseError : public Error {
 public:
  using Error::Error;
};

/// A weight matrix is not symmetric positive definite.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// The constrained inverse is not defined for the given subspace.
class NotDefinedError : public Error {
 public:
  using Error::Error;
};

/// An (I + ...) factor inside a perturbation formula is singular.
class FormulaSingularityError : public Error {
 public:
  using Error::Error;
};

/// Randomized instance generation exceeded its rejection budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or unwritable output path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace outerinv
