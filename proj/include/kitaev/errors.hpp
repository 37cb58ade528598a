#pragma once

#include <stdexcept>
#include <string>

namespace kitaev {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a documented precondition (shape, range, arity).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A semantic permutation met a supported basis state outside its domain.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

/// Projection onto a measured outcome vanished.
class ResampleGuard : public Error {
 public:
  using Error::Error;
};

/// Boolean circuit wiring refers forward or out of range.
class WiringViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Instance needs more simulated qubits than the configured cap.
class QubitBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Soft failures: probabilistic procedures that may be retried.

class SoftFailure : public Error {
 public:
  using Error::Error;
};

class InconsistentLocalization : public SoftFailure {
 public:
  using SoftFailure::SoftFailure;
};

class ReconstructionFailure : public SoftFailure {
 public:
  using SoftFailure::SoftFailure;
};

class VerificationFailure : public SoftFailure {
 public:
  using SoftFailure::SoftFailure;
};

}  // namespace kitaev
