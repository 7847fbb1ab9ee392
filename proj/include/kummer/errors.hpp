#pragma once

#include <stdexcept>
#include <string>

namespace kummer {

// Argument outside the mathematical domain of an operation (non-squarefree
// modulus, composite where a prime is required, p | n for a discrete log).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Value does not fit the unsigned 64-bit working domain.
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

// Requested table would exceed the configured memory budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative numerical routine did not converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (e.g. inadmissible variety data).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Hensel lifting hit a non-simple root.
struct LiftFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical identity that must hold exactly was observed to fail.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct IdentityViolation : InvariantViolation {
  using InvariantViolation::InvariantViolation;
};

struct CorrespondenceViolation : InvariantViolation {
  using InvariantViolation::InvariantViolation;
};

// Bad command-line or config input.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace kummer
