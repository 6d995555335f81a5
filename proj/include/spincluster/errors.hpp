#pragma once

#include <stdexcept>
#include <string>

namespace spincluster {

// Argument outside an operation's domain (bad site index, size mismatch, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but violates a stated precondition
// (non-Hermitian operator, unnormalized state, coupling outside the commutant).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical self-check failed (eigen residual, integrator left the simplex).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spincluster
