#pragma once

#include <stdexcept>
#include <string>

namespace maass {

// Input outside the mathematical domain of an operation (reducible polynomial,
// p = 1, non-Galois cubic handed to a Galois routine, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A case the engine deliberately does not handle (wild ramification, index
// divisors in Frobenius lookups, inputs needing unavailable machinery).
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two routes that must agree did not. Never swallowed.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The effort budget ran out before a result could be certified.
struct IncompleteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace maass
