#pragma once

#include <stdexcept>
#include <string>

namespace acctest {

// Argument outside the mathematical domain of an operation (t outside [0,1],
// alpha outside (0,1), empty input, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input data or a user-supplied description failed validation (off-grid
// p-value, spec not integrating to one, malformed text, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of the caller was violated (missing null mask,
// unvalidated curve, undefined power, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace acctest
