#ifndef CFP_ERROR_HPP
#define CFP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cfp {

// User-facing failures derive from std::invalid_argument / std::domain_error /
// std::length_error so the CLI can map them to exit code 1; anything else is
// treated as an internal failure.

/// Malformed input: bad flag value, empty grid, unparsable parameter spec.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds an enumeration or coefficient-mode size guard.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A coagulation or fragmentation tuple cannot act on the given partition.
class NotApplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The parameter function violates a modelling assumption (e.g. the
/// free-parameter equation has no root, or delta lies outside the radius).
class ModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The rejection sampler ran out of proposals before collecting its quota.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfp

#endif  // CFP_ERROR_HPP
