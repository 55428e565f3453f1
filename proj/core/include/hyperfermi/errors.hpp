#pragma once

#include <stdexcept>

namespace hyperfermi {

/// The generator universe (or an enumeration) would exceed a fixed budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (odd input to an
/// even-only series, nonzero scalar part in exact mode, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller error: mismatched algebra contexts, out-of-range sites, ...
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hyperfermi
