#pragma once

#include <stdexcept>
#include <string>

namespace mzfid {

/// Bad parameters or configuration (non-finite phase, grid too small, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The inputs are well formed but the requested quantity is mathematically undefined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Outcome with zero probability at every phase; its posterior does not exist.
class ImpossibleOutcome : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An enumeration would exceed its configured size cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mzfid
