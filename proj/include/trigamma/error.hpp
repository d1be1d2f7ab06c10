#pragma once

#include <stdexcept>
#include <string>

namespace trigamma {

/// Argument outside the mathematical domain of an operation (negative lifetime, |beta| >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed data: bad CSV header, overlapping bins, mismatched binning.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to reach its requested accuracy.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (e.g. geometry not Bragg-matched).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid configuration or command line; maps to the usage exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trigamma
