#pragma once

#include <stdexcept>
#include <string>

namespace mlop {

/// Invalid scenario or parameter value. Messages name the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an engine operation was broken by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runtime invariant check failed (e.g. conservation drift beyond tolerance).
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlop
