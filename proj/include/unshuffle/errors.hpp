#pragma once

#include <stdexcept>
#include <string>

namespace unshuffle {

/// Caller violated a precondition (wrong arity, bad index, invalid flags).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is valid but not generic enough for the requested computation
/// (rank-deficient design, tied values, singular pivot block, ...).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact computation hit one of its resource caps and was aborted.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error("cap: " + what) {}
};

/// An exact check contradicted the uniqueness/count prediction it verifies.
class TheoremViolation : public std::runtime_error {
 public:
  explicit TheoremViolation(const std::string& what) : std::runtime_error("theorem violation: " + what) {}
};

}  // namespace unshuffle
