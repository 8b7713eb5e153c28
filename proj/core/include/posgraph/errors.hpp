#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posgraph {

/// Malformed textual input (graph6 lines, ledger records, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A computation would exceed a configured size cap. Carries the estimate that tripped it.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, double estimate)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// An internal cross-check failed. Always a bug, never a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace posgraph
