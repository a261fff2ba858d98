#pragma once

#include <stdexcept>
#include <string>

namespace deterrence {

// Invalid parameters or arguments (bad ranges, unsupported n, gamma != 0).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// The solver searched its admissible region and found no fixed point.
class NoEquilibrium : public std::runtime_error {
 public:
  explicit NoEquilibrium(const std::string& what) : std::runtime_error(what) {}
};

// Iteration budget exhausted or a bracket could not be established.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace deterrence
