#pragma once

#include <stdexcept>
#include <string>

namespace sta {

// Invalid dimensions, invariant violations, malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// State blow-up during integration. Carries the first offending grid index.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int time_index)
      : std::runtime_error(what), time_index_(time_index) {}
  int time_index() const { return time_index_; }

 private:
  int time_index_;
};

// An iterative solver ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// No admissible solution exists (e.g. no stabilizing gain, no feasible scaling).
class InfeasibilityError : public std::runtime_error {
 public:
  explicit InfeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// A line-search/backtracking step could not produce an admissible iterate.
class StepFailureError : public std::runtime_error {
 public:
  StepFailureError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace sta
