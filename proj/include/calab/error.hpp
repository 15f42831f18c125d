#pragma once

#include <stdexcept>
#include <string>

namespace calab {

// Malformed input: bad letters, bad radius, bad weights, bad options.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A read or a computation left the region where a window is known.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sample, step or window budget exceeded.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace calab
