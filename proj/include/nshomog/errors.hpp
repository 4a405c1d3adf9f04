#pragma once

#include <stdexcept>
#include <string>

namespace nshomog {

/// Rejected configuration or inconsistent run settings (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid too coarse for the requested spectral cutoff or integrand band.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values produced inside a numerical kernel.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The time stepper tripped its blow-up ceiling (CLI exit code 2).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace nshomog
