#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dl2u {

// Parameter outside the region where a model quantity is defined
// (e.g. k_n <= c in the near-stationary regime, log r_n <= d).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller asked for something the operation does not support
// (wrong regime for a pivot, too few Monte Carlo draws, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed data handed to a statistic (NaN in a sample, empty series).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Regressor sum of squares is zero (or below the degeneracy threshold).
class DegeneratePathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value left the representable range. `index` is the first offending
// time index for path overflow, or 0 when not applicable.
class OverflowError : public std::overflow_error {
 public:
  OverflowError(const std::string& what, std::uint64_t index = 0)
      : std::overflow_error(what), index_(index) {}

  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

}  // namespace dl2u
