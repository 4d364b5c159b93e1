#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roughreflect {

/// Query outside the sampled range of a path or field.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed argument (bad exponent, empty interval, size mismatch).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time or delay that does not land on the grid lattice.
class AlignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation
/// (negative start for reflection, excluded endpoint, bad Hurst index).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the run configuration loader.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input object failed a structural check (e.g. Chen identity of a tensor).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Picard iteration did not reach the tolerance.
class NonContractionError : public std::runtime_error {
 public:
  NonContractionError(const std::string& what, std::size_t window, double ratio, double change)
      : std::runtime_error(what), window_(window), ratio_(ratio), change_(change) {}

  std::size_t window() const noexcept { return window_; }
  /// Last observed ratio of successive sup-changes.
  double ratio() const noexcept { return ratio_; }
  double change() const noexcept { return change_; }

 private:
  std::size_t window_;
  double ratio_;
  double change_;
};

}  // namespace roughreflect
