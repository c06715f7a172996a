#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uwajam {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure could not meet its tolerance within budget.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double partial_value, double error_estimate,
                 std::size_t evaluations)
      : std::runtime_error(what),
        partial_value_(partial_value),
        error_estimate_(error_estimate),
        evaluations_(evaluations) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  double partial_value_;
  double error_estimate_;
  std::size_t evaluations_;
};

}  // namespace uwajam
