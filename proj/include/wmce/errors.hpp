#pragma once

#include <stdexcept>
#include <string>

namespace wmce {

/// Input that violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : NumericError(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Statistic is zero or non-finite, so the power map cannot be inverted.
class DegenerateInputError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace wmce
