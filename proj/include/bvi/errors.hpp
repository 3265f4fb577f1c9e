#pragma once

#include <stdexcept>
#include <string>

namespace bvi {

/// Bad dimensions, nonpositive parameters and similar caller mistakes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation is not available for this kind of object.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative routine did not reach its tolerance. Carries the last residual.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace bvi
