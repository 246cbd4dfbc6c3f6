#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kwidth {

/// Failure categories surfaced by the numerical modules.
///
/// The CLI maps these onto exit codes: validation-type errors to 2,
/// NotFound to 3, and the numerical ones to 4.
enum class ErrorKind {
  Validation,      // argument outside its documented domain
  Domain,          // formula undefined at the requested index (e.g. n < 2)
  TolUnreachable,  // series tail bound not met within max_terms
  BracketFailure,  // theta equation lost its sign change
  SignDegenerate,  // sin(ny - beta*pi/2) too close to zero for the Fourier split
  SingularSystem,  // fundamental spline interpolation system is singular
  NotFound,        // search exhausted its cap or budget
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kwidth
