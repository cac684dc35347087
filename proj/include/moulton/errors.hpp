#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moulton {

enum class ErrorKind {
  NonPositiveMass,
  TooFewBodies,
  ConvergenceFailure,
  WrongArity,
  SpectralDegeneracy,
  NotBoundaryPoint,
  BasisMismatch,
  Collision,
  StepTooSmall,
  StepTooLarge,
  IntegratorFailure,
  AmbiguousPair,
  BracketFailure,
  ContinuationFailure,
  InvalidArgument,
};

std::string_view error_name(ErrorKind kind) noexcept;

// Every failure raised by the library carries its kind and the operation
// that raised it, so the CLI can report "<op>: <Kind>: detail".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string op, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  const std::string& op() const noexcept { return op_; }

 private:
  ErrorKind kind_;
  std::string op_;
};

}  // namespace moulton
