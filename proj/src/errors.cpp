#include "moulton/errors.hpp"

namespace moulton {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveMass: return "NonPositiveMass";
    case ErrorKind::TooFewBodies: return "TooFewBodies";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::SpectralDegeneracy: return "SpectralDegeneracy";
    case ErrorKind::NotBoundaryPoint: return "NotBoundaryPoint";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::Collision: return "Collision";
    case ErrorKind::StepTooSmall: return "StepTooSmall";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::IntegratorFailure: return "IntegratorFailure";
    case ErrorKind::AmbiguousPair: return "AmbiguousPair";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::ContinuationFailure: return "ContinuationFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string op, const std::string& detail)
    : std::runtime_error(op + ": " + std::string(error_name(kind)) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      op_(std::move(op)) {}

}  // namespace moulton
