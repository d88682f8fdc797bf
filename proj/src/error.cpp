#include "zenodyn/error.hpp"

namespace zenodyn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NearDegenerateSpectrum: return "NearDegenerateSpectrum";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ZeroGap: return "ZeroGap";
    case ErrorKind::NotBlockDiagonal: return "NotBlockDiagonal";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::EmptyBSupport: return "EmptyBSupport";
    case ErrorKind::BSupportVanished: return "BSupportVanished";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace zenodyn
