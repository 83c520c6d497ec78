#pragma once

#include <stdexcept>
#include <string>

namespace metahomog {

enum class ErrorKind {
  InvalidInput,
  IndexOutOfRange,
  SingularBasis,
  ZeroLengthBar,
  NonOrthonormalDirectors,
  GeometryMismatch,
  NonpositiveLength,
  WavevectorOutsideBZ,
  ZeroWavevector,
  SingularLimit,
  NoConvergence,
  RepresentationFailure,
  IllConditionedFit,
  UnsupportedJointCount,
  EmptyStructure,
  UnbalancedLoad,
  SingularMode,
  SingularSystem,
  SingularOracle,
};

const char* to_string(ErrorKind kind) noexcept;

// Numerical and model failures, as opposed to malformed input.
inline bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularLimit:
    case ErrorKind::NoConvergence:
    case ErrorKind::RepresentationFailure:
    case ErrorKind::IllConditionedFit:
    case ErrorKind::UnbalancedLoad:
    case ErrorKind::SingularMode:
    case ErrorKind::SingularSystem:
    case ErrorKind::SingularOracle:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace metahomog
