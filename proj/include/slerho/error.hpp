#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slerho {

enum class ErrorCode {
  InvalidArgument,
  OutsideHorizon,
  StepSizeUnderflow,
  ForcePointApproach,
  NumericalBlowup,
  NotAbsolutelyContinuous,
  SelfIntersection,
  DegenerateStep,
  IrregularSpacing,
  BranchJump,
  SingularityOnGrid,
  NonConvergent,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code so the
/// command-line front end can report it as JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace slerho
