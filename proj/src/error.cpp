#include "slerho/error.hpp"

namespace slerho {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutsideHorizon: return "OutsideHorizon";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::ForcePointApproach: return "ForcePointApproach";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::DegenerateStep: return "DegenerateStep";
    case ErrorCode::IrregularSpacing: return "IrregularSpacing";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::SingularityOnGrid: return "SingularityOnGrid";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace slerho
