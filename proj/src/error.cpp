#include "z2eig/error.hpp"

namespace z2eig {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OddCount: return "OddCount";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::SupportCollision: return "SupportCollision";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::OnBranchRay: return "OnBranchRay";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MeshDegenerate: return "MeshDegenerate";
    case ErrorCode::MatchingFailed: return "MatchingFailed";
    case ErrorCode::HolonomyViolation: return "HolonomyViolation";
    case ErrorCode::MeshRebuildFailed: return "MeshRebuildFailed";
    case ErrorCode::ZeroSection: return "ZeroSection";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorCode::ExtractionFailed: return "ExtractionFailed";
    case ErrorCode::DegenerateCluster: return "DegenerateCluster";
    case ErrorCode::BranchSwap: return "BranchSwap";
    case ErrorCode::UnresolvedNode: return "UnresolvedNode";
    case ErrorCode::NoConnectingArc: return "NoConnectingArc";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::OddCount:
    case ErrorCode::DuplicatePoint:
    case ErrorCode::NotUnit:
    case ErrorCode::SupportCollision:
    case ErrorCode::NegativeEigenvalue:
    case ErrorCode::OnBranchRay:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

}  // namespace z2eig
