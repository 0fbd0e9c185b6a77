#pragma once

#include <stdexcept>
#include <string>

namespace z2eig {

enum class ErrorCode {
  Ok = 0,
  // input / construction
  InvalidInput,
  OddCount,
  DuplicatePoint,
  NotUnit,
  SupportCollision,
  NegativeEigenvalue,
  OnBranchRay,
  Io,
  // mesh and topology
  MeshDegenerate,
  MatchingFailed,
  HolonomyViolation,
  MeshRebuildFailed,
  // numerics
  ZeroSection,
  NoConvergence,
  InsufficientSamples,
  AmbiguousOrder,
  ExtractionFailed,
  DegenerateCluster,
  BranchSwap,
  UnresolvedNode,
  NoConnectingArc,
};

const char* error_name(ErrorCode code) noexcept;

/// True for errors caused by the caller's input rather than by the numerics.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace z2eig
