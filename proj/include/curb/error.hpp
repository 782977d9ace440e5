#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curb {

enum class ErrorCode {
  InvalidArgument,
  FrameMismatch,
  NoPath,
  AmbiguousPath,
  NonPositiveDepth,
  NonConvergence,
  Degenerate,
  RankDeficient,
  InsufficientData,
  AtOrAboveHorizon,
  ParallelRay,
  BehindCamera,
  PointAtInfinity,
  InlierRatioTooLow,
  SensorNotAboveGround,
  Divergence,
  DimensionMismatch,
  FrameIndexing,
  Schema,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure mode named by a module contract maps
/// to one ErrorCode so callers (the CLI in particular) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curb
