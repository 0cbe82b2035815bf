// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace egohoi {

enum class ErrorCode {
  kInvalidArgument,
  kNonPositiveDepth,
  kNonFiniteResidual,
  kSingularNormalEquations,
  kInsufficientCorrespondences,
  kBehindCamera,
  kNoConvergence,
  kInsufficientViews,
  kDegenerateRays,
  kEmptyHeatmap,
  kSideExceedsFrame,
  kDimensionMismatch,
  kSingleClassDataset,
  kNoVisibleKeypoints,
  kDegenerateRange,
  kLengthMismatch,
  kMissingPair,
  kManifestGap,
  kSchemaError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. All library failures are
/// reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same code, message prefixed with e.g. "frame 12".
  Error with_context(const std::string& context) const { return Error(code_, context + ": " + detail_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace egohoi
