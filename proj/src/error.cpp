// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/error.hpp"

namespace egohoi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kNonFiniteResidual: return "NonFiniteResidual";
    case ErrorCode::kSingularNormalEquations: return "SingularNormalEquations";
    case ErrorCode::kInsufficientCorrespondences: return "InsufficientCorrespondences";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInsufficientViews: return "InsufficientViews";
    case ErrorCode::kDegenerateRays: return "DegenerateRays";
    case ErrorCode::kEmptyHeatmap: return "EmptyHeatmap";
    case ErrorCode::kSideExceedsFrame: return "SideExceedsFrame";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kNoVisibleKeypoints: return "NoVisibleKeypoints";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kMissingPair: return "MissingPair";
    case ErrorCode::kManifestGap: return "ManifestGap";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace egohoi
