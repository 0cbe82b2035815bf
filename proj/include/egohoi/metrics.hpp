// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "egohoi/camera.hpp"
#include "egohoi/pose3d.hpp"
#include "egohoi/raster.hpp"
#include "egohoi/video_segmenter.hpp"

namespace egohoi {

struct PckCurve {
  std::vector<double> thresholds;  // ascending
  std::vector<double> pck;         // fraction in [0,1]
};

/// Fraction of visible pairs with Euclidean error <= t, per threshold.
/// Empty `visible` means all visible. Throws kNoVisibleKeypoints,
/// kLengthMismatch.
PckCurve pck_curve(const std::vector<Vec2>& pred, const std::vector<Vec2>& gt, const std::vector<bool>& visible,
                   const std::vector<double>& thresholds);

/// Evenly spaced thresholds 0..max_threshold inclusive.
/// PCK over precomputed distances (pixels or millimeters).
PckCurve pck_from_errors(std::vector<double> errors, const std::vector<double>& thresholds);

std::vector<double> linear_thresholds(double max_threshold, int steps);

/// Trapezoidal area under the curve over [t_min, t_max] divided by the range
/// width. The curve is linearly interpolated at the range ends. Throws
/// kDegenerateRange if the range is empty or not covered by the thresholds.
double auc(const PckCurve& curve, double t_min, double t_max);

/// Mean Euclidean distance over visible joints, meters in, millimeters out.
/// `pred[f][j]` is joint j of frame f; `visible` mirrors that shape or is empty.
double mean_error_3d_mm(const std::vector<Joints3D>& pred, const std::vector<Joints3D>& gt,
                        const std::vector<std::vector<bool>>& visible = {});

struct MaskScores {
  double iou = 0.0;
  double pixel_accuracy = 0.0;
};

/// IoU (1 when both empty) and pixel accuracy. Throws kDimensionMismatch.
MaskScores mask_iou_pa(const MaskRaster& pred, const MaskRaster& gt);

/// Fraction of equal entries. Throws kLengthMismatch (also for empty input).
double frame_accuracy(const std::vector<HoiStatus>& pred, const std::vector<HoiStatus>& gt);

/// Temporal IoU of two inclusive intervals.
double segment_iou(const Segment& a, const Segment& b);

struct SegmentScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

/// Segmental F1: candidate pairs of equal label with IoU >= threshold are
/// matched one-to-one greedily by descending IoU (ties: earlier predicted
/// start, then earlier ground-truth start).
SegmentScores f1_at_iou(const std::vector<Segment>& pred, const std::vector<Segment>& gt, double iou_threshold);

}  // namespace egohoi
