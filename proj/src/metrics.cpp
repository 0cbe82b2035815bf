// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "egohoi/error.hpp"

namespace egohoi {

PckCurve pck_curve(const std::vector<Vec2>& pred, const std::vector<Vec2>& gt, const std::vector<bool>& visible,
                   const std::vector<double>& thresholds) {
  if (pred.size() != gt.size() || (!visible.empty() && visible.size() != gt.size())) {
    throw Error(ErrorCode::kLengthMismatch, "prediction, ground truth and visibility differ in length");
  }
  std::vector<double> errors;
  errors.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (visible.empty() || visible[i]) errors.push_back((pred[i] - gt[i]).norm());
  }
  return pck_from_errors(std::move(errors), thresholds);
}

PckCurve pck_from_errors(std::vector<double> errors, const std::vector<double>& thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must be ascending");
  }
  if (errors.empty()) throw Error(ErrorCode::kNoVisibleKeypoints, "no visible keypoint pairs");
  std::sort(errors.begin(), errors.end());

  PckCurve curve;
  curve.thresholds = thresholds;
  curve.pck.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto correct = std::upper_bound(errors.begin(), errors.end(), t) - errors.begin();
    curve.pck.push_back(static_cast<double>(correct) / static_cast<double>(errors.size()));
  }
  return curve;
}

std::vector<double> linear_thresholds(double max_threshold, int steps) {
  if (!(max_threshold > 0.0) || steps < 1) throw Error(ErrorCode::kInvalidArgument, "invalid threshold grid");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) t[i] = max_threshold * i / steps;
  return t;
}

double auc(const PckCurve& curve, double t_min, double t_max) {
  const auto& t = curve.thresholds;
  const auto& p = curve.pck;
  if (t.size() != p.size()) throw Error(ErrorCode::kLengthMismatch, "curve arrays differ in length");
  if (!(t_max > t_min) || t.size() < 2 || t.front() > t_min || t.back() < t_max) {
    throw Error(ErrorCode::kDegenerateRange, "AUC range is empty or not covered by the curve");
  }
  auto value_at = [&](double x) {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.end()) return p.back();
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    if (i == 0) return p.front();
    const double span = t[i] - t[i - 1];
    if (span <= 0.0) return p[i];
    const double a = (x - t[i - 1]) / span;
    return (1 - a) * p[i - 1] + a * p[i];
  };
  double area = 0.0;
  double prev_x = t_min;
  double prev_y = value_at(t_min);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= t_min) continue;
    if (t[i] >= t_max) break;
    area += 0.5 * (prev_y + p[i]) * (t[i] - prev_x);
    prev_x = t[i];
    prev_y = p[i];
  }
  area += 0.5 * (prev_y + value_at(t_max)) * (t_max - prev_x);
  return std::clamp(area / (t_max - t_min), 0.0, 1.0);
}

double mean_error_3d_mm(const std::vector<Joints3D>& pred, const std::vector<Joints3D>& gt,
                        const std::vector<std::vector<bool>>& visible) {
  if (pred.size() != gt.size() || (!visible.empty() && visible.size() != gt.size())) {
    throw Error(ErrorCode::kLengthMismatch, "frame counts differ");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    if (pred[f].size() != gt[f].size() || (!visible.empty() && visible[f].size() != gt[f].size())) {
      throw Error(ErrorCode::kLengthMismatch, "joint counts differ in frame " + std::to_string(f));
    }
    for (std::size_t j = 0; j < gt[f].size(); ++j) {
      if (!visible.empty() && !visible[f][j]) continue;
      sum += (pred[f][j] - gt[f][j]).norm();
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorCode::kNoVisibleKeypoints, "no visible joints");
  return 1000.0 * sum / static_cast<double>(n);
}

MaskScores mask_iou_pa(const MaskRaster& pred, const MaskRaster& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "masks differ in size");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < pred.data().size(); ++i) {
    const bool a = pred.data()[i] != 0;
    const bool b = gt.data()[i] != 0;
    inter += a && b;
    uni += a || b;
    same += a == b;
  }
  MaskScores s;
  s.iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  s.pixel_accuracy = static_cast<double>(same) / static_cast<double>(pred.data().size());
  return s;
}

double frame_accuracy(const std::vector<HoiStatus>& pred, const std::vector<HoiStatus>& gt) {
  if (pred.size() != gt.size() || gt.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "status sequences must be non-empty and equally long");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) same += pred[i] == gt[i];
  return static_cast<double>(same) / static_cast<double>(gt.size());
}

double segment_iou(const Segment& a, const Segment& b) {
  const std::uint64_t lo = std::max(a.start, b.start);
  const std::uint64_t hi = std::min(a.end, b.end);
  const double inter = hi >= lo ? static_cast<double>(hi - lo + 1) : 0.0;
  const double uni = static_cast<double>(a.length() + b.length()) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

SegmentScores f1_at_iou(const std::vector<Segment>& pred, const std::vector<Segment>& gt, double iou_threshold) {
  struct Candidate {
    double iou;
    std::size_t p;
    std::size_t g;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (pred[p].label != gt[g].label) continue;
      const double iou = segment_iou(pred[p], gt[g]);
      if (iou >= iou_threshold && iou > 0.0) candidates.push_back({iou, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (pred[a.p].start != pred[b.p].start) return pred[a.p].start < pred[b.p].start;
    if (gt[a.g].start != gt[b.g].start) return gt[a.g].start < gt[b.g].start;
    return std::tie(a.p, a.g) < std::tie(b.p, b.g);
  });
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  SegmentScores s;
  for (const auto& c : candidates) {
    if (pred_used[c.p] || gt_used[c.g]) continue;
    pred_used[c.p] = gt_used[c.g] = true;
    ++s.true_positives;
  }
  s.false_positives = static_cast<int>(pred.size()) - s.true_positives;
  s.false_negatives = static_cast<int>(gt.size()) - s.true_positives;
  s.precision = pred.empty() ? 0.0 : static_cast<double>(s.true_positives) / static_cast<double>(pred.size());
  s.recall = gt.empty() ? 0.0 : static_cast<double>(s.true_positives) / static_cast<double>(gt.size());
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace egohoi
