// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egohoi/camera.hpp"

namespace egohoi {

enum class HandClass { kNone, kLeft, kRight, kTwoHands };

std::string_view to_string(HandClass c);

struct HandKeypoint {
  double u = 0.0;
  double v = 0.0;
  double confidence = 0.0;
};

struct HandObservation {
  std::uint64_t frame = 0;
  HandClass hand = HandClass::kNone;
  /// One keypoint for left/right, two for two_hands.
  std::vector<HandKeypoint> keypoints;
};

/// Right-hand rule: right passes through, two_hands takes the keypoint with the
/// larger u (first on ties), left and none give nothing.
std::optional<HandKeypoint> select_right_hand(const HandObservation& observation);

/// Mean of the joints, or `previous_center` when there are none.
Vec2 update_track(const Vec2& previous_center, const std::vector<Vec2>& joints);

enum class HoiStatus { kIdle, kHoi, kNoHand };

std::string_view to_string(HoiStatus s);
HoiStatus parse_status(std::string_view text);

struct HoiTimeline {
  double fps = 30.0;
  std::vector<std::optional<double>> p_hoi;
  std::vector<HoiStatus> raw;
  std::vector<HoiStatus> smoothed;

  std::size_t size() const { return raw.size(); }
  /// Throws kInvalidArgument unless fps > 0 and the arrays have equal length.
  void validate() const;
};

/// round(0.5 * fps), bumped to the next odd number, at least 1.
int smoothing_window(double fps);

/// Centered sliding majority of hoi against not-hoi with edge-truncated
/// windows; ties go to not-hoi. A frame that stays not-hoi keeps its raw
/// label; a hoi frame voted down takes the commoner of idle/no_hand in its
/// window (idle on ties).
std::vector<HoiStatus> smooth_statuses(const std::vector<HoiStatus>& raw, int window);

/// Returns `timeline` with `smoothed` filled from `raw`.
HoiTimeline smooth_timeline(HoiTimeline timeline);

struct Segment {
  std::uint64_t start = 0;  // inclusive
  std::uint64_t end = 0;    // inclusive
  std::string label = "hoi";

  std::uint64_t length() const { return end - start + 1; }
  bool operator==(const Segment&) const = default;
};

/// Maximal runs of kHoi.
std::vector<Segment> extract_segments(const std::vector<HoiStatus>& statuses);
std::vector<Segment> extract_segments(const HoiTimeline& timeline);

/// Statuses of length `frames` with the segments painted as hoi over idle.
std::vector<HoiStatus> paint_segments(const std::vector<Segment>& segments, std::size_t frames);

}  // namespace egohoi
