// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/video_segmenter.hpp"

#include <cmath>

#include "egohoi/error.hpp"

namespace egohoi {

std::string_view to_string(HandClass c) {
  switch (c) {
    case HandClass::kNone: return "none";
    case HandClass::kLeft: return "left";
    case HandClass::kRight: return "right";
    case HandClass::kTwoHands: return "two_hands";
  }
  return "none";
}

std::string_view to_string(HoiStatus s) {
  switch (s) {
    case HoiStatus::kIdle: return "idle";
    case HoiStatus::kHoi: return "hoi";
    case HoiStatus::kNoHand: return "no_hand";
  }
  return "idle";
}

HoiStatus parse_status(std::string_view text) {
  if (text == "idle") return HoiStatus::kIdle;
  if (text == "hoi") return HoiStatus::kHoi;
  if (text == "no_hand") return HoiStatus::kNoHand;
  throw Error(ErrorCode::kSchemaError, "unknown status '" + std::string(text) + "'");
}

std::optional<HandKeypoint> select_right_hand(const HandObservation& observation) {
  switch (observation.hand) {
    case HandClass::kRight:
      if (observation.keypoints.empty()) return std::nullopt;
      return observation.keypoints.front();
    case HandClass::kTwoHands: {
      if (observation.keypoints.empty()) return std::nullopt;
      const HandKeypoint* best = &observation.keypoints.front();
      for (const auto& k : observation.keypoints) {
        if (k.u > best->u) best = &k;
      }
      return *best;
    }
    case HandClass::kLeft:
    case HandClass::kNone:
      return std::nullopt;
  }
  return std::nullopt;
}

Vec2 update_track(const Vec2& previous_center, const std::vector<Vec2>& joints) {
  if (joints.empty()) return previous_center;
  Vec2 sum = Vec2::Zero();
  for (const auto& j : joints) sum += j;
  return sum / static_cast<double>(joints.size());
}

void HoiTimeline::validate() const {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "timeline fps must be positive");
  if (p_hoi.size() != raw.size() || (!smoothed.empty() && smoothed.size() != raw.size())) {
    throw Error(ErrorCode::kInvalidArgument, "timeline arrays differ in length");
  }
}

int smoothing_window(double fps) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  int w = static_cast<int>(std::lround(0.5 * fps));
  if (w % 2 == 0) ++w;
  return std::max(w, 1);
}

std::vector<HoiStatus> smooth_statuses(const std::vector<HoiStatus>& raw, int window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  const std::size_t n = raw.size();
  // Prefix counts of hoi and no_hand frames.
  std::vector<int> hoi(n + 1, 0);
  std::vector<int> no_hand(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    hoi[i + 1] = hoi[i] + (raw[i] == HoiStatus::kHoi);
    no_hand[i + 1] = no_hand[i] + (raw[i] == HoiStatus::kNoHand);
  }
  const std::size_t half = static_cast<std::size_t>(window / 2);
  std::vector<HoiStatus> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    const int total = static_cast<int>(hi - lo);
    const int h = hoi[hi] - hoi[lo];
    if (2 * h > total) {
      out[i] = HoiStatus::kHoi;
    } else if (raw[i] != HoiStatus::kHoi) {
      out[i] = raw[i];
    } else {
      const int nh = no_hand[hi] - no_hand[lo];
      const int idle = total - h - nh;
      out[i] = nh > idle ? HoiStatus::kNoHand : HoiStatus::kIdle;
    }
  }
  return out;
}

HoiTimeline smooth_timeline(HoiTimeline timeline) {
  timeline.validate();
  timeline.smoothed = smooth_statuses(timeline.raw, smoothing_window(timeline.fps));
  return timeline;
}

std::vector<Segment> extract_segments(const std::vector<HoiStatus>& statuses) {
  std::vector<Segment> out;
  std::size_t i = 0;
  while (i < statuses.size()) {
    if (statuses[i] != HoiStatus::kHoi) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < statuses.size() && statuses[j + 1] == HoiStatus::kHoi) ++j;
    out.push_back({i, j, "hoi"});
    i = j + 1;
  }
  return out;
}

std::vector<Segment> extract_segments(const HoiTimeline& timeline) {
  if (timeline.smoothed.size() != timeline.raw.size()) {
    throw Error(ErrorCode::kInvalidArgument, "timeline has not been smoothed");
  }
  return extract_segments(timeline.smoothed);
}

std::vector<HoiStatus> paint_segments(const std::vector<Segment>& segments, std::size_t frames) {
  std::vector<HoiStatus> out(frames, HoiStatus::kIdle);
  for (const auto& s : segments) {
    if (s.start > s.end || s.end >= frames) throw Error(ErrorCode::kInvalidArgument, "segment outside timeline");
    for (std::uint64_t f = s.start; f <= s.end; ++f) out[f] = HoiStatus::kHoi;
  }
  return out;
}

}  // namespace egohoi
