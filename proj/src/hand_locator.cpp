// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/hand_locator.hpp"

#include <algorithm>

#include "egohoi/error.hpp"

namespace egohoi {

HandObservation LocatorOutput::observation(std::uint64_t frame) const {
  HandObservation obs{frame, hand, {}};
  if (left) obs.keypoints.push_back(*left);
  if (right) obs.keypoints.push_back(*right);
  return obs;
}

LocatorOutput decode_locator(const HeatmapStack& stack, int frame_width, int frame_height, double conf_threshold) {
  if (stack.channels() != 2) throw Error(ErrorCode::kDimensionMismatch, "locator heatmap needs 2 channels");
  if (frame_width <= 0 || frame_height <= 0) throw Error(ErrorCode::kInvalidArgument, "frame size must be positive");

  LocatorOutput out;
  out.heatmap = stack;
  auto decode = [&](int channel) -> std::optional<HandKeypoint> {
    Peak peak;
    try {
      peak = decode_peak(stack, channel);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kEmptyHeatmap) return std::nullopt;
      throw;
    }
    if (!(peak.confidence > conf_threshold)) return std::nullopt;
    Vec2 px = grid_to_frame(Vec2(peak.u, peak.v), frame_width, frame_height, stack.width(), stack.height());
    px.x() = std::clamp(px.x(), 0.0, frame_width - 1.0);
    px.y() = std::clamp(px.y(), 0.0, frame_height - 1.0);
    return HandKeypoint{px.x(), px.y(), peak.confidence};
  };
  out.left = decode(static_cast<int>(HandSide::kLeft));
  out.right = decode(static_cast<int>(HandSide::kRight));
  if (out.left && out.right) {
    out.hand = HandClass::kTwoHands;
  } else if (out.right) {
    out.hand = HandClass::kRight;
  } else if (out.left) {
    out.hand = HandClass::kLeft;
  }
  return out;
}

LocatorOutput locate_from_boxes(const std::vector<HandBox>& hands, int frame_width, int frame_height,
                                double conf_threshold) {
  return decode_locator(localization_target(hands, frame_width, frame_height), frame_width, frame_height,
                        conf_threshold);
}

}  // namespace egohoi
