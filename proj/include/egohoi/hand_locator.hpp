// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "egohoi/heatmap.hpp"
#include "egohoi/video_segmenter.hpp"

namespace egohoi {

inline constexpr double kDefaultLocatorThreshold = 0.25;

struct LocatorOutput {
  HeatmapStack heatmap;  // 48x28, channels (left, right)
  std::optional<HandKeypoint> left;
  std::optional<HandKeypoint> right;
  HandClass hand = HandClass::kNone;

  /// Observation in the shape the right-hand rule consumes.
  HandObservation observation(std::uint64_t frame) const;
};

/// Decode a two-channel locator heatmap. A channel whose peak exceeds
/// `conf_threshold` yields a hand; grid cells map back to frame pixels
/// (cell centers scaled by frame/grid size).
LocatorOutput decode_locator(const HeatmapStack& stack, int frame_width, int frame_height,
                             double conf_threshold = kDefaultLocatorThreshold);

/// Deterministic stand-in for the neural localizer: renders the training
/// target for the given boxes and decodes it.
LocatorOutput locate_from_boxes(const std::vector<HandBox>& hands, int frame_width, int frame_height,
                                double conf_threshold = kDefaultLocatorThreshold);

}  // namespace egohoi
