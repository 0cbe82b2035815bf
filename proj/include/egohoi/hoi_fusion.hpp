// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "egohoi/heatmap.hpp"
#include "egohoi/raster.hpp"

namespace egohoi {

/// Cues zeroed out of the feature vector (the interaction ablations).
struct AblationFlags {
  bool pose = false;
  bool hand = false;
  bool object = false;

  bool operator==(const AblationFlags&) const = default;
};

/// Feature layout: three 8x8 mean-pooled cue grids followed by six scalars.
namespace features {
inline constexpr int kGrid = 8;
inline constexpr std::size_t kGridCells = kGrid * kGrid;
inline constexpr std::size_t kPoseGrid = 0;
inline constexpr std::size_t kHandGrid = kPoseGrid + kGridCells;
inline constexpr std::size_t kObjectGrid = kHandGrid + kGridCells;
inline constexpr std::size_t kHandArea = kObjectGrid + kGridCells;
inline constexpr std::size_t kObjectArea = kHandArea + 1;
inline constexpr std::size_t kOverlap = kObjectArea + 1;
inline constexpr std::size_t kObjectToHandDistance = kOverlap + 1;
inline constexpr std::size_t kPoseConfidence = kObjectToHandDistance + 1;
inline constexpr std::size_t kPoseSpread = kPoseConfidence + 1;
inline constexpr std::size_t kLength = kPoseSpread + 1;
}  // namespace features

struct CueFeatures {
  std::vector<double> values;
  AblationFlags ablate;
};

/// Deterministic cue features from a pose heatmap stack and hand/object masks.
///
/// The masks must share dimensions (kDimensionMismatch otherwise); the pose
/// stack is pooled on its own grid. Overlap is |hand & object| / max(1, |object|);
/// the distance descriptor is the mean distance from object pixels to the
/// nearest hand pixel over the crop diagonal (1 when there is an object but no
/// hand). Descriptors that need both masks are zeroed if either is ablated.
CueFeatures extract_features(const HeatmapStack& pose, const MaskRaster& hand, const MaskRaster& object,
                             const AblationFlags& ablate = {});

/// Zero the blocks of `f` belonging to ablated cues and record the flags.
void apply_ablation(CueFeatures& f, const AblationFlags& ablate);

/// sigma(w2 . tanh(W1 x + b1) + b2).
struct FusionModel {
  int hidden = 16;
  int feature_len = static_cast<int>(features::kLength);
  Eigen::MatrixXd w1;  // hidden x feature_len
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;
  AblationFlags ablate;

  static FusionModel zeros(int hidden, int feature_len);
  /// Throws kInvalidArgument when shapes disagree or parameters are not finite.
  void validate() const;
};

struct FusionGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;
};

inline constexpr double kDefaultDecisionThreshold = 0.5;

double predict_logit(const FusionModel& model, const CueFeatures& features);
/// Interaction probability, kept inside the open interval (0, 1).
double predict(const FusionModel& model, const CueFeatures& features);
inline bool decide(double p_hoi, double threshold = kDefaultDecisionThreshold) { return p_hoi >= threshold; }

struct LabeledFeatures {
  CueFeatures features;
  int label = 0;  // 1 = interaction
};

struct LossAndGradient {
  double loss = 0.0;
  FusionGradient gradient;
};

/// Mean binary cross-entropy over the batch and its exact gradient.
LossAndGradient loss_and_grad(const FusionModel& model, const std::vector<LabeledFeatures>& batch);

/// All parameters in a fixed order (w1 row-major, b1, w2, b2); used for
/// gradient checks and byte-level determinism checks.
std::vector<double> flatten_parameters(const FusionModel& model);
std::vector<double> flatten_gradient(const FusionGradient& gradient);
void set_parameters(FusionModel& model, const std::vector<double>& params);

struct TrainOptions {
  double lr = 1e-2;
  int epochs = 500;
  int hidden = 16;
  std::uint64_t seed = 0;
  AblationFlags ablate;
};

struct TrainResult {
  FusionModel model;
  /// Loss before each epoch's update, plus the final loss.
  std::vector<double> loss_trace;
};

/// Full-batch gradient descent. Throws kSingleClassDataset unless both labels occur.
TrainResult train_fusion(std::vector<LabeledFeatures> dataset, const TrainOptions& options);

double accuracy(const FusionModel& model, const std::vector<LabeledFeatures>& dataset,
                double threshold = kDefaultDecisionThreshold);

}  // namespace egohoi
