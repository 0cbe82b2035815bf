// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/hoi_fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "egohoi/error.hpp"
#include "egohoi/rng.hpp"

namespace egohoi {

namespace {

constexpr double kInf = 1e20;

// 1D squared distance transform (lower envelope of parabolas).
void distance_transform_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  auto intersect = [&](int q, int p) {
    return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
  };
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double diff = q - v[k];
    d[q] = diff * diff + f[v[k]];
  }
}

// Squared Euclidean distance from every pixel to the nearest foreground pixel.
std::vector<double> squared_distance_to(const MaskRaster& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const int n = std::max(w, h);
  std::vector<double> grid(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = mask.data()[i] ? 0.0 : kInf;
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    distance_transform_1d(f.data(), d.data(), h, v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    double* row = grid.data() + static_cast<std::size_t>(y) * w;
    std::copy(row, row + w, f.begin());
    distance_transform_1d(f.data(), row, w, v, z);
  }
  return grid;
}

template <typename ValueAt>
void mean_pool(int width, int height, ValueAt value_at, double* out) {
  std::array<double, features::kGridCells> sum{};
  std::array<int, features::kGridCells> count{};
  for (int y = 0; y < height; ++y) {
    const int by = y * features::kGrid / height;
    for (int x = 0; x < width; ++x) {
      const int bx = x * features::kGrid / width;
      sum[by * features::kGrid + bx] += value_at(x, y);
      ++count[by * features::kGrid + bx];
    }
  }
  for (std::size_t i = 0; i < features::kGridCells; ++i) out[i] = count[i] ? sum[i] / count[i] : 0.0;
}

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Eigen::Map<const Eigen::VectorXd> as_vector(const CueFeatures& f) {
  return {f.values.data(), static_cast<Eigen::Index>(f.values.size())};
}

void check_length(const FusionModel& model, const CueFeatures& f) {
  if (static_cast<int>(f.values.size()) != model.feature_len) {
    throw Error(ErrorCode::kDimensionMismatch, "feature length " + std::to_string(f.values.size()) +
                                                   " does not match model length " +
                                                   std::to_string(model.feature_len));
  }
}

}  // namespace

void apply_ablation(CueFeatures& f, const AblationFlags& ablate) {
  using namespace features;
  if (f.values.size() != kLength) throw Error(ErrorCode::kDimensionMismatch, "unexpected feature length");
  auto zero = [&](std::size_t begin, std::size_t n) {
    std::fill_n(f.values.begin() + static_cast<std::ptrdiff_t>(begin), n, 0.0);
  };
  if (ablate.pose) {
    zero(kPoseGrid, kGridCells);
    zero(kPoseConfidence, 1);
    zero(kPoseSpread, 1);
  }
  if (ablate.hand) {
    zero(kHandGrid, kGridCells);
    zero(kHandArea, 1);
  }
  if (ablate.object) {
    zero(kObjectGrid, kGridCells);
    zero(kObjectArea, 1);
  }
  if (ablate.hand || ablate.object) {
    zero(kOverlap, 1);
    zero(kObjectToHandDistance, 1);
  }
  f.ablate.pose = f.ablate.pose || ablate.pose;
  f.ablate.hand = f.ablate.hand || ablate.hand;
  f.ablate.object = f.ablate.object || ablate.object;
}

CueFeatures extract_features(const HeatmapStack& pose, const MaskRaster& hand, const MaskRaster& object,
                             const AblationFlags& ablate) {
  using namespace features;
  if (hand.width() != object.width() || hand.height() != object.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "hand and object masks must share dimensions");
  }
  if (hand.width() <= 0 || hand.height() <= 0) throw Error(ErrorCode::kDimensionMismatch, "empty masks");

  CueFeatures f;
  f.values.assign(kLength, 0.0);
  double* out = f.values.data();

  // Pose: per-pixel max over joint channels, then pooled.
  if (!ablate.pose && pose.channels() > 0) {
    const int pw = pose.width();
    const int ph = pose.height();
    std::vector<double> merged(pose.plane_size(), 0.0);
    double conf_sum = 0.0;
    std::vector<Vec2> peaks;
    for (int c = 0; c < pose.channels(); ++c) {
      const auto plane = pose.channel(c);
      std::size_t best = 0;
      for (std::size_t i = 0; i < plane.size(); ++i) {
        const double v = std::min(1.0, static_cast<double>(plane[i]));
        merged[i] = std::max(merged[i], v);
        if (plane[i] > plane[best]) best = i;
      }
      const double peak = std::min(1.0, static_cast<double>(plane[best]));
      conf_sum += peak;
      if (peak > 0.0) {
        peaks.emplace_back((static_cast<double>(best % pw) + 0.5) / pw, (static_cast<double>(best / pw) + 0.5) / ph);
      }
    }
    mean_pool(pw, ph, [&](int x, int y) { return merged[static_cast<std::size_t>(y) * pw + x]; }, out + kPoseGrid);
    out[kPoseConfidence] = conf_sum / pose.channels();
    if (!peaks.empty()) {
      Vec2 mean = Vec2::Zero();
      for (const auto& p : peaks) mean += p;
      mean /= static_cast<double>(peaks.size());
      double ss = 0.0;
      for (const auto& p : peaks) ss += (p - mean).squaredNorm();
      out[kPoseSpread] = std::sqrt(ss / static_cast<double>(peaks.size()));
    }
  }

  const int w = hand.width();
  const int h = hand.height();
  const double total = static_cast<double>(w) * h;
  std::size_t hand_count = 0;
  std::size_t object_count = 0;
  std::size_t both = 0;
  for (std::size_t i = 0; i < hand.data().size(); ++i) {
    const bool hv = hand.data()[i] != 0;
    const bool ov = object.data()[i] != 0;
    hand_count += hv;
    object_count += ov;
    both += hv && ov;
  }
  if (!ablate.hand) {
    mean_pool(w, h, [&](int x, int y) { return static_cast<double>(hand.at(x, y)); }, out + kHandGrid);
    out[kHandArea] = hand_count / total;
  }
  if (!ablate.object) {
    mean_pool(w, h, [&](int x, int y) { return static_cast<double>(object.at(x, y)); }, out + kObjectGrid);
    out[kObjectArea] = object_count / total;
  }
  if (!ablate.hand && !ablate.object) {
    out[kOverlap] = static_cast<double>(both) / static_cast<double>(std::max<std::size_t>(1, object_count));
    if (object_count > 0) {
      if (hand_count == 0) {
        out[kObjectToHandDistance] = 1.0;
      } else {
        const std::vector<double> dist2 = squared_distance_to(hand);
        double sum = 0.0;
        for (std::size_t i = 0; i < dist2.size(); ++i) {
          if (object.data()[i]) sum += std::sqrt(dist2[i]);
        }
        out[kObjectToHandDistance] = sum / object_count / std::sqrt(static_cast<double>(w) * w + static_cast<double>(h) * h);
      }
    }
  }
  f.ablate = ablate;
  return f;
}

FusionModel FusionModel::zeros(int hidden, int feature_len) {
  if (hidden < 1 || feature_len < 1) throw Error(ErrorCode::kInvalidArgument, "model sizes must be positive");
  FusionModel m;
  m.hidden = hidden;
  m.feature_len = feature_len;
  m.w1 = Eigen::MatrixXd::Zero(hidden, feature_len);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2 = Eigen::VectorXd::Zero(hidden);
  m.b2 = 0.0;
  return m;
}

void FusionModel::validate() const {
  if (hidden < 1 || feature_len < 1 || w1.rows() != hidden || w1.cols() != feature_len || b1.size() != hidden ||
      w2.size() != hidden) {
    throw Error(ErrorCode::kInvalidArgument, "fusion model shapes are inconsistent");
  }
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !std::isfinite(b2)) {
    throw Error(ErrorCode::kInvalidArgument, "fusion model parameters must be finite");
  }
}

double predict_logit(const FusionModel& model, const CueFeatures& features) {
  check_length(model, features);
  const Eigen::VectorXd hidden = (model.w1 * as_vector(features) + model.b1).array().tanh().matrix();
  return model.w2.dot(hidden) + model.b2;
}

double predict(const FusionModel& model, const CueFeatures& features) {
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(stable_sigmoid(predict_logit(model, features)), lo, hi);
}

LossAndGradient loss_and_grad(const FusionModel& model, const std::vector<LabeledFeatures>& batch) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  LossAndGradient out;
  out.gradient.w1 = Eigen::MatrixXd::Zero(model.hidden, model.feature_len);
  out.gradient.b1 = Eigen::VectorXd::Zero(model.hidden);
  out.gradient.w2 = Eigen::VectorXd::Zero(model.hidden);
  out.gradient.b2 = 0.0;
  for (const auto& sample : batch) {
    check_length(model, sample.features);
    const auto x = as_vector(sample.features);
    const Eigen::VectorXd h = (model.w1 * x + model.b1).array().tanh().matrix();
    const double z = model.w2.dot(h) + model.b2;
    const double y = sample.label ? 1.0 : 0.0;
    out.loss += softplus(z) - y * z;
    const double dz = stable_sigmoid(z) - y;
    out.gradient.b2 += dz;
    out.gradient.w2 += dz * h;
    const Eigen::VectorXd da = (dz * model.w2.array() * (1.0 - h.array().square())).matrix();
    out.gradient.b1 += da;
    out.gradient.w1.noalias() += da * x.transpose();
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  out.gradient.w1 *= inv;
  out.gradient.b1 *= inv;
  out.gradient.w2 *= inv;
  out.gradient.b2 *= inv;
  return out;
}

std::vector<double> flatten_parameters(const FusionModel& model) {
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(model.hidden) * (model.feature_len + 2) + 1);
  for (int r = 0; r < model.w1.rows(); ++r) {
    for (int c = 0; c < model.w1.cols(); ++c) p.push_back(model.w1(r, c));
  }
  for (int i = 0; i < model.b1.size(); ++i) p.push_back(model.b1[i]);
  for (int i = 0; i < model.w2.size(); ++i) p.push_back(model.w2[i]);
  p.push_back(model.b2);
  return p;
}

std::vector<double> flatten_gradient(const FusionGradient& g) {
  FusionModel shape;
  shape.hidden = static_cast<int>(g.w1.rows());
  shape.feature_len = static_cast<int>(g.w1.cols());
  shape.w1 = g.w1;
  shape.b1 = g.b1;
  shape.w2 = g.w2;
  shape.b2 = g.b2;
  return flatten_parameters(shape);
}

void set_parameters(FusionModel& model, const std::vector<double>& p) {
  const std::size_t expected = static_cast<std::size_t>(model.hidden) * (model.feature_len + 2) + 1;
  if (p.size() != expected) throw Error(ErrorCode::kDimensionMismatch, "parameter vector has the wrong length");
  std::size_t i = 0;
  model.w1.resize(model.hidden, model.feature_len);
  model.b1.resize(model.hidden);
  model.w2.resize(model.hidden);
  for (int r = 0; r < model.hidden; ++r) {
    for (int c = 0; c < model.feature_len; ++c) model.w1(r, c) = p[i++];
  }
  for (int r = 0; r < model.hidden; ++r) model.b1[r] = p[i++];
  for (int r = 0; r < model.hidden; ++r) model.w2[r] = p[i++];
  model.b2 = p[i];
}

TrainResult train_fusion(std::vector<LabeledFeatures> dataset, const TrainOptions& options) {
  if (dataset.empty()) throw Error(ErrorCode::kSingleClassDataset, "empty training set");
  if (options.hidden < 1 || !(options.lr > 0.0) || options.epochs < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid training hyper-parameters");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (auto& s : dataset) {
    (s.label ? has_pos : has_neg) = true;
    apply_ablation(s.features, options.ablate);
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::kSingleClassDataset, "training set needs both labels");

  const int f = static_cast<int>(dataset.front().features.values.size());
  TrainResult result;
  result.model = FusionModel::zeros(options.hidden, f);
  result.model.ablate = options.ablate;
  CounterRng rng(options.seed, 0, 0x7261696eULL);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(f));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(options.hidden));
  for (int r = 0; r < options.hidden; ++r) {
    for (int c = 0; c < f; ++c) result.model.w1(r, c) = rng.normal(0.0, s1);
  }
  for (int r = 0; r < options.hidden; ++r) result.model.w2[r] = rng.normal(0.0, s2);

  FusionModel& m = result.model;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const LossAndGradient lg = loss_and_grad(m, dataset);
    result.loss_trace.push_back(lg.loss);
    m.w1 -= options.lr * lg.gradient.w1;
    m.b1 -= options.lr * lg.gradient.b1;
    m.w2 -= options.lr * lg.gradient.w2;
    m.b2 -= options.lr * lg.gradient.b2;
  }
  result.loss_trace.push_back(loss_and_grad(m, dataset).loss);
  return result;
}

double accuracy(const FusionModel& model, const std::vector<LabeledFeatures>& dataset, double threshold) {
  if (dataset.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : dataset) {
    CueFeatures f = s.features;
    apply_ablation(f, model.ablate);
    correct += decide(predict(model, f), threshold) == (s.label != 0);
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace egohoi
