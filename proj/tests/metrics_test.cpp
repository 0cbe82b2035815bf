// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "egohoi/metrics.hpp"
#include "egohoi/rng.hpp"
#include "test_support.hpp"

using namespace egohoi;
using egohoi::testing::error_code_of;

namespace {

std::vector<Segment> random_segments(CounterRng& rng, int max_count, std::uint64_t span) {
  // Disjoint, sorted segments; the label is usually "hoi".
  std::vector<Segment> out;
  const int count = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_count) + 1));
  std::uint64_t cursor = rng.below(4);
  for (int i = 0; i < count && cursor < span; ++i) {
    const std::uint64_t len = 1 + rng.below(8);
    Segment s{cursor, std::min(span, cursor + len - 1), rng.below(5) == 0 ? "other" : "hoi"};
    out.push_back(s);
    cursor = s.end + 1 + rng.below(5);
  }
  return out;
}

// Best one-to-one matching by exhaustive search.
int optimal_tp(const std::vector<Segment>& pred, const std::vector<Segment>& gt, double thr) {
  std::vector<bool> used(gt.size(), false);
  std::function<int(std::size_t)> rec = [&](std::size_t p) -> int {
    if (p == pred.size()) return 0;
    int best = rec(p + 1);
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (used[g] || pred[p].label != gt[g].label) continue;
      const double lo = static_cast<double>(std::max(pred[p].start, gt[g].start));
      const double hi = static_cast<double>(std::min(pred[p].end, gt[g].end));
      const double inter = hi >= lo ? hi - lo + 1 : 0.0;
      const double uni = static_cast<double>(pred[p].length() + gt[g].length()) - inter;
      if (inter <= 0.0 || inter / uni < thr) continue;
      used[g] = true;
      best = std::max(best, 1 + rec(p + 1));
      used[g] = false;
    }
    return best;
  };
  return rec(0);
}

MaskRaster rect(int w, int h, int x0, int y0, int x1, int y1) {
  MaskRaster m(w, h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST(Pck, PerfectPredictionIsOne) {
  const std::vector<Vec2> kp = {{1, 2}, {3, 4}, {5, 6}};
  const PckCurve c = pck_curve(kp, kp, {}, {0.0, 1.0, 5.0});
  for (double v : c.pck) EXPECT_EQ(v, 1.0);
}

TEST(Pck, BoundaryCountsAsCorrect) {
  const PckCurve c = pck_curve({{3, 4}}, {{0, 0}}, {}, {4.999, 5.0, 5.001});
  EXPECT_EQ(c.pck, (std::vector<double>{0.0, 1.0, 1.0}));
}

TEST(Pck, InvisiblePairsIgnored) {
  const PckCurve c = pck_curve({{0, 0}, {100, 0}}, {{0, 0}, {0, 0}}, {true, false}, {1.0});
  EXPECT_EQ(c.pck[0], 1.0);
  EXPECT_EQ(error_code_of([] { pck_curve({{0, 0}}, {{0, 0}}, {false}, {1.0}); }), ErrorCode::kNoVisibleKeypoints);
  EXPECT_EQ(error_code_of([] { pck_curve({{0, 0}}, {}, {}, {1.0}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(error_code_of([] { pck_curve({{0, 0}}, {{0, 0}}, {}, {2.0, 1.0}); }), ErrorCode::kInvalidArgument);
}

TEST(Pck, MatchesRecountAndIsMonotone) {
  CounterRng rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<Vec2> pred, gt;
    std::vector<bool> vis;
    for (std::size_t i = 0; i < n; ++i) {
      gt.emplace_back(rng.uniform(0, 100), rng.uniform(0, 100));
      pred.push_back(gt.back() + Vec2(rng.normal(0, 5), rng.normal(0, 5)));
      vis.push_back(i == 0 || rng.below(4) != 0);
    }
    const auto thresholds = linear_thresholds(20.0, 40);
    const PckCurve c = pck_curve(pred, gt, vis, thresholds);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      int hit = 0, total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!vis[i]) continue;
        ++total;
        hit += (pred[i] - gt[i]).norm() <= thresholds[k];
      }
      EXPECT_NEAR(c.pck[k], static_cast<double>(hit) / total, 1e-9);
      if (k > 0) EXPECT_GE(c.pck[k], c.pck[k - 1]);
    }
  }
}

TEST(LinearThresholds, EndpointsAndErrors) {
  const auto t = linear_thresholds(10.0, 4);
  EXPECT_EQ(t, (std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0}));
  EXPECT_EQ(error_code_of([] { linear_thresholds(0.0, 4); }), ErrorCode::kInvalidArgument);
}

TEST(Auc, ConstantAndLinear) {
  EXPECT_DOUBLE_EQ(auc({{0, 5, 10}, {1, 1, 1}}, 0, 10), 1.0);
  EXPECT_DOUBLE_EQ(auc({{0, 10}, {0, 1}}, 0, 10), 0.5);
  EXPECT_DOUBLE_EQ(auc({{0, 10}, {0, 1}}, 0, 5), 0.25);
}

TEST(Auc, DegenerateRange) {
  const PckCurve c{{0, 10}, {0, 1}};
  EXPECT_EQ(error_code_of([&] { auc(c, 5, 5); }), ErrorCode::kDegenerateRange);
  EXPECT_EQ(error_code_of([&] { auc(c, 0, 20); }), ErrorCode::kDegenerateRange);
  EXPECT_EQ(error_code_of([] { auc({{0}, {1}}, 0, 0.5); }), ErrorCode::kDegenerateRange);
}

TEST(Auc, MatchesFineGridIntegration) {
  CounterRng rng(2);
  for (int t = 0; t < 100; ++t) {
    PckCurve c;
    const std::size_t n = 2 + rng.below(15);
    double x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c.thresholds.push_back(x);
      c.pck.push_back(y);
      x += rng.uniform(0.1, 3.0);
      y = std::min(1.0, y + rng.uniform(0.0, 0.3));
    }
    const double lo = rng.uniform(0.0, c.thresholds.back() / 2);
    const double hi = rng.uniform(lo + 0.05, c.thresholds.back());
    if (!(hi > lo)) continue;
    auto interp = [&](double q) {
      std::size_t i = 1;
      while (i + 1 < n && c.thresholds[i] < q) ++i;
      const double a = (q - c.thresholds[i - 1]) / (c.thresholds[i] - c.thresholds[i - 1]);
      return (1 - a) * c.pck[i - 1] + a * c.pck[i];
    };
    const int steps = 200000;
    double sum = 0.0;
    for (int k = 0; k < steps; ++k) sum += interp(lo + (k + 0.5) * (hi - lo) / steps);
    const double value = auc(c, lo, hi);
    EXPECT_NEAR(value, sum / steps, 1e-6);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
  }
}

TEST(MeanError3d, Examples) {
  const Joints3D a = {{0, 0, 0}, {1, 1, 1}};
  EXPECT_EQ(mean_error_3d_mm({a}, {a}), 0.0);
  Joints3D b = a;
  for (auto& p : b) p += Vec3(0.01, 0, 0);
  EXPECT_NEAR(mean_error_3d_mm({b}, {a}), 10.0, 1e-9);
  EXPECT_EQ(error_code_of([&] { mean_error_3d_mm({a}, {a}, {{false, false}}); }), ErrorCode::kNoVisibleKeypoints);
}

TEST(MeanError3d, MatchesRecount) {
  CounterRng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<Joints3D> pred(3), gt(3);
    std::vector<std::vector<bool>> vis(3);
    double sum = 0.0;
    int n = 0;
    for (int f = 0; f < 3; ++f) {
      for (int j = 0; j < 21; ++j) {
        gt[f].emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        pred[f].push_back(gt[f].back() + Vec3(rng.normal(0, 0.01), rng.normal(0, 0.01), rng.normal(0, 0.01)));
        vis[f].push_back(j == 0 || rng.below(3) != 0);
        if (vis[f].back()) {
          sum += std::sqrt((pred[f][j] - gt[f][j]).squaredNorm());
          ++n;
        }
      }
    }
    EXPECT_NEAR(mean_error_3d_mm(pred, gt, vis), 1000.0 * sum / n, 1e-9);
  }
}

TEST(MaskIou, Examples) {
  const MaskRaster a = rect(20, 10, 0, 0, 10, 10);
  EXPECT_EQ(mask_iou_pa(a, a).iou, 1.0);
  EXPECT_EQ(mask_iou_pa(a, a).pixel_accuracy, 1.0);
  const MaskRaster b = rect(20, 10, 10, 0, 20, 10);
  EXPECT_EQ(mask_iou_pa(a, b).iou, 0.0);
  EXPECT_EQ(mask_iou_pa(a, b).pixel_accuracy, 0.0);
  const MaskRaster c = rect(20, 10, 5, 0, 15, 10);
  EXPECT_DOUBLE_EQ(mask_iou_pa(a, c).iou, 1.0 / 3.0);
  EXPECT_EQ(mask_iou_pa(MaskRaster(4, 4), MaskRaster(4, 4)).iou, 1.0);
  EXPECT_EQ(error_code_of([] { mask_iou_pa(MaskRaster(4, 4), MaskRaster(4, 5)); }), ErrorCode::kDimensionMismatch);
}

TEST(MaskIou, RecountAndSymmetry) {
  CounterRng rng(4);
  for (int t = 0; t < 100; ++t) {
    MaskRaster a(13, 7), b(13, 7);
    int inter = 0, uni = 0, same = 0;
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 13; ++x) {
        const bool va = rng.below(2) == 1, vb = rng.below(3) == 1;
        a.set(x, y, va);
        b.set(x, y, vb);
        inter += va && vb;
        uni += va || vb;
        same += va == vb;
      }
    }
    const MaskScores s = mask_iou_pa(a, b);
    const MaskScores r = mask_iou_pa(b, a);
    EXPECT_NEAR(s.iou, uni ? static_cast<double>(inter) / uni : 1.0, 1e-9);
    EXPECT_NEAR(s.pixel_accuracy, same / 91.0, 1e-9);
    EXPECT_EQ(s.iou, r.iou);
    EXPECT_EQ(s.pixel_accuracy, r.pixel_accuracy);
  }
}

TEST(FrameAccuracy, ExamplesAndRecount) {
  using S = HoiStatus;
  EXPECT_EQ(frame_accuracy({S::kHoi, S::kIdle}, {S::kHoi, S::kIdle}), 1.0);
  EXPECT_EQ(frame_accuracy({S::kHoi, S::kIdle}, {S::kIdle, S::kNoHand}), 0.0);
  EXPECT_EQ(error_code_of([] { frame_accuracy({}, {}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(error_code_of([] { frame_accuracy({S::kHoi}, {}); }), ErrorCode::kLengthMismatch);
  CounterRng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<S> a(n), b(n);
    int same = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<S>(rng.below(3));
      b[i] = static_cast<S>(rng.below(3));
      same += a[i] == b[i];
    }
    EXPECT_NEAR(frame_accuracy(a, b), static_cast<double>(same) / n, 1e-9);
  }
}

TEST(SegmentIou, Examples) {
  EXPECT_DOUBLE_EQ(segment_iou({0, 9, "hoi"}, {5, 14, "hoi"}), 5.0 / 15.0);
  EXPECT_EQ(segment_iou({0, 4, "hoi"}, {5, 9, "hoi"}), 0.0);
  EXPECT_EQ(segment_iou({3, 3, "hoi"}, {3, 3, "hoi"}), 1.0);
}

TEST(F1, Examples) {
  const std::vector<Segment> gt = {{0, 9, "hoi"}, {20, 29, "hoi"}};
  EXPECT_EQ(f1_at_iou(gt, gt, 0.5).f1, 1.0);
  const SegmentScores disjoint = f1_at_iou({{10, 19, "hoi"}}, gt, 0.5);
  EXPECT_EQ(disjoint.f1, 0.0);
  EXPECT_EQ(disjoint.false_positives, 1);
  EXPECT_EQ(disjoint.false_negatives, 2);
  EXPECT_EQ(f1_at_iou({}, gt, 0.5).recall, 0.0);
  EXPECT_EQ(f1_at_iou({}, {}, 0.5).f1, 0.0);
  // Label mismatch never matches.
  EXPECT_EQ(f1_at_iou({{0, 9, "other"}}, {{0, 9, "hoi"}}, 0.5).true_positives, 0);
  const SegmentScores half = f1_at_iou({{0, 9, "hoi"}}, gt, 0.5);
  EXPECT_DOUBLE_EQ(half.precision, 1.0);
  EXPECT_DOUBLE_EQ(half.recall, 0.5);
  EXPECT_DOUBLE_EQ(half.f1, 2.0 / 3.0);
}

TEST(F1, MatchesExhaustiveAssignment) {
  CounterRng rng(6);
  for (int t = 0; t < 500; ++t) {
    const auto pred = random_segments(rng, 6, 60);
    const auto gt = random_segments(rng, 6, 60);
    const double thr = std::array<double, 3>{0.5, 0.6, 0.75}[rng.below(3)];
    const SegmentScores s = f1_at_iou(pred, gt, thr);
    ASSERT_EQ(s.true_positives, optimal_tp(pred, gt, thr)) << "instance " << t;
    EXPECT_EQ(s.false_positives + s.true_positives, static_cast<int>(pred.size()));
    EXPECT_EQ(s.false_negatives + s.true_positives, static_cast<int>(gt.size()));
  }
}

TEST(F1, InvariantToOrderAndTranslation) {
  CounterRng rng(7);
  for (int t = 0; t < 200; ++t) {
    auto pred = random_segments(rng, 6, 60);
    auto gt = random_segments(rng, 6, 60);
    const SegmentScores base = f1_at_iou(pred, gt, 0.5);
    std::reverse(pred.begin(), pred.end());
    std::rotate(gt.begin(), gt.begin() + static_cast<long>(gt.size() / 2), gt.end());
    const SegmentScores shuffled = f1_at_iou(pred, gt, 0.5);
    EXPECT_EQ(shuffled.true_positives, base.true_positives);
    const std::uint64_t shift = 1 + rng.below(1000);
    for (auto& s : pred) s.start += shift, s.end += shift;
    for (auto& s : gt) s.start += shift, s.end += shift;
    const SegmentScores moved = f1_at_iou(pred, gt, 0.5);
    EXPECT_EQ(moved.true_positives, base.true_positives);
    EXPECT_EQ(moved.f1, base.f1);
  }
}
