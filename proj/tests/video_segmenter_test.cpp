// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "egohoi/rng.hpp"
#include "egohoi/video_segmenter.hpp"
#include "test_support.hpp"

using namespace egohoi;
using egohoi::testing::error_code_of;

namespace {

constexpr HoiStatus I = HoiStatus::kIdle;
constexpr HoiStatus H = HoiStatus::kHoi;
constexpr HoiStatus N = HoiStatus::kNoHand;

std::vector<HoiStatus> bits(const std::string& s) {
  std::vector<HoiStatus> out;
  for (char c : s) out.push_back(c == '1' ? H : (c == 'n' ? N : I));
  return out;
}

std::vector<HoiStatus> random_statuses(CounterRng& rng, std::size_t n, bool with_no_hand) {
  std::vector<HoiStatus> out(n);
  for (auto& s : out) {
    const auto r = rng.below(with_no_hand ? 3 : 2);
    s = r == 0 ? I : (r == 1 ? H : N);
  }
  return out;
}

// Recounts every window from scratch.
std::vector<HoiStatus> brute_majority(const std::vector<HoiStatus>& raw, int w) {
  const int n = static_cast<int>(raw.size());
  const int half = w / 2;
  std::vector<HoiStatus> out(raw.size());
  for (int i = 0; i < n; ++i) {
    int hoi = 0, idle = 0, none = 0;
    for (int k = std::max(0, i - half); k <= std::min(n - 1, i + half); ++k) {
      hoi += raw[k] == H;
      idle += raw[k] == I;
      none += raw[k] == N;
    }
    if (hoi > idle + none) {
      out[i] = H;
    } else if (raw[i] != H) {
      out[i] = raw[i];
    } else {
      out[i] = none > idle ? N : I;
    }
  }
  return out;
}

bool is_hoi_boundary(const std::vector<HoiStatus>& s, std::size_t j) { return (s[j - 1] == H) != (s[j] == H); }

}  // namespace

TEST(SelectRightHand, TwoHandsTakesRightmost) {
  const HandObservation obs{0, HandClass::kTwoHands, {{100, 50, 0.9}, {400, 60, 0.8}}};
  const auto k = select_right_hand(obs);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->u, 400);
  EXPECT_EQ(k->v, 60);
}

TEST(SelectRightHand, RightPassesThrough) {
  const auto k = select_right_hand({0, HandClass::kRight, {{200, 100, 1.0}}});
  ASSERT_TRUE(k);
  EXPECT_EQ(k->u, 200);
  EXPECT_EQ(k->v, 100);
}

TEST(SelectRightHand, LeftAndNoneGiveNothing) {
  EXPECT_FALSE(select_right_hand({0, HandClass::kLeft, {{300, 100, 1.0}}}));
  EXPECT_FALSE(select_right_hand({0, HandClass::kNone, {}}));
}

TEST(UpdateTrack, MeanOfJoints) {
  EXPECT_EQ(update_track({0, 0}, {{50, 50}, {50, 50}, {50, 50}}), Vec2(50, 50));
  EXPECT_EQ(update_track({0, 0}, {{0, 0}, {100, 100}}), Vec2(50, 50));
  EXPECT_EQ(update_track({12, 34}, {}), Vec2(12, 34));
}

TEST(SmoothingWindow, HalfSecondForcedOdd) {
  EXPECT_EQ(smoothing_window(30), 15);
  EXPECT_EQ(smoothing_window(60), 31);
  EXPECT_EQ(smoothing_window(24), 13);
  EXPECT_EQ(smoothing_window(25), 13);
  EXPECT_EQ(smoothing_window(1), 1);
  EXPECT_EQ(smoothing_window(0.5), 1);
  EXPECT_EQ(error_code_of([] { smoothing_window(0); }), ErrorCode::kInvalidArgument);
}

TEST(Smoothing, ConstantUnchanged) {
  for (int w : {1, 3, 15}) {
    EXPECT_EQ(smooth_statuses(bits("1111111111"), w), bits("1111111111"));
    EXPECT_EQ(smooth_statuses(bits("0000000000"), w), bits("0000000000"));
  }
}

TEST(Smoothing, SingleFlipRemoved) {
  EXPECT_EQ(smooth_statuses(bits("1110111"), 3), bits("1111111"));
  EXPECT_EQ(smooth_statuses(bits("0001000"), 3), bits("0000000"));
  EXPECT_EQ(smooth_statuses(bits("nnn1nnn"), 3), bits("nnnnnnn"));
}

TEST(Smoothing, NoHandVotesAgainstHoi) {
  // Two no_hand frames and one idle frame outvote two hoi frames.
  EXPECT_EQ(smooth_statuses(bits("n1n10"), 5)[2], N);
  EXPECT_EQ(smooth_statuses(bits("n1n10"), 5)[1], N);
  EXPECT_EQ(smooth_statuses(bits("01n10"), 5)[1], I);
}

TEST(Smoothing, MatchesBruteForceMajority) {
  CounterRng rng(2026);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(80);
    const int w = 1 + 2 * static_cast<int>(rng.below(10));
    const auto raw = random_statuses(rng, n, t % 2 == 1);
    ASSERT_EQ(smooth_statuses(raw, w), brute_majority(raw, w)) << "timeline " << t << " window " << w;
  }
}

TEST(Smoothing, WindowOneIsIdentityAndIdempotent) {
  CounterRng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto raw = random_statuses(rng, 40, true);
    const auto once = smooth_statuses(raw, 1);
    EXPECT_EQ(once, raw);
    EXPECT_EQ(smooth_statuses(once, 1), once);
  }
}

TEST(Smoothing, WindowThreeNotIdempotentOnAlternation) {
  // A three-frame majority filter needs more than one pass on alternating
  // input, so idempotence holds only once a fixed point is reached.
  const auto once = smooth_statuses(bits("010101"), 3);
  EXPECT_EQ(once, bits("001010"));
  EXPECT_EQ(smooth_statuses(once, 3), bits("000100"));
}

TEST(Smoothing, WindowThreeReachesFixedPoint) {
  CounterRng rng(6);
  for (int t = 0; t < 300; ++t) {
    auto s = random_statuses(rng, 50, t % 2 == 0);
    bool fixed = false;
    for (int pass = 0; pass < 50 && !fixed; ++pass) {
      const auto next = smooth_statuses(s, 3);
      fixed = next == s;
      s = next;
    }
    EXPECT_TRUE(fixed);
  }
}

TEST(Smoothing, NeverIntroducesNewLabels) {
  CounterRng rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto raw = random_statuses(rng, 1 + rng.below(60), t % 3 != 0);
    const int w = 1 + 2 * static_cast<int>(rng.below(8));
    const std::set<HoiStatus> in(raw.begin(), raw.end());
    for (auto s : smooth_statuses(raw, w)) EXPECT_TRUE(in.count(s));
  }
}

TEST(Smoothing, BoundariesShiftAtMostHalfWindow) {
  CounterRng rng(8);
  for (int t = 0; t < 500; ++t) {
    const auto raw = random_statuses(rng, 2 + rng.below(80), t % 2 == 0);
    const int w = 1 + 2 * static_cast<int>(rng.below(8));
    const auto sm = smooth_statuses(raw, w);
    for (std::size_t j = 1; j < sm.size(); ++j) {
      if (!is_hoi_boundary(sm, j)) continue;
      bool near = false;
      for (std::size_t k = 1; k < raw.size(); ++k) {
        const auto d = static_cast<long>(j) - static_cast<long>(k);
        near |= is_hoi_boundary(raw, k) && std::abs(d) <= w / 2;
      }
      EXPECT_TRUE(near) << "timeline " << t << " boundary " << j;
    }
  }
}

TEST(SmoothTimeline, UsesFpsWindow) {
  HoiTimeline tl;
  tl.fps = 30;
  tl.raw = bits("0000000111111110000000");
  tl.raw[10] = I;
  tl.p_hoi.assign(tl.raw.size(), 0.5);
  const HoiTimeline out = smooth_timeline(tl);
  EXPECT_EQ(out.smoothed, smooth_statuses(tl.raw, 15));
  tl.p_hoi.pop_back();
  EXPECT_EQ(error_code_of([&] { smooth_timeline(tl); }), ErrorCode::kInvalidArgument);
}

TEST(ExtractSegments, Examples) {
  EXPECT_EQ(extract_segments(bits("000111")), (std::vector<Segment>{{3, 5, "hoi"}}));
  EXPECT_TRUE(extract_segments(bits("000000")).empty());
  EXPECT_EQ(extract_segments(bits("0101")), (std::vector<Segment>{{1, 1, "hoi"}, {3, 3, "hoi"}}));
  EXPECT_EQ(extract_segments(bits("1n1")), (std::vector<Segment>{{0, 0, "hoi"}, {2, 2, "hoi"}}));
}

TEST(ExtractSegments, RequiresSmoothedTimeline) {
  HoiTimeline tl;
  tl.raw = bits("0110");
  tl.p_hoi.assign(4, std::nullopt);
  EXPECT_EQ(error_code_of([&] { extract_segments(tl); }), ErrorCode::kInvalidArgument);
}

TEST(ExtractSegments, PaintRoundTrip) {
  CounterRng rng(9);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(60);
    const auto segs = extract_segments(random_statuses(rng, n, true));
    EXPECT_EQ(extract_segments(paint_segments(segs, n)), segs);
  }
  EXPECT_EQ(error_code_of([] { paint_segments({{2, 5, "hoi"}}, 5); }), ErrorCode::kInvalidArgument);
}

TEST(Status, NamesRoundTrip) {
  for (auto s : {I, H, N}) EXPECT_EQ(parse_status(to_string(s)), s);
  EXPECT_EQ(error_code_of([] { parse_status("busy"); }), ErrorCode::kSchemaError);
  EXPECT_EQ(to_string(HandClass::kTwoHands), "two_hands");
}
