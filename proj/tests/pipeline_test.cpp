// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "egohoi/hand_locator.hpp"
#include "egohoi/heatmap.hpp"
#include "egohoi/pipeline.hpp"
#include "egohoi/raster.hpp"
#include "test_support.hpp"

using namespace egohoi;
using egohoi::testing::error_code_of;
using egohoi::testing::TempDir;

namespace {

struct SimRun {
  TempDir dir{"pipe"};
  PipelineConfig config;
};

void simulate(SimRun& run, int frames, double sigma, int fusion = 0) {
  run.config.out = run.dir.path();
  run.config.seed = 11;
  SimulateOptions opt;
  opt.rig.frames = frames;
  opt.rig.radius_min = opt.rig.radius_max = 0.6;
  opt.render.noise_sigma = sigma;
  opt.render.dropout = 0.0;
  opt.render.dropout_with_object = 0.0;
  opt.fusion_samples = fusion;
  std::ostringstream log;
  run_simulate(run.config, opt, log);
  run.config.cameras = run.dir / "cameras.json";
  run.config.detections = run.dir / "detections.json";
}

// Trains the synthetic-suite model once and shares it between tests.
const fs::path& shared_model() {
  static TempDir dir("model");
  static fs::path path = [] {
    SimRun run;
    simulate(run, 1, 0.0, 200);
    run.config.manifest = run.dir / "fusion" / "manifest.json";
    run.config.model = dir / "model.json";
    std::ostringstream log;
    run_train_fusion(run.config, TrainOptions{}, log);
    return dir / "model.json";
  }();
  return path;
}

// Writes a detect manifest whose frames reuse suite samples with the given
// object masks.
fs::path detect_manifest(const TempDir& dir, int frames, bool empty_objects) {
  Manifest m;
  for (int i = 0; i < frames; ++i) {
    const FusionSample s = generate_fusion_sample(3, static_cast<std::uint64_t>(i), i % 2);
    const std::string stem = "f" + std::to_string(i);
    write_hmap(dir / (stem + ".hmap"), s.pose);
    write_pgm(dir / (stem + "_h.pgm"), s.hand);
    write_pgm(dir / (stem + "_o.pgm"), empty_objects ? MaskRaster(s.object.width(), s.object.height()) : s.object);
    m.entries.push_back({static_cast<std::uint64_t>(i), stem + ".hmap", stem + "_h.pgm", stem + "_o.pgm", std::nullopt,
                         "", 0, 0});
  }
  write_manifest(dir / "manifest.json", m);
  return dir / "manifest.json";
}

}  // namespace

TEST(AnnotatePair, ZeroNoiseAllValidAndExact) {
  SimRun run;
  simulate(run, 20, 0.0);
  std::ostringstream log;
  const AnnotateSummary s = run_annotate_pair(run.config, log);
  EXPECT_EQ(s.valid, 20);
  EXPECT_EQ(s.invalid, 0);
  EXPECT_NE(log.str().find("annotated 20 pairs: 20 valid, 0 invalid"), std::string::npos) << log.str();

  const SynthScene scene = generate_scene(11, RigOptions{.frames = 20, .radius_min = 0.6, .radius_max = 0.6});
  for (const auto& rec : s.records) {
    const auto pair = std::find_if(scene.pairs.begin(), scene.pairs.end(),
                                   [&](const FramePair& p) { return p.with_object == rec.frame; });
    ASSERT_NE(pair, scene.pairs.end());
    const Joints3D& truth = scene.poses[pair->pose_index];
    for (std::size_t c = 0; c < scene.cameras.size(); ++c) {
      for (std::size_t j = 0; j < truth.size(); ++j) {
        const Projection p = project(scene.cameras[c], truth[j]);
        EXPECT_NEAR(rec.labels2d[c].labels[j].u, p.u, 1e-6);
        EXPECT_NEAR(rec.labels2d[c].labels[j].v, p.v, 1e-6);
        EXPECT_TRUE(rec.labels2d[c].labels[j].visible);
      }
    }
  }
  EXPECT_EQ(read_annotations(run.dir / "annotations.json").size(), 20u);
}

TEST(AnnotatePair, GateZeroRejectsEverything) {
  SimRun run;
  simulate(run, 10, 0.5);
  run.config.gate_threshold = 0.0;
  std::ostringstream log;
  const AnnotateSummary s = run_annotate_pair(run.config, log);
  EXPECT_EQ(s.valid, 0);
  EXPECT_EQ(s.invalid, 10);
}

TEST(AnnotatePair, MissingPartnerNamesFrame) {
  SimRun run;
  simulate(run, 3, 0.0);
  DetectionSet set = read_detections(run.config.detections);
  const std::uint64_t partner = set.pairs[1].without_object;
  std::erase_if(set.frames, [&](const DetectionFrame& f) { return f.frame == partner; });
  write_detections(run.config.detections, set);
  std::ostringstream log;
  try {
    run_annotate_pair(run.config, log);
    FAIL() << "expected MissingPair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPair);
    EXPECT_NE(std::string(e.what()).find("frame " + std::to_string(set.pairs[1].with_object)), std::string::npos)
        << e.what();
  }
}

TEST(AnnotatePair, ErrorsCarryFrameContext) {
  SimRun run;
  simulate(run, 2, 0.0);
  DetectionSet set = read_detections(run.config.detections);
  for (auto& f : set.frames) f.views.resize(1);
  write_detections(run.config.detections, set);
  std::ostringstream log;
  try {
    run_annotate_pair(run.config, log);
    FAIL() << "expected InsufficientViews";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientViews);
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos) << e.what();
  }
}

TEST(AnnotatePair, JobsDoNotChangeOutput) {
  SimRun run;
  simulate(run, 30, 1.0);
  std::ostringstream log;
  run_annotate_pair(run.config, log);
  const std::string one = read_text(run.dir / "annotations.json");
  run.config.jobs = 4;
  run_annotate_pair(run.config, log);
  EXPECT_EQ(read_text(run.dir / "annotations.json"), one);
}

TEST(Detect, EmptyObjectMasksAreIdle) {
  TempDir dir("detect");
  PipelineConfig c;
  c.manifest = detect_manifest(dir, 12, true);
  c.model = shared_model();
  c.out = dir / "out";
  std::ostringstream log;
  const DetectSummary s = run_detect(c, log);
  ASSERT_EQ(s.timeline.size(), 12u);
  for (auto st : s.timeline.raw) EXPECT_EQ(st, HoiStatus::kIdle);
  EXPECT_TRUE(s.segments.empty());
}

TEST(Detect, RealObjectMasksFollowLabels) {
  TempDir dir("detect");
  PipelineConfig c;
  c.manifest = detect_manifest(dir, 12, false);
  c.model = shared_model();
  c.out = dir / "out";
  std::ostringstream log;
  const DetectSummary s = run_detect(c, log);
  int agree = 0;
  for (int i = 0; i < 12; ++i) agree += (s.timeline.raw[i] == HoiStatus::kHoi) == (i % 2 == 1);
  EXPECT_GE(agree, 11);
}

TEST(Detect, DuplicateFrameGivesIdenticalRows) {
  TempDir dir("detect");
  detect_manifest(dir, 2, false);
  Manifest m = read_manifest(dir / "manifest.json");
  ManifestEntry copy = m.entries[1];
  copy.frame = 2;
  m.entries.push_back(copy);
  write_manifest(dir / "manifest.json", m);
  PipelineConfig c;
  c.manifest = dir / "manifest.json";
  c.model = shared_model();
  c.out = dir / "out";
  std::ostringstream log;
  const DetectSummary s = run_detect(c, log);
  ASSERT_EQ(s.timeline.size(), 3u);
  EXPECT_EQ(s.timeline.p_hoi[1], s.timeline.p_hoi[2]);
  EXPECT_EQ(s.timeline.raw[1], s.timeline.raw[2]);
}

TEST(Detect, LogsHalfSecondWindow) {
  TempDir dir("detect");
  PipelineConfig c;
  c.manifest = detect_manifest(dir, 4, false);
  c.model = shared_model();
  c.out = dir / "out";
  c.fps = 30;
  std::ostringstream log;
  EXPECT_EQ(run_detect(c, log).window, 15);
  EXPECT_NE(log.str().find("smoothing window 15 frames at 30 fps"), std::string::npos) << log.str();
}

TEST(Detect, GapsAndMissingFilesBecomeNoHand) {
  TempDir dir("detect");
  detect_manifest(dir, 5, false);
  Manifest m = read_manifest(dir / "manifest.json");
  std::erase_if(m.entries, [](const ManifestEntry& e) { return e.frame == 2; });
  m.entries[2].object = "gone.pgm";  // frame 3
  write_manifest(dir / "manifest.json", m);
  PipelineConfig c;
  c.manifest = dir / "manifest.json";
  c.model = shared_model();
  c.out = dir / "out";
  std::ostringstream log;
  const DetectSummary s = run_detect(c, log);
  EXPECT_EQ(s.missing_frames, 2);
  EXPECT_EQ(s.timeline.raw[2], HoiStatus::kNoHand);
  EXPECT_EQ(s.timeline.raw[3], HoiStatus::kNoHand);
  EXPECT_FALSE(s.timeline.p_hoi[3]);
  EXPECT_NE(log.str().find("frame 2: not in manifest"), std::string::npos) << log.str();
  EXPECT_NE(log.str().find("frame 3: missing object file"), std::string::npos) << log.str();
}

TEST(Detect, LocatorWithoutRightHandIsNoHand) {
  TempDir dir("detect");
  detect_manifest(dir, 2, false);
  Manifest m = read_manifest(dir / "manifest.json");
  write_hmap(dir / "left.hmap", localization_target({{{100, 100, 200, 200}, HandSide::kLeft}}, 640, 480));
  write_hmap(dir / "right.hmap", localization_target({{{300, 200, 400, 300}, HandSide::kRight}}, 640, 480));
  m.entries[0].locator = "left.hmap";
  m.entries[1].locator = "right.hmap";
  for (auto& e : m.entries) e.frame_width = 640, e.frame_height = 480;
  write_manifest(dir / "manifest.json", m);
  PipelineConfig c;
  c.manifest = dir / "manifest.json";
  c.model = shared_model();
  c.out = dir / "out";
  c.crop_side = 128;
  std::ostringstream log;
  const DetectSummary s = run_detect(c, log);
  EXPECT_EQ(s.timeline.raw[0], HoiStatus::kNoHand);
  EXPECT_NE(s.timeline.raw[1], HoiStatus::kNoHand);
  EXPECT_TRUE(fs::exists(c.out / "rois.json"));
}

TEST(Detect, JobsDoNotChangeOutput) {
  TempDir dir("detect");
  PipelineConfig c;
  c.manifest = detect_manifest(dir, 16, false);
  c.model = shared_model();
  c.out = dir / "out";
  std::ostringstream log;
  run_detect(c, log);
  const std::string a = read_text(c.out / "timeline.csv");
  c.jobs = 3;
  run_detect(c, log);
  EXPECT_EQ(read_text(c.out / "timeline.csv"), a);
}

TEST(Segment, ResmoothingMatchesApi) {
  TempDir dir("seg");
  HoiTimeline t;
  t.fps = 10;
  t.raw = {HoiStatus::kIdle, HoiStatus::kHoi, HoiStatus::kHoi, HoiStatus::kIdle, HoiStatus::kHoi,
           HoiStatus::kHoi, HoiStatus::kHoi, HoiStatus::kNoHand, HoiStatus::kIdle, HoiStatus::kIdle};
  t.p_hoi.assign(t.raw.size(), 0.5);
  write_timeline_csv(dir / "t.csv", t);
  PipelineConfig c;
  c.fps = 10;
  c.out = dir / "out";
  std::ostringstream log;
  const DetectSummary s = run_segment(c, dir / "t.csv", log);
  EXPECT_EQ(s.timeline.smoothed, smooth_statuses(t.raw, 5));
  EXPECT_EQ(read_segments(c.out / "segments.json"), extract_segments(smooth_statuses(t.raw, 5)));
}

TEST(Report, MatchesDirectApiCalls) {
  TempDir dir("report");
  const std::vector<Segment> pred = {{2, 10, "hoi"}, {20, 25, "hoi"}, {40, 41, "hoi"}};
  const std::vector<Segment> gt = {{0, 9, "hoi"}, {22, 30, "hoi"}};
  write_segments(dir / "p.json", pred);
  write_segments(dir / "g.json", gt);
  const SegReport r = run_report(dir / "p.json", dir / "g.json", 0.5, 50, dir / "report.json");
  const SegmentScores direct = f1_at_iou(pred, gt, 0.5);
  EXPECT_EQ(r.scores.f1, direct.f1);
  EXPECT_EQ(r.frame_acc, frame_accuracy(paint_segments(pred, 50), paint_segments(gt, 50)));
  const std::string json = read_text(dir / "report.json");
  for (const char* key : {"\"precision\"", "\"recall\"", "\"f1\"", "\"frame_acc\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

TEST(Report, PerfectAndEmpty) {
  const std::vector<Segment> gt = {{0, 9, "hoi"}, {22, 30, "hoi"}};
  const SegReport same = evaluate_segments(gt, gt, 0.5);
  EXPECT_EQ(same.scores.f1, 1.0);
  EXPECT_EQ(same.frame_acc, 1.0);
  EXPECT_EQ(evaluate_segments({}, gt, 0.5).scores.recall, 0.0);
}

TEST(Report, SchemaErrorNamesField) {
  TempDir dir("report");
  write_text(dir / "p.json", R"([{"start":"x","end":3}])");
  write_segments(dir / "g.json", {});
  try {
    run_report(dir / "p.json", dir / "g.json", 0.5, 0, dir / "r.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaError);
    EXPECT_NE(std::string(e.what()).find("start"), std::string::npos) << e.what();
  }
}

TEST(EvalPck, ThreeDimensionalInMillimeters) {
  SimRun run;
  simulate(run, 10, 1.0);
  std::ostringstream log;
  const AnnotateSummary s = run_annotate_pair(run.config, log);
  const PckReport r = run_eval_pck(run.dir / "annotations.json", run.dir / "gt.json", 20.0, 100,
                                   run.dir / "pck.csv", run.dir / "pck.auc.json");
  EXPECT_TRUE(r.three_d);
  EXPECT_GT(r.mean_error, 0.0);
  EXPECT_LT(r.mean_error, 10.0);
  EXPECT_EQ(r.curve.thresholds.size(), 101u);
  EXPECT_GE(r.auc, 0.0);
  EXPECT_LE(r.auc, 1.0);
  EXPECT_EQ(read_text(run.dir / "pck.csv").substr(0, 14), "threshold,pck\n");
  EXPECT_GT(s.valid, 0);
}

TEST(EvalPck, TwoDimensionalExact) {
  TempDir dir("pck");
  write_keypoints(dir / "p.json", {{{0, 0}, {3, 4}}, {}});
  write_keypoints(dir / "g.json", {{{0, 0}, {0, 0}}, {}});
  const PckReport r = run_eval_pck(dir / "p.json", dir / "g.json", 10.0, 10, dir / "c.csv", dir / "a.json");
  EXPECT_FALSE(r.three_d);
  EXPECT_EQ(r.mean_error, 2.5);
  EXPECT_EQ(r.curve.pck[4], 0.5);
  EXPECT_EQ(r.curve.pck[5], 1.0);
  EXPECT_EQ(error_code_of([&] { run_eval_pck(dir / "p.json", dir / "missing.json", 10, 10, dir / "c", dir / "a"); }),
            ErrorCode::kIoError);
}

TEST(Config, LoadResolvesRelativePathsAndValidates) {
  TempDir dir("cfg");
  write_text(dir / "cams.json", R"({"cameras":[]})");
  write_text(dir / "c.json", R"({"cameras":"cams.json","fps":25,"seed":4,"jobs":2,"unknown":1})");
  const PipelineConfig c = load_config(dir / "c.json");
  EXPECT_EQ(c.cameras, dir / "cams.json");
  EXPECT_EQ(c.fps, 25.0);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.jobs, 2);
  write_text(dir / "bad.json", R"({"cameras":"nope.json"})");
  EXPECT_EQ(error_code_of([&] { load_config(dir / "bad.json"); }), ErrorCode::kIoError);
  write_text(dir / "fps.json", R"({"fps":0})");
  EXPECT_EQ(error_code_of([&] { load_config(dir / "fps.json"); }), ErrorCode::kInvalidArgument);
}

TEST(ParallelFor, RethrowsLowestIndexError) {
  std::vector<int> seen(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { seen[i] = 1; });
  EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), 50);
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 30) throw Error(ErrorCode::kInvalidArgument, "at " + std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.detail(), "at 7");
  }
}

TEST(Calibrate, RecoversSimulatedExtrinsics) {
  SimRun run;
  simulate(run, 1, 0.0);
  const auto truth = read_cameras(run.dir / "cameras.json");
  run.config.cube = run.dir / "cube.json";
  run.config.out = run.dir / "calib";
  std::ostringstream log;
  const CalibrateSummary s = run_calibrate(run.config, log);
  ASSERT_EQ(s.cameras.size(), truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_LT(rotation_angle_between(s.cameras[i].rotation, truth[i].rotation), 1e-6);
    EXPECT_LT((s.cameras[i].translation - truth[i].translation).norm(), 1e-6);
    EXPECT_LT(s.rms_px[i], 1e-6);
  }
  EXPECT_TRUE(fs::exists(run.dir / "calib" / "cameras.json"));
  EXPECT_NE(log.str().find("calibrated cam0"), std::string::npos) << log.str();
}
