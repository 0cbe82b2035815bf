// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

// egohoi command-line front end. Every subcommand reads the shared JSON
// config (--config) and lets flags override individual fields.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "egohoi/error.hpp"
#include "egohoi/io.hpp"
#include "egohoi/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string cameras, detections, cube, manifest, backgrounds, model, out;
  std::optional<double> gate_threshold, fps, decision_threshold, locator_threshold;
  std::optional<int> crop_side, joints;
};

egohoi::PipelineConfig build_config(const Overrides& o) {
  egohoi::PipelineConfig c;
  if (!o.config.empty()) c = egohoi::load_config(o.config);
  auto path = [](const std::string& s, egohoi::fs::path& dst) {
    if (!s.empty()) dst = s;
  };
  path(o.cameras, c.cameras);
  path(o.detections, c.detections);
  path(o.cube, c.cube);
  path(o.manifest, c.manifest);
  path(o.backgrounds, c.backgrounds);
  path(o.model, c.model);
  path(o.out, c.out);
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.gate_threshold) c.gate_threshold = *o.gate_threshold;
  if (o.fps) c.fps = *o.fps;
  if (o.decision_threshold) c.decision_threshold = *o.decision_threshold;
  if (o.locator_threshold) c.locator_threshold = *o.locator_threshold;
  if (o.crop_side) c.crop_side = *o.crop_side;
  if (o.joints) c.joints = *o.joints;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egohoi: multi-view hand annotation and hand-object interaction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "pipeline config JSON (for augment: augmentation config)");
  app.add_option("--seed", o.seed, "seed for all randomness");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto out_opt = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "output directory"); };

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "estimate camera poses from cube corners");
  calibrate->add_option("--cameras", o.cameras, "cameras.json with intrinsics");
  calibrate->add_option("--cube", o.cube, "cube.json");
  calibrate->add_option("--detections", o.detections, "detections.json with cube_corners");
  out_opt(calibrate);

  // simulate
  egohoi::SimulateOptions sim;
  double sigma = 0.0;
  double dropout = 0.0;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic rig, detections and ground truth");
  simulate->add_option("--cams", sim.rig.cameras, "camera count")->check(CLI::Range(2, 64));
  simulate->add_option("--frames", sim.rig.frames, "pose count (each yields a frame pair)")->check(CLI::Range(1, 1000000));
  simulate->add_option("--joints", sim.rig.joints, "joints per hand")->check(CLI::Range(1, 1000));
  simulate->add_option("--sigma", sigma, "2D detection noise, pixels")->check(CLI::NonNegativeNumber);
  simulate->add_option("--dropout", dropout, "joint dropout probability")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--fusion-samples", sim.fusion_samples, "also write a labeled fusion dataset")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--fusion-size", sim.fusion_mask_size, "fusion mask side, pixels")->check(CLI::Range(8, 4096));
  out_opt(simulate);

  // annotate-pair
  auto* annotate = app.add_subcommand("annotate-pair", "triangulate object-free frames and transfer labels");
  annotate->add_option("--cameras", o.cameras, "cameras.json");
  annotate->add_option("--detections", o.detections, "detections.json with pairs");
  annotate->add_option("--gate-threshold", o.gate_threshold, "validity gate on the squared loss");
  out_opt(annotate);

  // augment
  std::string augment_input;
  auto* augment = app.add_subcommand("augment", "chroma key, occlusion and photometric augmentation");
  augment->add_option("--input", augment_input, "directory of PPM images (+ <stem>.json keypoints)")->required();
  augment->add_option("--backgrounds", o.backgrounds, "directory of background PPM images");
  out_opt(augment);

  // detect
  auto* detect = app.add_subcommand("detect", "per-frame interaction detection and smoothing");
  detect->add_option("--manifest", o.manifest, "manifest.json of per-frame inputs");
  detect->add_option("--model", o.model, "model.json");
  detect->add_option("--fps", o.fps, "frame rate");
  detect->add_option("--threshold", o.decision_threshold, "decision threshold on P_hoi");
  detect->add_option("--locator-threshold", o.locator_threshold, "hand presence cutoff");
  detect->add_option("--crop-side", o.crop_side, "ROI side in pixels (0 disables rois.json)");
  out_opt(detect);

  // segment
  std::string timeline_path;
  auto* segment = app.add_subcommand("segment", "re-smooth a timeline and extract segments");
  segment->add_option("--timeline", timeline_path, "timeline.csv")->required();
  segment->add_option("--fps", o.fps, "frame rate");
  out_opt(segment);

  // eval-pck
  std::string pck_pred, pck_gt, pck_out = "pck.csv";
  double max_threshold = 0.0;
  int steps = 100;
  auto* eval_pck = app.add_subcommand("eval-pck", "PCK curve and AUC");
  eval_pck->add_option("--pred", pck_pred, "predictions")->required();
  eval_pck->add_option("--gt", pck_gt, "ground truth")->required();
  eval_pck->add_option("--max-threshold", max_threshold, "upper end of the threshold range")
      ->required()
      ->check(CLI::PositiveNumber);
  eval_pck->add_option("--steps", steps, "threshold intervals")->check(CLI::Range(1, 1000000));
  eval_pck->add_option("--curve", pck_out, "curve CSV path; AUC JSON is written next to it");

  // eval-seg
  std::string seg_pred, seg_gt, report_path = "report.json";
  double iou = 0.5;
  std::size_t seg_frames = 0;
  auto* eval_seg = app.add_subcommand("eval-seg", "segmental F1 and frame accuracy");
  eval_seg->add_option("--pred", seg_pred, "predicted segments.json")->required();
  eval_seg->add_option("--gt", seg_gt, "ground-truth segments.json")->required();
  eval_seg->add_option("--iou", iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
  eval_seg->add_option("--frames", seg_frames, "timeline length for frame accuracy (default: last segment end + 1)");
  eval_seg->add_option("--report", report_path, "report.json path");

  // train-fusion
  egohoi::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train-fusion", "train the cue fusion head");
  train_cmd->add_option("--manifest", o.manifest, "labeled manifest.json");
  train_cmd->add_option("--model", o.model, "output model.json");
  train_cmd->add_option("--lr", train.lr, "learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", train.epochs, "full-batch epochs")->check(CLI::Range(1, 10000000));
  train_cmd->add_option("--hidden", train.hidden, "hidden units")->check(CLI::Range(1, 4096));
  train_cmd->add_flag("--no-pose", train.ablate.pose, "ablate the pose cue");
  train_cmd->add_flag("--no-hand", train.ablate.hand, "ablate the hand mask cue");
  train_cmd->add_flag("--no-object", train.ablate.object, "ablate the object mask cue");
  out_opt(train_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostream& log = std::cerr;
    if (augment->parsed()) {
      // Here --config names the augmentation parameters.
      const egohoi::AugmentConfig aug =
          o.config.empty() ? egohoi::AugmentConfig{} : egohoi::read_augment_config(o.config);
      Overrides rest = o;
      rest.config.clear();
      egohoi::run_augment(build_config(rest), aug, augment_input, log);
      return 0;
    }
    if (eval_pck->parsed()) {
      const egohoi::fs::path curve = pck_out;
      const auto r = egohoi::run_eval_pck(pck_pred, pck_gt, max_threshold, steps, curve,
                                          egohoi::fs::path(curve).replace_extension(".auc.json"));
      std::cout << "auc " << egohoi::format_double(r.auc) << "\n";
      return 0;
    }
    if (eval_seg->parsed()) {
      const auto r = egohoi::run_report(seg_pred, seg_gt, iou, seg_frames, report_path);
      std::cout << "f1 " << egohoi::format_double(r.scores.f1) << " frame_acc " << egohoi::format_double(r.frame_acc)
                << "\n";
      return 0;
    }

    const egohoi::PipelineConfig config = build_config(o);
    if (calibrate->parsed()) {
      egohoi::run_calibrate(config, log);
    } else if (simulate->parsed()) {
      sim.render.noise_sigma = sigma;
      sim.render.dropout = dropout;
      egohoi::run_simulate(config, sim, log);
    } else if (annotate->parsed()) {
      const auto s = egohoi::run_annotate_pair(config, log);
      std::cout << "valid " << s.valid << " invalid " << s.invalid << "\n";
    } else if (detect->parsed()) {
      egohoi::run_detect(config, log);
    } else if (segment->parsed()) {
      egohoi::run_segment(config, timeline_path, log);
    } else if (train_cmd->parsed()) {
      egohoi::run_train_fusion(config, train, log);
    }
  } catch (const egohoi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
