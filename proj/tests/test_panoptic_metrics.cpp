// Copyright 2026 The pdkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Segment matching and recognition/segmentation quality scoring tests.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/errors.hpp"
#include "pdkit/panoptic_metrics.hpp"
#include "pdkit/synth.hpp"
#include "test_helpers.hpp"

using namespace pdkit;
using pdkit::test::make_map;
using pdkit::test::small_classes;

namespace {

/// gt: one 6-pixel stuff run; pred: a 4-pixel run inside it.
///   gt:   1 1 1 1 1 1 0 0 0 0
///   pred: 0 0 1 1 1 1 0 0 0 0
PanopticMap row_gt() {
  return make_map(10, 1, {1, 1, 1, 1, 1, 1, 0, 0, 0, 0},
                  {{1, 1, false, false}});
}
PanopticMap row_pred() {
  return make_map(10, 1, {0, 0, 1, 1, 1, 1, 0, 0, 0, 0},
                  {{1, 1, false, false}});
}

SceneSpec mixed_spec(std::uint64_t seed) {
  SceneSpec spec;
  spec.perturbation.boundary_erosion_px = 1;
  spec.perturbation.class_flip_rate = 0.2;
  spec.perturbation.drop_rate = 0.15;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("identical maps match every segment with IoU 1") {
  const ClassSet classes = small_classes();
  const PanopticMap map = make_map(4, 2, {1, 1, 2, 2, 1, 1, 3, 3},
                                   {{1, 1, false, false},
                                    {2, 2, true, false},
                                    {3, 3, true, false}});
  const MatchResult result = match_segments(map, map, classes);
  for (const auto& [class_id, matches] : result.by_class) {
    CHECK(matches.unmatched_gt.empty());
    CHECK(matches.unmatched_pred.empty());
    CHECK(matches.discarded_pred.empty());
    for (const auto& pair : matches.matched) {
      CHECK(pair.gt_id == pair.pred_id);
      CHECK(pair.iou == 1.0);
    }
  }
  PQAccumulator acc;
  acc.add(result);
  const PQReport report = finalize(acc, classes);
  CHECK(report.all.pq == 1.0);
  CHECK(report.all.sq == 1.0);
  CHECK(report.all.rq == 1.0);
}

TEST_CASE("partial overlap scores its exact intersection-over-union") {
  const ClassSet classes = small_classes();
  const MatchResult result = match_segments(row_gt(), row_pred(), classes);
  REQUIRE(result.by_class.count(1) == 1);
  const ClassMatches& matches = result.by_class.at(1);
  REQUIRE(matches.matched.size() == 1);
  CHECK(matches.matched[0].iou == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(matches.unmatched_gt.empty());
  CHECK(matches.unmatched_pred.empty());
}

TEST_CASE("an overlap of exactly half is not a match") {
  const ClassSet classes = small_classes();
  // gt covers the whole 10x10 frame; pred covers the top five rows.
  // I = 50, U = 100, IoU = 0.5 exactly -> no match under the strict rule.
  std::vector<std::uint32_t> gt_ids(100, 1);
  std::vector<std::uint32_t> pred_ids(100, 0);
  for (int i = 0; i < 50; ++i) pred_ids[static_cast<std::size_t>(i)] = 7;
  const PanopticMap gt = make_map(10, 10, gt_ids, {{1, 2, true, false}});
  const PanopticMap pred = make_map(10, 10, pred_ids, {{7, 2, true, false}});

  CHECK(segment_iou(gt, 1, pred, 7) == 0.5);
  const MatchResult result = match_segments(gt, pred, classes);
  const ClassMatches& matches = result.by_class.at(2);
  CHECK(matches.matched.empty());
  CHECK(matches.unmatched_gt == std::vector<std::uint32_t>{1});
  CHECK(matches.unmatched_pred == std::vector<std::uint32_t>{7});
}

TEST_CASE("counts accumulate across images before any division") {
  const ClassSet classes = small_classes();
  PQAccumulator acc;
  // Image 1: one match at IoU 0.8 for class 2 (gt 10 px, pred 8 px inside).
  {
    std::vector<std::uint32_t> gt_ids(10, 4);
    std::vector<std::uint32_t> pred_ids(10, 0);
    for (int i = 0; i < 8; ++i) pred_ids[static_cast<std::size_t>(i)] = 9;
    const PanopticMap gt = make_map(10, 1, gt_ids, {{4, 2, true, false}});
    const PanopticMap pred = make_map(10, 1, pred_ids, {{9, 2, true, false}});
    const MatchResult result = match_segments(gt, pred, classes);
    REQUIRE(result.by_class.at(2).matched.size() == 1);
    CHECK(result.by_class.at(2).matched[0].iou == 0.8);
    acc.add(result);
  }
  // Image 2: one missed ground-truth segment of the same class.
  {
    const PanopticMap gt = make_map(2, 1, {4, 4}, {{4, 2, true, false}});
    const PanopticMap pred = make_map(2, 1, {1, 1}, {{1, 1, false, false}});
    acc.add(match_segments(gt, pred, classes));
  }
  const PQReport report = finalize(acc, classes);
  const ClassReport* row = nullptr;
  for (const auto& r : report.per_class) {
    if (r.class_id == 2) row = &r;
  }
  REQUIRE(row != nullptr);
  CHECK(row->tp == 1);
  CHECK(row->fn == 1);
  CHECK(row->sq == 0.8);
  CHECK(row->rq == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(row->pq == doctest::Approx(0.8 * 2.0 / 3.0).epsilon(1e-15));
  CHECK(row->pq == row->sq * row->rq);
}

TEST_CASE("classes with no activity do not dilute the aggregates") {
  const ClassSet classes = small_classes();  // classes 1, 2, 3
  // Only class 2 appears; classes 1 and 3 stay silent.
  const PanopticMap map = make_map(2, 1, {5, 5}, {{5, 2, true, false}});
  PQAccumulator acc;
  acc.add(match_segments(map, map, classes));
  const PQReport report = finalize(acc, classes);
  CHECK(report.all.num_classes == 1);
  CHECK(report.all.pq == 1.0);
  CHECK(report.things.num_classes == 1);
  CHECK(report.stuff.num_classes == 0);
  CHECK_FALSE(report.stuff.defined());
}

TEST_CASE("a class with activity but no matches scores zero, not undefined") {
  const ClassSet classes = small_classes();
  const PanopticMap gt = make_map(2, 1, {5, 5}, {{5, 2, true, false}});
  const PanopticMap pred = make_map(2, 1, {6, 6}, {{6, 3, true, false}});
  PQAccumulator acc;
  acc.add(match_segments(gt, pred, classes));
  const PQReport report = finalize(acc, classes);
  for (const auto& row : report.per_class) {
    if (row.class_id == 2) {
      CHECK(row.tp == 0);
      CHECK(row.fn == 1);
      CHECK(row.pq == 0.0);
      CHECK(row.sq == 0.0);
      CHECK(row.rq == 0.0);
    }
  }
  // Both classes contribute (one all-FN, one all-FP), mean over 2 classes.
  CHECK(report.all.num_classes == 2);
  CHECK(report.all.pq == 0.0);
}

TEST_CASE("crowd ground truth is never counted as missed") {
  const ClassSet classes = small_classes();
  const PanopticMap gt = make_map(4, 1, {8, 8, 8, 8}, {{8, 2, true, true}});
  const PanopticMap pred = make_map(4, 1, {0, 0, 0, 0}, {});
  const MatchResult result = match_segments(gt, pred, classes);
  if (result.by_class.count(2) == 1) {
    CHECK(result.by_class.at(2).unmatched_gt.empty());
    CHECK(result.by_class.at(2).matched.empty());
  }
  PQAccumulator acc;
  acc.add(result);
  const PQReport report = finalize(acc, classes);
  for (const auto& row : report.per_class) {
    CHECK(row.fn == 0);
  }
}

TEST_CASE("a prediction mostly over ignored pixels is discarded, not penalized") {
  const ClassSet classes = small_classes();
  // gt: crowd thing on the left 6 px, stuff on the right 4 px.
  const PanopticMap gt = make_map(10, 1, {8, 8, 8, 8, 8, 8, 1, 1, 1, 1},
                                  {{8, 2, true, true}, {1, 1, false, false}});
  // pred: a thing over the crowd (5 of 6 px ignored) plus matching stuff.
  const PanopticMap pred = make_map(10, 1, {9, 9, 9, 9, 9, 0, 1, 1, 1, 1},
                                    {{9, 2, true, false}, {1, 1, false, false}});
  const MatchResult result = match_segments(gt, pred, classes);
  const ClassMatches& things = result.by_class.at(2);
  CHECK(things.matched.empty());
  CHECK(things.unmatched_pred.empty());
  CHECK(things.discarded_pred == std::vector<std::uint32_t>{9});
  // The stuff segment still matches exactly.
  CHECK(result.by_class.at(1).matched.size() == 1);

  PQAccumulator acc;
  acc.add(result);
  const PQReport report = finalize(acc, classes);
  for (const auto& row : report.per_class) {
    CHECK(row.fp == 0);
    CHECK(row.fn == 0);
  }
}

TEST_CASE("void overlap shrinks the prediction side of the union") {
  // gt: 4 void px then 6 stuff px; pred: one 10 px segment over everything.
  // Prediction area counts only its non-ignored part: 10 - 4 = 6.
  // I = 6, so IoU = 6 / (6 + 6 - 6) = 1.
  const PanopticMap gt = make_map(10, 1, {0, 0, 0, 0, 1, 1, 1, 1, 1, 1},
                                  {{1, 1, false, false}});
  const PanopticMap pred = make_map(10, 1, {3, 3, 3, 3, 3, 3, 3, 3, 3, 3},
                                    {{3, 1, false, false}});
  // Without an ignore mask the union keeps all 10 prediction pixels.
  CHECK(segment_iou(gt, 1, pred, 3) == 0.6);
  const MaskImage ignore = ignore_mask(gt);
  CHECK(segment_iou(gt, 1, pred, 3, &ignore) == 1.0);
  const MatchResult result = match_segments(gt, pred, small_classes());
  CHECK(result.by_class.at(1).matched.size() == 1);
  CHECK(result.by_class.at(1).matched[0].iou == 1.0);
}

TEST_CASE("ignore mask marks void and crowd pixels only") {
  const PanopticMap gt = make_map(4, 1, {0, 1, 8, 1},
                                  {{1, 1, false, false}, {8, 2, true, true}});
  const MaskImage mask = ignore_mask(gt);
  CHECK(mask[0] == 1);
  CHECK(mask[1] == 0);
  CHECK(mask[2] == 1);
  CHECK(mask[3] == 0);
}

TEST_CASE("matching requires equal raster sizes and known categories") {
  const ClassSet classes = small_classes();
  const PanopticMap a = make_map(2, 1, {1, 1}, {{1, 1, false, false}});
  const PanopticMap b = make_map(3, 1, {1, 1, 1}, {{1, 1, false, false}});
  CHECK_THROWS_AS(match_segments(a, b, classes), validation_error);
  const PanopticMap c = make_map(2, 1, {1, 1}, {{1, 42, false, false}});
  CHECK_THROWS_AS(match_segments(c, c, classes), validation_error);
}

TEST_CASE("swapping prediction and ground truth swaps the error kinds") {
  const ClassSet classes = small_classes();
  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    const Scene scene = generate_scene(mixed_spec(seed), classes);
    const MatchResult forward = match_segments(scene.gt, scene.pred, classes);
    const MatchResult backward = match_segments(scene.pred, scene.gt, classes);
    for (const auto& [class_id, fwd] : forward.by_class) {
      REQUIRE(backward.by_class.count(class_id) == 1);
      const ClassMatches& bwd = backward.by_class.at(class_id);
      CHECK(fwd.matched.size() == bwd.matched.size());
      CHECK(fwd.unmatched_gt == bwd.unmatched_pred);
      CHECK(fwd.unmatched_pred == bwd.unmatched_gt);
      double fwd_iou = 0;
      double bwd_iou = 0;
      for (const auto& p : fwd.matched) fwd_iou += p.iou;
      for (const auto& p : bwd.matched) bwd_iou += p.iou;
      CHECK(fwd_iou == doctest::Approx(bwd_iou).epsilon(1e-12));
    }
  }
}

TEST_CASE("every segment matches at most once") {
  const ClassSet classes = small_classes();
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Scene scene = generate_scene(mixed_spec(seed), classes);
    const MatchResult result = match_segments(scene.gt, scene.pred, classes);
    std::vector<std::uint32_t> gt_seen;
    std::vector<std::uint32_t> pred_seen;
    for (const auto& [class_id, matches] : result.by_class) {
      for (const auto& pair : matches.matched) {
        CHECK(pair.iou > 0.5);
        gt_seen.push_back(pair.gt_id);
        pred_seen.push_back(pair.pred_id);
      }
    }
    std::sort(gt_seen.begin(), gt_seen.end());
    std::sort(pred_seen.begin(), pred_seen.end());
    CHECK(std::adjacent_find(gt_seen.begin(), gt_seen.end()) == gt_seen.end());
    CHECK(std::adjacent_find(pred_seen.begin(), pred_seen.end()) ==
          pred_seen.end());
  }
}

TEST_CASE("match counts partition the segment tables") {
  const ClassSet classes = small_classes();
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    const Scene scene = generate_scene(mixed_spec(seed), classes);
    const MatchResult result = match_segments(scene.gt, scene.pred, classes);
    std::map<int, std::int64_t> gt_per_class;
    std::map<int, std::int64_t> pred_per_class;
    for (const auto& seg : scene.gt.segments()) {
      if (!seg.is_crowd) ++gt_per_class[seg.category_id];
    }
    for (const auto& seg : scene.pred.segments()) {
      ++pred_per_class[seg.category_id];
    }
    for (const auto& [class_id, matches] : result.by_class) {
      const auto tp = static_cast<std::int64_t>(matches.matched.size());
      CHECK(tp + static_cast<std::int64_t>(matches.unmatched_gt.size()) ==
            gt_per_class[class_id]);
      CHECK(tp + static_cast<std::int64_t>(matches.unmatched_pred.size()) +
                static_cast<std::int64_t>(matches.discarded_pred.size()) ==
            pred_per_class[class_id]);
    }
  }
}

TEST_CASE("parallel and serial matching agree exactly") {
  const ClassSet classes = small_classes();
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    const Scene scene = generate_scene(mixed_spec(seed), classes);
    CHECK(match_segments(scene.gt, scene.pred, classes) ==
          match_segments_serial(scene.gt, scene.pred, classes));
  }
}

TEST_CASE("accumulator merge equals sequential accumulation") {
  const ClassSet classes = small_classes();
  std::vector<MatchResult> results;
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    const Scene scene = generate_scene(mixed_spec(seed), classes);
    results.push_back(match_segments(scene.gt, scene.pred, classes));
  }
  PQAccumulator sequential;
  for (const auto& r : results) sequential.add(r);

  PQAccumulator left;
  PQAccumulator right;
  for (std::size_t i = 0; i < results.size(); ++i) {
    (i < 5 ? left : right).add(results[i]);
  }
  left.merge(right);

  REQUIRE(left.stats().size() == sequential.stats().size());
  for (const auto& [class_id, stats] : sequential.stats()) {
    const ClassStats& merged = left.stats().at(class_id);
    CHECK(merged.tp == stats.tp);
    CHECK(merged.fp == stats.fp);
    CHECK(merged.fn == stats.fn);
    CHECK(merged.iou_sum == doctest::Approx(stats.iou_sum).epsilon(1e-12));
  }
}

TEST_CASE("segment id relabeling changes nothing but the labels") {
  const ClassSet classes = small_classes();
  const Scene scene = generate_scene(mixed_spec(77), classes);

  // Shift every pred id by a constant.
  std::vector<std::uint32_t> shifted_ids(
      static_cast<std::size_t>(scene.pred.ids().pixel_count()));
  for (std::int64_t i = 0; i < scene.pred.ids().pixel_count(); ++i) {
    const std::uint32_t id = scene.pred.ids()[i];
    shifted_ids[static_cast<std::size_t>(i)] = id == 0 ? 0 : id + 5000;
  }
  std::vector<SegmentInfo> shifted_segments;
  for (SegmentInfo seg : scene.pred.segments()) {
    seg.id += 5000;
    shifted_segments.push_back(seg);
  }
  const PanopticMap relabeled(
      IdImage(scene.pred.width(), scene.pred.height(), std::move(shifted_ids)),
      std::move(shifted_segments));

  PQAccumulator original;
  original.add(match_segments(scene.gt, scene.pred, classes));
  PQAccumulator renamed;
  renamed.add(match_segments(scene.gt, relabeled, classes));
  for (const auto& [class_id, stats] : original.stats()) {
    const ClassStats& other = renamed.stats().at(class_id);
    CHECK(other.tp == stats.tp);
    CHECK(other.fp == stats.fp);
    CHECK(other.fn == stats.fn);
    CHECK(other.iou_sum == doctest::Approx(stats.iou_sum).epsilon(1e-12));
  }
}

TEST_CASE("report json carries per-class rows and aggregate blocks") {
  const ClassSet classes = small_classes();
  const PanopticMap map = make_map(4, 1, {1, 1, 2, 2},
                                   {{1, 1, false, false}, {2, 2, true, false}});
  PQAccumulator acc;
  acc.add(match_segments(map, map, classes));
  const nlohmann::json doc = to_json(finalize(acc, classes));
  REQUIRE(doc.contains("per_class"));
  REQUIRE(doc.contains("aggregate"));
  CHECK(doc["aggregate"]["pq"].get<double>() == 1.0);
  CHECK(doc["aggregate"]["num_classes"].get<int>() == 2);
  CHECK(doc["per_class"].size() == 2);
  // The stuff/things splits are present and defined here.
  CHECK(doc["things"]["pq"].get<double>() == 1.0);
  CHECK(doc["stuff"]["pq"].get<double>() == 1.0);
}

TEST_CASE("undefined aggregates serialize as null and print as dashes") {
  const ClassSet classes = small_classes();
  // Only stuff activity: the things aggregate has no contributing class.
  const PanopticMap map = make_map(2, 1, {1, 1}, {{1, 1, false, false}});
  PQAccumulator acc;
  acc.add(match_segments(map, map, classes));
  const PQReport report = finalize(acc, classes);
  CHECK_FALSE(report.things.defined());
  const nlohmann::json doc = to_json(report);
  CHECK(doc["things"]["pq"].is_null());
  const std::string table = format_table(report);
  CHECK(table.find("things (0)") != std::string::npos);
  CHECK(table.find('-') != std::string::npos);
}

TEST_CASE("the printed table reports percentages") {
  const ClassSet classes = small_classes();
  const PanopticMap map = make_map(2, 1, {1, 1}, {{1, 1, false, false}});
  PQAccumulator acc;
  acc.add(match_segments(map, map, classes));
  const std::string table = format_table(finalize(acc, classes));
  CHECK(table.find("ground") != std::string::npos);
  CHECK(table.find("100.0") != std::string::npos);
  CHECK(table.find("all (1)") != std::string::npos);
}
