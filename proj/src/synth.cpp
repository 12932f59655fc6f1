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
#include "pdkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdkit/dataset_io.hpp"
#include "pdkit/errors.hpp"
#include "pdkit/png_io.hpp"

namespace pdkit {

namespace {

void validate_spec(const SceneSpec& spec) {
  if (spec.width < 8 || spec.height < 8) {
    throw validation_error("scene dimensions must be at least 8x8");
  }
  if (spec.num_things < 0 || spec.num_stuff < 0) {
    throw validation_error("segment counts must be non-negative");
  }
  if (!(spec.depth_min_m > 0) || !(spec.depth_min_m < spec.depth_max_m)) {
    throw validation_error("depth range requires 0 < min < max");
  }
  const Perturbation& p = spec.perturbation;
  if (p.boundary_erosion_px < 0) {
    throw validation_error("boundary erosion must be non-negative");
  }
  if (p.class_flip_rate < 0 || p.class_flip_rate > 1 || p.drop_rate < 0 ||
      p.drop_rate > 1) {
    throw validation_error("flip/drop rates must lie in [0, 1]");
  }
  if (p.depth_noise_rel < 0 || p.depth_noise_rel >= 1) {
    throw validation_error("depth noise must lie in [0, 1)");
  }
}

struct ThingRect {
  int x = 0, y = 0, w = 0, h = 0;
  int category_id = 0;
  double depth_m = 0;
  bool overlaps(const ThingRect& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
};

/// Thing segment ids start here; stuff bands use 1..num_stuff.
constexpr std::uint32_t kThingIdBase = 1000;

void paint_rect(IdImage& ids, Image<double>& depth, const ThingRect& rect,
                std::uint32_t id) {
  for (int row = rect.y; row < rect.y + rect.h; ++row) {
    for (int col = rect.x; col < rect.x + rect.w; ++col) {
      ids.at(row, col) = id;
      depth.at(row, col) = rect.depth_m;
    }
  }
}

/// Builds a panoptic map from a painted id raster; stuff-band entries are
/// kept only when the band still owns at least one pixel.
PanopticMap assemble_map(IdImage ids, const std::vector<int>& band_categories,
                         const std::vector<ThingRect>& things,
                         const std::vector<bool>& thing_present) {
  std::unordered_set<std::uint32_t> present;
  for (std::int64_t i = 0; i < ids.pixel_count(); ++i) present.insert(ids[i]);

  std::vector<SegmentInfo> segments;
  for (std::size_t b = 0; b < band_categories.size(); ++b) {
    const std::uint32_t id = static_cast<std::uint32_t>(b + 1);
    if (present.count(id) != 0) {
      segments.push_back({id, band_categories[b], false, false});
    }
  }
  for (std::size_t k = 0; k < things.size(); ++k) {
    if (!thing_present[k]) continue;
    segments.push_back({kThingIdBase + static_cast<std::uint32_t>(k),
                        things[k].category_id, true, false});
  }
  return PanopticMap(std::move(ids), std::move(segments));
}

}  // namespace

SceneSpec scene_spec_from_json(const nlohmann::json& doc) {
  SceneSpec spec;
  try {
    spec.width = doc.value("width", spec.width);
    spec.height = doc.value("height", spec.height);
    spec.num_things = doc.value("num_things", spec.num_things);
    spec.num_stuff = doc.value("num_stuff", spec.num_stuff);
    spec.depth_min_m = doc.value("depth_min_m", spec.depth_min_m);
    spec.depth_max_m = doc.value("depth_max_m", spec.depth_max_m);
    spec.seed = doc.value("seed", spec.seed);
    if (doc.contains("perturbation")) {
      const auto& p = doc.at("perturbation");
      spec.perturbation.boundary_erosion_px =
          p.value("boundary_erosion_px", spec.perturbation.boundary_erosion_px);
      spec.perturbation.class_flip_rate =
          p.value("class_flip_rate", spec.perturbation.class_flip_rate);
      spec.perturbation.drop_rate =
          p.value("drop_rate", spec.perturbation.drop_rate);
      spec.perturbation.depth_noise_rel =
          p.value("depth_noise_rel", spec.perturbation.depth_noise_rel);
    }
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed scene spec JSON: ") + e.what());
  }
  return spec;
}

nlohmann::json to_json(const SceneSpec& spec) {
  return {{"width", spec.width},
          {"height", spec.height},
          {"num_things", spec.num_things},
          {"num_stuff", spec.num_stuff},
          {"depth_min_m", spec.depth_min_m},
          {"depth_max_m", spec.depth_max_m},
          {"seed", spec.seed},
          {"perturbation",
           {{"boundary_erosion_px", spec.perturbation.boundary_erosion_px},
            {"class_flip_rate", spec.perturbation.class_flip_rate},
            {"drop_rate", spec.perturbation.drop_rate},
            {"depth_noise_rel", spec.perturbation.depth_noise_rel}}}};
}

Scene generate_scene(const SceneSpec& spec, const ClassSet& classes) {
  validate_spec(spec);
  const std::vector<int>& thing_classes = classes.thing_ids();
  const std::vector<int>& stuff_classes = classes.stuff_ids();
  if (spec.num_things > 0 && thing_classes.empty()) {
    throw validation_error("class set has no thing classes");
  }
  if (spec.num_stuff > 0 && stuff_classes.empty()) {
    throw validation_error("class set has no stuff classes");
  }

  const int width = spec.width;
  const int height = spec.height;
  SplitMix64 rng(spec.seed);

  // --- Ground truth: horizontal stuff bands, each at a constant depth.
  std::vector<int> band_categories(static_cast<std::size_t>(spec.num_stuff));
  std::vector<double> band_depths(band_categories.size());
  for (std::size_t b = 0; b < band_categories.size(); ++b) {
    band_categories[b] =
        stuff_classes[rng.next_below(stuff_classes.size())];
    band_depths[b] = spec.depth_min_m +
                     rng.next_unit() * (spec.depth_max_m - spec.depth_min_m);
  }

  IdImage background_ids(width, height);
  Image<double> background_depth(width, height);
  MaskImage background_valid(width, height);
  if (spec.num_stuff > 0) {
    for (int row = 0; row < height; ++row) {
      const std::size_t band = static_cast<std::size_t>(
          static_cast<std::int64_t>(row) * spec.num_stuff / height);
      for (int col = 0; col < width; ++col) {
        background_ids.at(row, col) = static_cast<std::uint32_t>(band + 1);
        background_depth.at(row, col) = band_depths[band];
        background_valid.at(row, col) = 1;
      }
    }
  }

  // --- Non-overlapping thing rectangles, constant depth each.
  std::vector<ThingRect> things;
  things.reserve(static_cast<std::size_t>(spec.num_things));
  const int max_w = std::max(4, width / 4);
  const int max_h = std::max(4, height / 4);
  for (int k = 0; k < spec.num_things; ++k) {
    ThingRect rect;
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      rect.w = 4 + static_cast<int>(rng.next_below(
                       static_cast<std::uint64_t>(max_w - 4 + 1)));
      rect.h = 4 + static_cast<int>(rng.next_below(
                       static_cast<std::uint64_t>(max_h - 4 + 1)));
      rect.x = static_cast<int>(rng.next_below(
          static_cast<std::uint64_t>(width - rect.w + 1)));
      rect.y = static_cast<int>(rng.next_below(
          static_cast<std::uint64_t>(height - rect.h + 1)));
      placed = std::none_of(things.begin(), things.end(),
                            [&](const ThingRect& t) { return t.overlaps(rect); });
    }
    if (!placed) {
      throw validation_error("cannot place " + std::to_string(spec.num_things) +
                             " non-overlapping rectangles in " +
                             std::to_string(width) + "x" +
                             std::to_string(height));
    }
    rect.category_id = thing_classes[rng.next_below(thing_classes.size())];
    rect.depth_m = spec.depth_min_m +
                   rng.next_unit() * (spec.depth_max_m - spec.depth_min_m);
    things.push_back(rect);
  }

  IdImage gt_ids = background_ids;
  Image<double> gt_depth_values = background_depth;
  MaskImage gt_valid = background_valid;
  for (std::size_t k = 0; k < things.size(); ++k) {
    paint_rect(gt_ids, gt_depth_values, things[k],
               kThingIdBase + static_cast<std::uint32_t>(k));
    // Thing pixels always carry a depth, even over a void background.
    for (int row = things[k].y; row < things[k].y + things[k].h; ++row) {
      for (int col = things[k].x; col < things[k].x + things[k].w; ++col) {
        gt_valid.at(row, col) = 1;
      }
    }
  }

  // --- Prediction: erode, flip, drop, then depth noise.
  const Perturbation& pert = spec.perturbation;
  std::vector<ThingRect> pred_things(things);
  std::vector<bool> pred_present(things.size(), false);
  for (std::size_t k = 0; k < things.size(); ++k) {
    // All three draws happen for every thing, so one thing's outcome never
    // shifts the stream consumed by the next.
    const bool dropped = rng.next_unit() < pert.drop_rate;
    const bool flipped = rng.next_unit() < pert.class_flip_rate;
    const std::size_t flip_target = rng.next_below(thing_classes.size());

    ThingRect& rect = pred_things[k];
    rect.x += pert.boundary_erosion_px;
    rect.y += pert.boundary_erosion_px;
    rect.w -= 2 * pert.boundary_erosion_px;
    rect.h -= 2 * pert.boundary_erosion_px;
    if (flipped) rect.category_id = thing_classes[flip_target];
    pred_present[k] = !dropped && rect.w > 0 && rect.h > 0;
  }

  IdImage pred_ids = background_ids;
  Image<double> pred_depth_values = background_depth;
  MaskImage pred_valid = background_valid;
  for (std::size_t k = 0; k < pred_things.size(); ++k) {
    if (!pred_present[k]) continue;
    paint_rect(pred_ids, pred_depth_values, pred_things[k],
               kThingIdBase + static_cast<std::uint32_t>(k));
    for (int row = pred_things[k].y; row < pred_things[k].y + pred_things[k].h;
         ++row) {
      for (int col = pred_things[k].x;
           col < pred_things[k].x + pred_things[k].w; ++col) {
        pred_valid.at(row, col) = 1;
      }
    }
  }
  if (pert.depth_noise_rel > 0) {
    for (std::int64_t i = 0; i < pred_depth_values.pixel_count(); ++i) {
      if (pred_valid[i] == 0) continue;
      const double eps = (2.0 * rng.next_unit() - 1.0) * pert.depth_noise_rel;
      pred_depth_values[i] *= 1.0 + eps;
    }
  }

  Scene scene;
  scene.gt = assemble_map(std::move(gt_ids), band_categories, things,
                          std::vector<bool>(things.size(), true));
  scene.gt_depth = DepthMap(std::move(gt_depth_values), std::move(gt_valid));
  scene.pred = assemble_map(std::move(pred_ids), band_categories, pred_things,
                            pred_present);
  scene.pred_depth =
      DepthMap(std::move(pred_depth_values), std::move(pred_valid));
  return scene;
}

namespace {

/// Pixel-literal IoU with the ignore rules: ignored pixels leave both the
/// intersection and the union.
double oracle_iou(const PanopticMap& gt, std::uint32_t gt_id,
                  const PanopticMap& pred, std::uint32_t pred_id,
                  const std::vector<char>& ignored) {
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  for (std::int64_t i = 0; i < gt.ids().pixel_count(); ++i) {
    if (ignored[static_cast<std::size_t>(i)] != 0) continue;
    const bool a = gt.ids()[i] == gt_id;
    const bool b = pred.ids()[i] == pred_id;
    if (a && b) ++inter;
    if (a || b) ++uni;
  }
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

}  // namespace

MatchResult oracle_match(const PanopticMap& gt, const PanopticMap& pred,
                         const ClassSet& classes) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw validation_error("dimension mismatch between gt and pred");
  }
  for (const auto& seg : gt.segments()) classes.at(seg.category_id);
  for (const auto& seg : pred.segments()) classes.at(seg.category_id);

  // Ignore mask rebuilt from scratch: gt void plus gt crowd pixels.
  std::vector<char> ignored(static_cast<std::size_t>(gt.ids().pixel_count()),
                            0);
  for (std::int64_t i = 0; i < gt.ids().pixel_count(); ++i) {
    const std::uint32_t id = gt.ids()[i];
    bool crowd = false;
    for (const auto& seg : gt.segments()) {
      if (seg.id == id && seg.is_crowd) crowd = true;
    }
    if (id == PanopticMap::kVoidId || crowd) {
      ignored[static_cast<std::size_t>(i)] = 1;
    }
  }

  // Every same-class pair, scored independently.
  std::vector<MatchedPair> pairs;
  for (const auto& gt_seg : gt.segments()) {
    if (gt_seg.is_crowd) continue;
    for (const auto& pred_seg : pred.segments()) {
      if (pred_seg.category_id != gt_seg.category_id) continue;
      const double iou = oracle_iou(gt, gt_seg.id, pred, pred_seg.id, ignored);
      if (iou > 0.5) pairs.push_back({gt_seg.id, pred_seg.id, iou});
    }
  }

  // The strict threshold must have produced a one-to-one pairing.
  std::unordered_set<std::uint32_t> gt_used;
  std::unordered_set<std::uint32_t> pred_used;
  for (const MatchedPair& pair : pairs) {
    if (!gt_used.insert(pair.gt_id).second ||
        !pred_used.insert(pair.pred_id).second) {
      throw std::logic_error(
          "oracle: IoU > 0.5 produced a non-unique matching");
    }
  }

  MatchResult result;
  for (const auto& gt_seg : gt.segments()) {
    if (gt_seg.is_crowd) continue;
    ClassMatches& cls = result.by_class[gt_seg.category_id];
    bool matched = false;
    for (const MatchedPair& pair : pairs) {
      if (pair.gt_id == gt_seg.id) {
        cls.matched.push_back(pair);
        matched = true;
      }
    }
    if (!matched) cls.unmatched_gt.push_back(gt_seg.id);
  }
  for (const auto& pred_seg : pred.segments()) {
    if (pred_used.count(pred_seg.id) != 0) continue;
    ClassMatches& cls = result.by_class[pred_seg.category_id];
    std::int64_t overlap = 0;
    for (std::int64_t i = 0; i < pred.ids().pixel_count(); ++i) {
      if (pred.ids()[i] == pred_seg.id &&
          ignored[static_cast<std::size_t>(i)] != 0) {
        ++overlap;
      }
    }
    if (2 * overlap > pred.area(pred_seg.id)) {
      cls.discarded_pred.push_back(pred_seg.id);
    } else {
      cls.unmatched_pred.push_back(pred_seg.id);
    }
  }
  return result;
}

DepthReport oracle_depth_report(const DepthMap& pred, const DepthMap& gt) {
  if (!pred.same_size(gt)) {
    throw validation_error("dimension mismatch between pred and gt");
  }
  const std::int64_t total = gt.pixel_count();
  std::int64_t n = 0;
  std::int64_t gt_valid = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (gt.is_valid(i)) ++gt_valid;
    if (gt.is_valid(i) && pred.is_valid(i)) ++n;
  }
  if (n == 0) throw validation_error("no jointly valid pixels");
  const double dn = static_cast<double>(n);

  DepthReport report;
  report.n = n;
  report.coverage = dn / static_cast<double>(gt_valid);

  // One literal pass per field.
  double acc = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (!(gt.is_valid(i) && pred.is_valid(i))) continue;
    const double r = (pred.value(i) - gt.value(i)) / gt.value(i);
    acc += r * r;
  }
  report.sq_err = acc / dn;

  acc = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (!(gt.is_valid(i) && pred.is_valid(i))) continue;
    acc += std::abs((pred.value(i) - gt.value(i)) / gt.value(i));
  }
  report.abs_err = acc / dn;

  acc = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (!(gt.is_valid(i) && pred.is_valid(i))) continue;
    const double inv = 1.0 / pred.value(i) - 1.0 / gt.value(i);
    acc += inv * inv;
  }
  report.irmse = 1000.0 * std::sqrt(acc / dn);

  double sum_x = 0;
  double sum_x2 = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (!(gt.is_valid(i) && pred.is_valid(i))) continue;
    const double x = std::log(gt.value(i)) - std::log(pred.value(i));
    sum_x += x;
    sum_x2 += x * x;
  }
  report.silog = 100.0 * (sum_x2 / dn - (sum_x * sum_x) / (dn * dn));

  for (std::size_t k = 0; k < kDeltaThresholds.size(); ++k) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < total; ++i) {
      if (!(gt.is_valid(i) && pred.is_valid(i))) continue;
      const double ratio = std::max(gt.value(i) / pred.value(i),
                                    pred.value(i) / gt.value(i));
      if (ratio < kDeltaThresholds[k]) ++hits;
    }
    report.delta[k] = static_cast<double>(hits) / dn;
  }
  return report;
}

void write_scene(const std::filesystem::path& out_dir, const std::string& stem,
                 const Scene& scene, const SceneWriteOptions& options) {
  namespace fs = std::filesystem;
  const fs::path gt_pan_dir = out_dir / "gt_panoptic";
  const fs::path pred_pan_dir = out_dir / "pred_panoptic";
  const fs::path gt_depth_dir = out_dir / "gt_depth";
  const fs::path pred_depth_dir = out_dir / "pred_depth";
  const fs::path disparity_dir = out_dir / "disparity";
  std::error_code ec;
  for (const fs::path* dir : {&gt_pan_dir, &pred_pan_dir, &gt_depth_dir,
                              &pred_depth_dir, &disparity_dir}) {
    fs::create_directories(*dir, ec);
    if (ec) {
      throw io_error("cannot create directory " + dir->string() + ": " +
                     ec.message());
    }
  }

  write_panoptic_id16(gt_pan_dir / (stem + ".png"),
                      gt_pan_dir / (stem + ".segments.json"), scene.gt, stem);
  write_panoptic_id16(pred_pan_dir / (stem + ".png"),
                      pred_pan_dir / (stem + ".segments.json"), scene.pred,
                      stem);
  write_depth(gt_depth_dir / (stem + ".png"), scene.gt_depth);
  write_depth(pred_depth_dir / (stem + ".png"), scene.pred_depth);

  // Disparity for the gt depth, so the conversion path has real input.
  const double fb = options.focal_px * options.baseline_m;
  Image<double> disp_values(scene.gt_depth.width(), scene.gt_depth.height());
  MaskImage disp_valid(scene.gt_depth.width(), scene.gt_depth.height());
  for (std::int64_t i = 0; i < disp_values.pixel_count(); ++i) {
    if (!scene.gt_depth.is_valid(i)) continue;
    disp_values[i] = fb / scene.gt_depth.value(i);
    disp_valid[i] = 1;
  }
  write_disparity(disparity_dir / (stem + ".png"),
                  DisparityMap(std::move(disp_values), std::move(disp_valid)));
}

}  // namespace pdkit
