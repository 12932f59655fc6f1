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
#include "pdkit/panoptic_metrics.hpp"

#include <cassert>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"
#include "pdkit/parallel.hpp"

namespace pdkit {

namespace {

std::unordered_set<std::uint32_t> crowd_ids(const PanopticMap& map) {
  std::unordered_set<std::uint32_t> ids;
  for (const auto& seg : map.segments()) {
    if (seg.is_crowd) ids.insert(seg.id);
  }
  return ids;
}

void require_same_size(const PanopticMap& gt, const PanopticMap& pred) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw validation_error(
        "dimension mismatch: gt " + std::to_string(gt.width()) + "x" +
        std::to_string(gt.height()) + " vs pred " +
        std::to_string(pred.width()) + "x" + std::to_string(pred.height()));
  }
}

void require_known_categories(const PanopticMap& map, const ClassSet& classes,
                              const char* which) {
  for (const auto& seg : map.segments()) {
    if (!classes.contains(seg.category_id)) {
      throw validation_error(std::string(which) + " segment " +
                             std::to_string(seg.id) + " has category " +
                             std::to_string(seg.category_id) +
                             " outside the class set");
    }
  }
}

constexpr std::uint64_t pair_key(std::uint32_t gt_id, std::uint32_t pred_id) {
  return (std::uint64_t{gt_id} << 32) | pred_id;
}

/// Sparse per-pair pixel counts: intersections between non-ignored gt
/// segments and predictions, plus how much of each prediction falls on
/// ignored (void or crowd) ground truth. Everything the matcher needs in
/// one pixel pass.
struct PairHistogram {
  std::unordered_map<std::uint64_t, std::int64_t> intersections;
  std::unordered_map<std::uint32_t, std::int64_t> pred_ignore_overlap;

  void merge(const PairHistogram& other) {
    for (const auto& [key, count] : other.intersections) {
      intersections[key] += count;
    }
    for (const auto& [id, count] : other.pred_ignore_overlap) {
      pred_ignore_overlap[id] += count;
    }
  }
};

void accumulate_pixels(const IdImage& gt_ids, const IdImage& pred_ids,
                       const std::unordered_set<std::uint32_t>& crowd,
                       std::int64_t begin, std::int64_t end,
                       PairHistogram& out) {
  for (std::int64_t i = begin; i < end; ++i) {
    const std::uint32_t g = gt_ids[i];
    const std::uint32_t p = pred_ids[i];
    const bool ignored = g == PanopticMap::kVoidId || crowd.count(g) != 0;
    if (p == PanopticMap::kVoidId) continue;
    if (ignored) {
      ++out.pred_ignore_overlap[p];
    } else if (g != PanopticMap::kVoidId) {
      ++out.intersections[pair_key(g, p)];
    }
  }
}

std::int64_t lookup(const std::unordered_map<std::uint32_t, std::int64_t>& m,
                    std::uint32_t id) {
  const auto it = m.find(id);
  return it == m.end() ? 0 : it->second;
}

/// Turns the pixel counts into the per-class match lists. Iterates
/// segments in ascending-id order, so all output lists come out sorted.
MatchResult assemble_matches(const PanopticMap& gt, const PanopticMap& pred,
                             const PairHistogram& hist) {
  MatchResult result;

  std::map<int, std::vector<const SegmentInfo*>> preds_by_class;
  for (const auto& seg : pred.segments()) {
    preds_by_class[seg.category_id].push_back(&seg);
  }

  std::unordered_set<std::uint32_t> matched_preds;
  for (const auto& gt_seg : gt.segments()) {
    if (gt_seg.is_crowd) continue;  // ignored, never an FN
    ClassMatches& cls = result.by_class[gt_seg.category_id];
    bool matched = false;
    const auto it = preds_by_class.find(gt_seg.category_id);
    if (it != preds_by_class.end()) {
      for (const SegmentInfo* pred_seg : it->second) {
        const auto pc = hist.intersections.find(pair_key(gt_seg.id, pred_seg->id));
        if (pc == hist.intersections.end()) continue;
        const std::int64_t inter = pc->second;
        const std::int64_t pred_outside_ignore =
            pred.area(pred_seg->id) -
            lookup(hist.pred_ignore_overlap, pred_seg->id);
        const std::int64_t denom =
            gt.area(gt_seg.id) + pred_outside_ignore - inter;
        const double iou =
            denom > 0 ? static_cast<double>(inter) / static_cast<double>(denom)
                      : 0.0;
        if (iou > 0.5) {
          // Strictly-above-half overlap admits at most one partner per
          // segment on either side, so first hit is the only hit.
          const bool fresh = matched_preds.insert(pred_seg->id).second;
          assert(fresh);
          (void)fresh;
          cls.matched.push_back({gt_seg.id, pred_seg->id, iou});
          matched = true;
          break;
        }
      }
    }
    if (!matched) cls.unmatched_gt.push_back(gt_seg.id);
  }

  for (const auto& pred_seg : pred.segments()) {
    if (matched_preds.count(pred_seg.id) != 0) continue;
    ClassMatches& cls = result.by_class[pred_seg.category_id];
    const std::int64_t area = pred.area(pred_seg.id);
    const std::int64_t overlap = lookup(hist.pred_ignore_overlap, pred_seg.id);
    if (2 * overlap > area) {
      cls.discarded_pred.push_back(pred_seg.id);  // mostly void/crowd: no FP
    } else {
      cls.unmatched_pred.push_back(pred_seg.id);
    }
  }
  return result;
}

}  // namespace

MaskImage ignore_mask(const PanopticMap& gt) {
  const std::unordered_set<std::uint32_t> crowd = crowd_ids(gt);
  MaskImage mask(gt.width(), gt.height());
  const IdImage& ids = gt.ids();
  for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
    const std::uint32_t id = ids[i];
    mask[i] = (id == PanopticMap::kVoidId || crowd.count(id) != 0) ? 1 : 0;
  }
  return mask;
}

double segment_iou(const PanopticMap& gt, std::uint32_t gt_id,
                   const PanopticMap& pred, std::uint32_t pred_id,
                   const MaskImage* ignore) {
  require_same_size(gt, pred);
  gt.segment(gt_id);      // throws on unknown id
  pred.segment(pred_id);  // throws on unknown id
  if (ignore != nullptr &&
      (ignore->width() != gt.width() || ignore->height() != gt.height())) {
    throw validation_error("ignore mask dimension mismatch");
  }

  std::int64_t inter = 0;
  std::int64_t in_union = 0;
  const IdImage& gt_ids = gt.ids();
  const IdImage& pred_ids = pred.ids();
  for (std::int64_t i = 0; i < gt_ids.pixel_count(); ++i) {
    if (ignore != nullptr && (*ignore)[i] != 0) continue;
    const bool in_gt = gt_ids[i] == gt_id;
    const bool in_pred = pred_ids[i] == pred_id;
    if (in_gt && in_pred) ++inter;
    if (in_gt || in_pred) ++in_union;
  }
  return in_union > 0
             ? static_cast<double>(inter) / static_cast<double>(in_union)
             : 0.0;
}

MatchResult match_segments(const PanopticMap& gt, const PanopticMap& pred,
                           const ClassSet& classes) {
  require_same_size(gt, pred);
  require_known_categories(gt, classes, "gt");
  require_known_categories(pred, classes, "pred");

  const std::unordered_set<std::uint32_t> crowd = crowd_ids(gt);
  const std::vector<TileRange> tiles = row_tiles(gt.width(), gt.height());
  std::vector<PairHistogram> partials(tiles.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(tiles.size()); ++t) {
    accumulate_pixels(gt.ids(), pred.ids(), crowd, tiles[t].begin,
                      tiles[t].end, partials[t]);
  }
  PairHistogram hist;
  for (const PairHistogram& partial : partials) hist.merge(partial);
  return assemble_matches(gt, pred, hist);
}

MatchResult match_segments_serial(const PanopticMap& gt,
                                  const PanopticMap& pred,
                                  const ClassSet& classes) {
  require_same_size(gt, pred);
  require_known_categories(gt, classes, "gt");
  require_known_categories(pred, classes, "pred");

  const std::unordered_set<std::uint32_t> crowd = crowd_ids(gt);
  PairHistogram hist;
  accumulate_pixels(gt.ids(), pred.ids(), crowd, 0, gt.ids().pixel_count(),
                    hist);
  return assemble_matches(gt, pred, hist);
}

void PQAccumulator::add(const MatchResult& match) {
  for (const auto& [class_id, cls] : match.by_class) {
    ClassStats& s = stats_[class_id];
    for (const MatchedPair& pair : cls.matched) s.iou_sum += pair.iou;
    s.tp += static_cast<std::int64_t>(cls.matched.size());
    s.fn += static_cast<std::int64_t>(cls.unmatched_gt.size());
    s.fp += static_cast<std::int64_t>(cls.unmatched_pred.size());
  }
}

void PQAccumulator::merge(const PQAccumulator& other) {
  for (const auto& [class_id, o] : other.stats_) {
    ClassStats& s = stats_[class_id];
    s.iou_sum += o.iou_sum;
    s.tp += o.tp;
    s.fp += o.fp;
    s.fn += o.fn;
  }
}

PQReport finalize(const PQAccumulator& acc, const ClassSet& classes) {
  PQReport report;
  PQAggregate& all = report.all;
  for (const auto& [class_id, s] : acc.stats()) {
    const ClassDef* def = classes.find(class_id);
    if (def == nullptr) {
      throw validation_error("accumulated class " + std::to_string(class_id) +
                             " is not in the class set");
    }
    ClassReport row;
    row.class_id = class_id;
    row.name = def->name;
    row.iou_sum = s.iou_sum;
    row.tp = s.tp;
    row.fp = s.fp;
    row.fn = s.fn;
    if (s.tp > 0) {
      row.sq = s.iou_sum / static_cast<double>(s.tp);
      row.rq = static_cast<double>(s.tp) /
               (static_cast<double>(s.tp) + 0.5 * static_cast<double>(s.fp) +
                0.5 * static_cast<double>(s.fn));
      row.pq = row.sq * row.rq;
    }
    report.per_class.push_back(row);  // map order: ascending class id

    if (!s.contributing()) continue;  // tp = fp = fn = 0: not in the means
    PQAggregate& group = def->is_thing ? report.things : report.stuff;
    for (PQAggregate* agg : {&all, &group}) {
      agg->pq += row.pq;
      agg->sq += row.sq;
      agg->rq += row.rq;
      ++agg->num_classes;
    }
  }
  for (PQAggregate* agg : {&report.all, &report.things, &report.stuff}) {
    if (agg->num_classes == 0) continue;
    agg->pq /= agg->num_classes;
    agg->sq /= agg->num_classes;
    agg->rq /= agg->num_classes;
  }
  return report;
}

namespace {

nlohmann::json aggregate_json(const PQAggregate& agg) {
  nlohmann::json doc;
  doc["num_classes"] = agg.num_classes;
  if (agg.defined()) {
    doc["pq"] = agg.pq;
    doc["sq"] = agg.sq;
    doc["rq"] = agg.rq;
  } else {
    doc["pq"] = nullptr;
    doc["sq"] = nullptr;
    doc["rq"] = nullptr;
  }
  return doc;
}

}  // namespace

nlohmann::json to_json(const PQReport& report) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const ClassReport& row : report.per_class) {
    per_class.push_back({{"class_id", row.class_id},
                         {"name", row.name},
                         {"iou_sum", row.iou_sum},
                         {"tp", row.tp},
                         {"fp", row.fp},
                         {"fn", row.fn},
                         {"pq", row.pq},
                         {"sq", row.sq},
                         {"rq", row.rq}});
  }
  nlohmann::json doc;
  doc["per_class"] = std::move(per_class);
  doc["aggregate"] = aggregate_json(report.all);
  doc["things"] = aggregate_json(report.things);
  doc["stuff"] = aggregate_json(report.stuff);
  return doc;
}

std::string format_table(const PQReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-18s %7s %7s %7s %6s %6s %6s\n",
                "class", "PQ", "SQ", "RQ", "TP", "FP", "FN");
  out += line;
  for (const ClassReport& row : report.per_class) {
    std::snprintf(line, sizeof(line),
                  "%-18s %7.1f %7.1f %7.1f %6lld %6lld %6lld\n",
                  row.name.c_str(), 100.0 * row.pq, 100.0 * row.sq,
                  100.0 * row.rq, static_cast<long long>(row.tp),
                  static_cast<long long>(row.fp),
                  static_cast<long long>(row.fn));
    out += line;
  }
  const struct {
    const char* label;
    const PQAggregate& agg;
  } groups[] = {{"all", report.all},
                {"things", report.things},
                {"stuff", report.stuff}};
  for (const auto& [label, agg] : groups) {
    std::string name = std::string(label) + " (" +
                       std::to_string(agg.num_classes) + ")";
    if (agg.defined()) {
      std::snprintf(line, sizeof(line), "%-18s %7.1f %7.1f %7.1f\n",
                    name.c_str(), 100.0 * agg.pq, 100.0 * agg.sq,
                    100.0 * agg.rq);
    } else {
      std::snprintf(line, sizeof(line), "%-18s %7s %7s %7s\n", name.c_str(),
                    "-", "-", "-");
    }
    out += line;
  }
  return out;
}

}  // namespace pdkit
