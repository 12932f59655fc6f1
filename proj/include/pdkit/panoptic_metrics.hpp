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
#ifndef PDKIT_PANOPTIC_METRICS_HPP_
#define PDKIT_PANOPTIC_METRICS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/panoptic.hpp"

namespace pdkit {

struct MatchedPair {
  std::uint32_t gt_id = 0;
  std::uint32_t pred_id = 0;
  double iou = 0;
  bool operator==(const MatchedPair&) const = default;
};

struct ClassMatches {
  std::vector<MatchedPair> matched;            // sorted by gt_id
  std::vector<std::uint32_t> unmatched_gt;     // FN, ascending
  std::vector<std::uint32_t> unmatched_pred;   // FP, ascending
  std::vector<std::uint32_t> discarded_pred;   // void-rule discards, ascending
  bool operator==(const ClassMatches&) const = default;
};

/// Per-class matching outcome for one image pair.
struct MatchResult {
  std::map<int, ClassMatches> by_class;
  bool operator==(const MatchResult&) const = default;
};

/// Ground-truth pixels excluded from scoring: void plus crowd segments.
MaskImage ignore_mask(const PanopticMap& gt);

/// |A∩B minus ignore| / |A∪B minus ignore|; 0 when the denominator is 0.
double segment_iou(const PanopticMap& gt, std::uint32_t gt_id,
                   const PanopticMap& pred, std::uint32_t pred_id,
                   const MaskImage* ignore = nullptr);

/// Matches same-category segment pairs with IoU strictly above 0.5,
/// computed against the gt ignore mask. Unmatched predictions lying more
/// than half inside the ignore mask are discarded rather than counted as
/// FP; crowd gt segments never produce FN. The strict threshold makes
/// the matching unique.
MatchResult match_segments(const PanopticMap& gt, const PanopticMap& pred,
                           const ClassSet& classes);
/// Reference single-threaded path, kept for tests and benchmarks.
MatchResult match_segments_serial(const PanopticMap& gt,
                                  const PanopticMap& pred,
                                  const ClassSet& classes);

struct ClassStats {
  double iou_sum = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  bool contributing() const { return tp + fp + fn > 0; }
};

/// Mergeable per-class count sums. Counts from any number of images may
/// be added in any order before finalizing; dataset-level scores divide
/// once at the end.
class PQAccumulator {
 public:
  void add(const MatchResult& match);
  void merge(const PQAccumulator& other);
  bool empty() const { return stats_.empty(); }
  const std::map<int, ClassStats>& stats() const { return stats_; }

 private:
  std::map<int, ClassStats> stats_;
};

struct ClassReport {
  int class_id = 0;
  std::string name;
  double iou_sum = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double pq = 0;
  double sq = 0;
  double rq = 0;
};

/// Mean of per-class scores over contributing classes. num_classes == 0
/// flags an undefined aggregate; the means are then meaningless and
/// serialized as null.
struct PQAggregate {
  double pq = 0;
  double sq = 0;
  double rq = 0;
  int num_classes = 0;
  bool defined() const { return num_classes > 0; }
};

struct PQReport {
  std::vector<ClassReport> per_class;  // ascending class id
  PQAggregate all;
  PQAggregate things;
  PQAggregate stuff;
};

PQReport finalize(const PQAccumulator& acc, const ClassSet& classes);

/// {per_class: [...], aggregate: {pq, sq, rq, num_classes}, ...} with
/// scores as fractions in [0, 1].
nlohmann::json to_json(const PQReport& report);
/// Percentage table, one row per class plus the aggregates.
std::string format_table(const PQReport& report);

}  // namespace pdkit

#endif  // PDKIT_PANOPTIC_METRICS_HPP_
