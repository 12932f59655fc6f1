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
#include "pdkit/fusion.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"
#include "pdkit/parallel.hpp"

namespace pdkit {

namespace {

/// Mergeable per-segment sums. Coordinate sums stay integral, so the
/// centroid is exact no matter how pixels were partitioned; the depth sum
/// is merged in fixed tile order for reproducibility.
struct SegmentAccum {
  double depth_sum = 0;
  double depth_min = std::numeric_limits<double>::infinity();
  double depth_max = -std::numeric_limits<double>::infinity();
  std::int64_t valid = 0;
  std::int64_t pixels = 0;
  std::int64_t row_sum = 0;
  std::int64_t col_sum = 0;

  void merge(const SegmentAccum& other) {
    depth_sum += other.depth_sum;
    depth_min = std::min(depth_min, other.depth_min);
    depth_max = std::max(depth_max, other.depth_max);
    valid += other.valid;
    pixels += other.pixels;
    row_sum += other.row_sum;
    col_sum += other.col_sum;
  }
};

using AccumMap = std::unordered_map<std::uint32_t, SegmentAccum>;

void accumulate_range(const PanopticMap& pan, const DepthMap& depth,
                      std::int64_t begin, std::int64_t end, AccumMap& out) {
  const IdImage& ids = pan.ids();
  const int width = pan.width();
  for (std::int64_t i = begin; i < end; ++i) {
    const std::uint32_t id = ids[i];
    if (id == PanopticMap::kVoidId) continue;
    SegmentAccum& acc = out[id];
    ++acc.pixels;
    acc.row_sum += i / width;
    acc.col_sum += i % width;
    if (depth.is_valid(i)) {
      ++acc.valid;
      acc.depth_sum += depth.value(i);
      acc.depth_min = std::min(acc.depth_min, depth.value(i));
      acc.depth_max = std::max(acc.depth_max, depth.value(i));
    }
  }
}

std::vector<InstanceDepthRecord> records_from(const PanopticMap& pan,
                                              const AccumMap& accums) {
  std::vector<InstanceDepthRecord> records;
  records.reserve(pan.segments().size());
  for (const SegmentInfo& seg : pan.segments()) {  // ascending id
    const SegmentAccum& acc = accums.at(seg.id);   // no table entry is empty
    InstanceDepthRecord rec;
    rec.segment_id = seg.id;
    rec.category_id = seg.category_id;
    rec.is_thing = seg.is_thing;
    rec.pixel_count = acc.pixels;
    rec.valid_pixel_count = acc.valid;
    if (acc.valid > 0) {
      // The exact mean of a set lies within its range; the summed estimate
      // can drift past a bound by a few ulp over large segments, so clamp.
      rec.mean_depth_m =
          std::clamp(acc.depth_sum / static_cast<double>(acc.valid),
                     acc.depth_min, acc.depth_max);
    }
    rec.centroid_row =
        static_cast<double>(acc.row_sum) / static_cast<double>(acc.pixels);
    rec.centroid_col =
        static_cast<double>(acc.col_sum) / static_cast<double>(acc.pixels);
    records.push_back(rec);
  }
  return records;
}

void require_same_size(const PanopticMap& pan, const DepthMap& depth) {
  if (pan.width() != depth.width() || pan.height() != depth.height()) {
    throw validation_error(
        "dimension mismatch: panoptic " + std::to_string(pan.width()) + "x" +
        std::to_string(pan.height()) + " vs depth " +
        std::to_string(depth.width()) + "x" + std::to_string(depth.height()));
  }
}

}  // namespace

std::vector<InstanceDepthRecord> instance_depths(const PanopticMap& pan,
                                                 const DepthMap& depth) {
  require_same_size(pan, depth);
  const std::vector<TileRange> tiles = row_tiles(pan.width(), pan.height());
  std::vector<AccumMap> partials(tiles.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(tiles.size()); ++t) {
    accumulate_range(pan, depth, tiles[t].begin, tiles[t].end, partials[t]);
  }
  AccumMap accums;
  for (const AccumMap& partial : partials) {
    for (const auto& [id, acc] : partial) accums[id].merge(acc);
  }
  return records_from(pan, accums);
}

std::vector<InstanceDepthRecord> instance_depths_serial(const PanopticMap& pan,
                                                        const DepthMap& depth) {
  require_same_size(pan, depth);
  AccumMap accums;
  accumulate_range(pan, depth, 0, pan.ids().pixel_count(), accums);
  return records_from(pan, accums);
}

nlohmann::json to_json(std::span<const InstanceDepthRecord> records) {
  nlohmann::json doc = nlohmann::json::array();
  for (const InstanceDepthRecord& rec : records) {
    nlohmann::json item;
    item["segment_id"] = rec.segment_id;
    item["category_id"] = rec.category_id;
    item["is_thing"] = rec.is_thing;
    if (rec.mean_depth_m) {
      item["mean_depth_m"] = *rec.mean_depth_m;
    } else {
      item["mean_depth_m"] = nullptr;
    }
    item["pixel_count"] = rec.pixel_count;
    item["valid_pixel_count"] = rec.valid_pixel_count;
    item["centroid"] = {rec.centroid_row, rec.centroid_col};
    doc.push_back(std::move(item));
  }
  return doc;
}

std::vector<InstanceDepthRecord> instance_depths_from_json(
    const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw io_error("malformed instances JSON: top-level value must be an array");
  }
  std::vector<InstanceDepthRecord> records;
  try {
    for (const auto& item : doc) {
      InstanceDepthRecord rec;
      rec.segment_id = item.at("segment_id").get<std::uint32_t>();
      rec.category_id = item.at("category_id").get<int>();
      rec.is_thing = item.at("is_thing").get<bool>();
      const auto& mean = item.at("mean_depth_m");
      if (!mean.is_null()) rec.mean_depth_m = mean.get<double>();
      rec.pixel_count = item.at("pixel_count").get<std::int64_t>();
      rec.valid_pixel_count = item.at("valid_pixel_count").get<std::int64_t>();
      const auto& centroid = item.at("centroid");
      rec.centroid_row = centroid.at(0).get<double>();
      rec.centroid_col = centroid.at(1).get<double>();
      records.push_back(rec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed instances JSON: ") + e.what());
  }
  return records;
}

}  // namespace pdkit
