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
#ifndef PDKIT_FUSION_HPP_
#define PDKIT_FUSION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdkit/depth.hpp"
#include "pdkit/panoptic.hpp"

namespace pdkit {

/// One segment's depth summary: the instance-level depth is the mean of
/// the depth map over the segment's valid pixels. mean_depth_m is empty
/// when the segment has no valid depth pixel; it is never a sentinel.
struct InstanceDepthRecord {
  std::uint32_t segment_id = 0;
  int category_id = 0;
  bool is_thing = false;
  std::optional<double> mean_depth_m;
  std::int64_t pixel_count = 0;
  std::int64_t valid_pixel_count = 0;
  double centroid_row = 0;  // mean over ALL segment pixels
  double centroid_col = 0;
};

/// One record per segment-table entry (things and stuff alike), ordered
/// by ascending segment id.
std::vector<InstanceDepthRecord> instance_depths(const PanopticMap& pan,
                                                 const DepthMap& depth);
std::vector<InstanceDepthRecord> instance_depths_serial(
    const PanopticMap& pan, const DepthMap& depth);

nlohmann::json to_json(std::span<const InstanceDepthRecord> records);
std::vector<InstanceDepthRecord> instance_depths_from_json(
    const nlohmann::json& doc);

}  // namespace pdkit

#endif  // PDKIT_FUSION_HPP_
