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
#include "pdkit/panoptic.hpp"

#include <algorithm>
#include <string>

#include "pdkit/errors.hpp"

namespace pdkit {

PanopticMap::PanopticMap(IdImage ids, std::vector<SegmentInfo> segments)
    : ids_(std::move(ids)), segments_(std::move(segments)) {
  if (ids_.empty()) {
    throw validation_error("panoptic map must have positive dimensions");
  }
  std::sort(segments_.begin(), segments_.end(),
            [](const SegmentInfo& a, const SegmentInfo& b) {
              return a.id < b.id;
            });
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const SegmentInfo& seg = segments_[i];
    if (seg.id == kVoidId) {
      throw validation_error("segment table contains the void id 0");
    }
    if (seg.is_crowd && !seg.is_thing) {
      throw validation_error("crowd segment " + std::to_string(seg.id) +
                             " must be a thing");
    }
    if (!index_.emplace(seg.id, i).second) {
      throw validation_error("duplicate segment id " + std::to_string(seg.id));
    }
  }

  areas_.assign(segments_.size(), 0);
  const int w = ids_.width();
  for (std::int64_t i = 0; i < ids_.pixel_count(); ++i) {
    const std::uint32_t id = ids_[i];
    if (id == kVoidId) continue;
    auto it = index_.find(id);
    if (it == index_.end()) {
      throw validation_error(
          "pixel id " + std::to_string(id) + " at (" +
          std::to_string(i / w) + ", " + std::to_string(i % w) +
          ") has no segment-table entry");
    }
    ++areas_[it->second];
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (areas_[i] == 0) {
      throw validation_error("segment " + std::to_string(segments_[i].id) +
                             " covers no pixel");
    }
  }
}

const SegmentInfo* PanopticMap::find_segment(std::uint32_t id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &segments_[it->second];
}

const SegmentInfo& PanopticMap::segment(std::uint32_t id) const {
  const SegmentInfo* seg = find_segment(id);
  if (seg == nullptr) {
    throw validation_error("unknown segment id " + std::to_string(id));
  }
  return *seg;
}

std::int64_t PanopticMap::area(std::uint32_t id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw validation_error("unknown segment id " + std::to_string(id));
  }
  return areas_[it->second];
}

}  // namespace pdkit
