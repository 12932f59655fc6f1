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
#ifndef PDKIT_PANOPTIC_HPP_
#define PDKIT_PANOPTIC_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pdkit/image.hpp"

namespace pdkit {

struct SegmentInfo {
  std::uint32_t id = 0;
  int category_id = 0;
  bool is_thing = false;
  bool is_crowd = false;
  bool operator==(const SegmentInfo&) const = default;
};

/// Per-pixel segment ids plus the segment table. Pixel id 0 is void.
///
/// Construction validates the whole structure: every nonzero pixel id
/// must have a table entry, table ids must be nonzero and unique, no
/// table entry may be empty, and is_crowd implies is_thing.
class PanopticMap {
 public:
  static constexpr std::uint32_t kVoidId = 0;

  PanopticMap() = default;
  PanopticMap(IdImage ids, std::vector<SegmentInfo> segments);

  int width() const { return ids_.width(); }
  int height() const { return ids_.height(); }
  const IdImage& ids() const { return ids_; }
  std::uint32_t id_at(int row, int col) const { return ids_.at(row, col); }

  /// Segment table sorted by ascending id.
  const std::vector<SegmentInfo>& segments() const { return segments_; }
  const SegmentInfo* find_segment(std::uint32_t id) const;
  /// Throws validation_error for an unknown id.
  const SegmentInfo& segment(std::uint32_t id) const;
  /// Pixel count of a segment. Throws validation_error for an unknown id.
  std::int64_t area(std::uint32_t id) const;

  bool operator==(const PanopticMap& other) const {
    return ids_ == other.ids_ && segments_ == other.segments_;
  }

 private:
  IdImage ids_;
  std::vector<SegmentInfo> segments_;  // ascending id
  std::vector<std::int64_t> areas_;    // parallel to segments_
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

}  // namespace pdkit

#endif  // PDKIT_PANOPTIC_HPP_
