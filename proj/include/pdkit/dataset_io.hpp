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
#ifndef PDKIT_DATASET_IO_HPP_
#define PDKIT_DATASET_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdkit/classes.hpp"
#include "pdkit/depth.hpp"
#include "pdkit/panoptic.hpp"
#include "pdkit/png_io.hpp"

namespace pdkit {

/// How segment ids are packed into the panoptic raster.
///  - id16: 16-bit grayscale PNG holding raw ids; segment sidecar required.
///  - rgb_id: 8-bit RGB PNG, id = R + 256*G + 256^2*B; sidecar required.
///  - cityscapes_instance_ids: 16-bit grayscale PNG; pixel value v >= 1000
///    encodes thing category v/1000 with instance v%1000, 0 < v < 1000 is
///    stuff category v, 0 is void. The table is synthesized, no sidecar.
enum class PanopticEncoding { id16, rgb_id, cityscapes_instance_ids };

PanopticEncoding panoptic_encoding_from_string(const std::string& name);
std::string to_string(PanopticEncoding encoding);

struct SidecarSegment {
  std::uint32_t id = 0;
  int category_id = 0;
  bool is_crowd = false;
};

/// One image's segment-table document.
struct PanopticSidecar {
  std::string image_id;
  std::vector<SidecarSegment> segments_info;
};

PanopticSidecar read_segments_json(const std::filesystem::path& path);
void write_segments_json(const std::filesystem::path& path,
                         const PanopticSidecar& sidecar);

struct PanopticDecodeOptions {
  PanopticEncoding encoding = PanopticEncoding::id16;
  /// External void label remapped to the internal void id 0.
  std::uint32_t void_label = 0;
  /// Resolves is_thing for sidecar-driven encodings and validates
  /// categories. For cityscapes_instance_ids, segments whose category is
  /// not in the set are remapped to void. May be null only for
  /// cityscapes_instance_ids.
  const ClassSet* classes = nullptr;
};

/// Decodes a panoptic raster (PNG bytes) into a validated PanopticMap.
/// The sidecar is required for id16/rgb_id and ignored otherwise.
PanopticMap decode_panoptic(std::span<const std::uint8_t> raster_bytes,
                            const PanopticSidecar* sidecar,
                            const PanopticDecodeOptions& options);

PanopticMap read_panoptic(const std::filesystem::path& raster_path,
                          const std::optional<std::filesystem::path>& sidecar_path,
                          const PanopticDecodeOptions& options);

/// Writes a PanopticMap as an id16 raster plus sidecar.
void write_panoptic_id16(const std::filesystem::path& raster_path,
                         const std::filesystem::path& sidecar_path,
                         const PanopticMap& map, const std::string& image_id);

/// Cityscapes-convention disparity PNG: stored value p > 1 means disparity
/// (p - 1) / 256; p in {0, 1} marks the pixel invalid.
DisparityMap decode_disparity(std::span<const std::uint8_t> raster_bytes);
DisparityMap read_disparity(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_disparity(const DisparityMap& disp);
void write_disparity(const std::filesystem::path& path,
                     const DisparityMap& disp);

struct DepthEncodeResult {
  std::vector<std::uint8_t> png_bytes;
  /// Pixels whose depth exceeded the representable 255.99 m and were
  /// clamped to the maximum stored value.
  std::int64_t clamped_pixels = 0;
};

/// 16-bit depth PNG at 1/256 m resolution: stored = round(depth * 256)
/// clamped to [1, 65535], 0 reserved for invalid pixels.
DepthEncodeResult encode_depth(const DepthMap& depth);
DepthMap decode_depth(std::span<const std::uint8_t> raster_bytes);
DepthMap read_depth(const std::filesystem::path& path);
/// Returns the clamped-pixel count.
std::int64_t write_depth(const std::filesystem::path& path,
                         const DepthMap& depth);

}  // namespace pdkit

#endif  // PDKIT_DATASET_IO_HPP_
