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
#ifndef PDKIT_COLORMAP_HPP_
#define PDKIT_COLORMAP_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/fusion.hpp"
#include "pdkit/image.hpp"
#include "pdkit/panoptic.hpp"

namespace pdkit {

/// Instance-depth rendering parameters. Things are colored by a red ->
/// green -> blue hue ramp over [near_m, far_m]; stuff keeps a semantic
/// palette; depth beyond the range clamps to the endpoint colors.
struct ColorMapConfig {
  double near_m = 0.0;
  double far_m = 80.0;
  std::map<int, Rgb> stuff_palette;
  Rgb undefined_depth_color{128, 128, 128};
  bool draw_boundaries = true;  // 1-px black between distinct segment ids
};

/// Config with the default depth range and the standard palette for the
/// built-in class set.
ColorMapConfig default_colormap_config();

std::map<int, Rgb> read_palette_json(const std::filesystem::path& path);
void write_palette_json(const std::filesystem::path& path,
                        const std::map<int, Rgb>& palette);

/// Hue in degrees: 0 (red) at near_m, 120 (green) at the midpoint, 240
/// (blue) at far_m, clamped outside the range. Strictly increasing in d
/// within the range.
double depth_to_hue(double depth_m, const ColorMapConfig& cfg);

/// Exact HSV->RGB at saturation = value = 1, rounded to 8-bit channels.
Rgb depth_to_color(double depth_m, const ColorMapConfig& cfg);

/// Per-thing-segment label payload; placement is left to consumers.
struct Annotation {
  std::uint32_t segment_id = 0;
  std::string category;
  std::optional<double> depth_m;
  double centroid_row = 0;
  double centroid_col = 0;
};

struct RenderResult {
  RgbImage raster;
  std::vector<Annotation> annotations;  // thing segments, ascending id
};

/// Paints thing pixels by their segment's mean depth, stuff pixels by
/// the semantic palette, void black. Records must cover every segment
/// of the map. Deterministic: identical inputs give identical bytes.
RenderResult render(const PanopticMap& pan,
                    std::span<const InstanceDepthRecord> records,
                    const ColorMapConfig& cfg, const ClassSet& classes);
RenderResult render_serial(const PanopticMap& pan,
                           std::span<const InstanceDepthRecord> records,
                           const ColorMapConfig& cfg, const ClassSet& classes);

nlohmann::json annotations_to_json(std::span<const Annotation> annotations);

}  // namespace pdkit

#endif  // PDKIT_COLORMAP_HPP_
