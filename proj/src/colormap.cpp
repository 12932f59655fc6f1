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
#include "pdkit/colormap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"
#include "pdkit/parallel.hpp"
#include "pdkit/png_io.hpp"

namespace pdkit {

namespace {

void require_range(const ColorMapConfig& cfg) {
  if (!(cfg.near_m < cfg.far_m)) {
    throw validation_error("colormap range requires near_m < far_m");
  }
}

}  // namespace

ColorMapConfig default_colormap_config() {
  ColorMapConfig cfg;
  // The conventional colors for the built-in street-scene stuff classes.
  cfg.stuff_palette = {
      {7, {128, 64, 128}},   // road
      {8, {244, 35, 232}},   // sidewalk
      {11, {70, 70, 70}},    // building
      {12, {102, 102, 156}}, // wall
      {13, {190, 153, 153}}, // fence
      {17, {153, 153, 153}}, // pole
      {19, {250, 170, 30}},  // traffic light
      {20, {220, 220, 0}},   // traffic sign
      {21, {107, 142, 35}},  // vegetation
      {22, {152, 251, 152}}, // terrain
      {23, {70, 130, 180}},  // sky
  };
  return cfg;
}

std::map<int, Rgb> read_palette_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open palette file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed palette JSON " + path.string() + ": " +
                   e.what());
  }
  std::map<int, Rgb> palette;
  try {
    for (const auto& [key, value] : doc.items()) {
      const int category = std::stoi(key);
      Rgb color{value.at(0).get<std::uint8_t>(),
                value.at(1).get<std::uint8_t>(),
                value.at(2).get<std::uint8_t>()};
      palette[category] = color;
    }
  } catch (const std::exception& e) {
    throw io_error("palette JSON " + path.string() + ": " + e.what());
  }
  return palette;
}

void write_palette_json(const std::filesystem::path& path,
                        const std::map<int, Rgb>& palette) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [category, color] : palette) {
    doc[std::to_string(category)] = {color.r, color.g, color.b};
  }
  write_text_atomic(path, doc.dump(2) + "\n");
}

double depth_to_hue(double depth_m, const ColorMapConfig& cfg) {
  require_range(cfg);
  const double t =
      std::clamp((depth_m - cfg.near_m) / (cfg.far_m - cfg.near_m), 0.0, 1.0);
  return 240.0 * t;
}

Rgb depth_to_color(double depth_m, const ColorMapConfig& cfg) {
  const double hue = depth_to_hue(depth_m, cfg);
  // HSV -> RGB at saturation = value = 1: chroma 1, one channel ramps by
  // x = 1 - |(h/60 mod 2) - 1| within each 60-degree sector.
  const double x = 1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  if (hue < 60.0) {
    r = 1.0;
    g = x;
  } else if (hue < 120.0) {
    r = x;
    g = 1.0;
  } else if (hue < 180.0) {
    g = 1.0;
    b = x;
  } else {
    g = x;
    b = 1.0;
  }
  const auto to_byte = [](double channel) {
    return static_cast<std::uint8_t>(std::lround(255.0 * channel));
  };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

namespace {

RenderResult render_impl(const PanopticMap& pan,
                         std::span<const InstanceDepthRecord> records,
                         const ColorMapConfig& cfg, const ClassSet& classes,
                         bool parallel) {
  require_range(cfg);
  for (const int category : classes.stuff_ids()) {
    if (cfg.stuff_palette.count(category) == 0) {
      throw validation_error("palette has no entry for stuff category " +
                             std::to_string(category));
    }
  }

  std::unordered_map<std::uint32_t, const InstanceDepthRecord*> by_id;
  by_id.reserve(records.size());
  for (const InstanceDepthRecord& rec : records) by_id[rec.segment_id] = &rec;

  // One color per segment, resolved up front.
  std::unordered_map<std::uint32_t, Rgb> color_of;
  color_of.reserve(pan.segments().size());
  for (const SegmentInfo& seg : pan.segments()) {
    const auto it = by_id.find(seg.id);
    if (it == by_id.end()) {
      throw validation_error("record set is missing segment " +
                             std::to_string(seg.id));
    }
    const InstanceDepthRecord& rec = *it->second;
    Rgb color;
    if (seg.is_thing) {
      color = rec.mean_depth_m ? depth_to_color(*rec.mean_depth_m, cfg)
                               : cfg.undefined_depth_color;
    } else {
      const auto palette_it = cfg.stuff_palette.find(seg.category_id);
      if (palette_it == cfg.stuff_palette.end()) {
        throw validation_error("palette has no entry for stuff category " +
                               std::to_string(seg.category_id));
      }
      color = palette_it->second;
    }
    color_of.emplace(seg.id, color);
  }

  const IdImage& ids = pan.ids();
  const int width = pan.width();
  const int height = pan.height();
  RenderResult result;
  result.raster = RgbImage(width, height, Rgb{0, 0, 0});

  const auto paint_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const std::uint32_t id = ids[i];
      const int row = static_cast<int>(i / width);
      const int col = static_cast<int>(i % width);
      if (cfg.draw_boundaries) {
        const bool edge =
            (col + 1 < width && ids[i + 1] != id) ||
            (row + 1 < height && ids[i + width] != id);
        if (edge) continue;  // stays black
      }
      if (id == PanopticMap::kVoidId) continue;  // void stays black
      result.raster[i] = color_of.at(id);
    }
  };

  const std::vector<TileRange> tiles = row_tiles(width, height);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tiles.size());
         ++t) {
      paint_range(tiles[t].begin, tiles[t].end);
    }
  } else {
    paint_range(0, ids.pixel_count());
  }

  for (const SegmentInfo& seg : pan.segments()) {  // ascending id
    if (!seg.is_thing) continue;
    const InstanceDepthRecord& rec = *by_id.at(seg.id);
    Annotation ann;
    ann.segment_id = seg.id;
    ann.category = classes.at(seg.category_id).name;
    ann.depth_m = rec.mean_depth_m;
    ann.centroid_row = rec.centroid_row;
    ann.centroid_col = rec.centroid_col;
    result.annotations.push_back(std::move(ann));
  }
  return result;
}

}  // namespace

RenderResult render(const PanopticMap& pan,
                    std::span<const InstanceDepthRecord> records,
                    const ColorMapConfig& cfg, const ClassSet& classes) {
  return render_impl(pan, records, cfg, classes, /*parallel=*/true);
}

RenderResult render_serial(const PanopticMap& pan,
                           std::span<const InstanceDepthRecord> records,
                           const ColorMapConfig& cfg, const ClassSet& classes) {
  return render_impl(pan, records, cfg, classes, /*parallel=*/false);
}

nlohmann::json annotations_to_json(std::span<const Annotation> annotations) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Annotation& ann : annotations) {
    nlohmann::json item;
    item["segment_id"] = ann.segment_id;
    item["category"] = ann.category;
    if (ann.depth_m) {
      item["depth_m"] = *ann.depth_m;
    } else {
      item["depth_m"] = nullptr;
    }
    item["centroid"] = {ann.centroid_row, ann.centroid_col};
    doc.push_back(std::move(item));
  }
  return doc;
}

}  // namespace pdkit
