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
#include "pdkit/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"

namespace pdkit {

PanopticEncoding panoptic_encoding_from_string(const std::string& name) {
  if (name == "id16") return PanopticEncoding::id16;
  if (name == "rgb_id") return PanopticEncoding::rgb_id;
  if (name == "cityscapes" || name == "cityscapes_instance_ids") {
    return PanopticEncoding::cityscapes_instance_ids;
  }
  throw validation_error("unknown panoptic encoding: " + name);
}

std::string to_string(PanopticEncoding encoding) {
  switch (encoding) {
    case PanopticEncoding::id16:
      return "id16";
    case PanopticEncoding::rgb_id:
      return "rgb_id";
    case PanopticEncoding::cityscapes_instance_ids:
      return "cityscapes_instance_ids";
  }
  return "?";
}

PanopticSidecar read_segments_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open segments file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed segments JSON " + path.string() + ": " +
                   e.what());
  }
  PanopticSidecar sidecar;
  try {
    sidecar.image_id = doc.value("image_id", std::string{});
    for (const auto& item : doc.at("segments_info")) {
      SidecarSegment seg;
      seg.id = item.at("id").get<std::uint32_t>();
      seg.category_id = item.at("category_id").get<int>();
      const auto& crowd = item.at("iscrowd");
      seg.is_crowd = crowd.is_boolean() ? crowd.get<bool>()
                                        : crowd.get<int>() != 0;
      sidecar.segments_info.push_back(seg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw io_error("segments JSON " + path.string() + ": " + e.what());
  }
  return sidecar;
}

void write_segments_json(const std::filesystem::path& path,
                         const PanopticSidecar& sidecar) {
  nlohmann::json doc;
  doc["image_id"] = sidecar.image_id;
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : sidecar.segments_info) {
    segs.push_back({{"id", seg.id},
                    {"category_id", seg.category_id},
                    {"iscrowd", seg.is_crowd ? 1 : 0}});
  }
  doc["segments_info"] = std::move(segs);
  write_text_atomic(path, doc.dump(2) + "\n");
}

namespace {

IdImage ids_from_raster(const PngImage& png, PanopticEncoding encoding) {
  IdImage ids(png.width, png.height);
  if (encoding == PanopticEncoding::rgb_id) {
    if (png.format != PngFormat::rgb8) {
      throw io_error("rgb_id panoptic raster must be an 8-bit RGB PNG");
    }
    for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
      const Rgb px = png.rgb[i];
      ids[i] = static_cast<std::uint32_t>(px.r) + 256u * px.g + 65536u * px.b;
    }
  } else {
    if (png.format != PngFormat::gray8 && png.format != PngFormat::gray16) {
      throw io_error("panoptic id raster must be a grayscale PNG");
    }
    for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
      ids[i] = png.gray[i];
    }
  }
  return ids;
}

std::vector<SegmentInfo> table_from_sidecar(const PanopticSidecar& sidecar,
                                            const ClassSet& classes) {
  std::vector<SegmentInfo> segments;
  std::unordered_set<std::uint32_t> seen;
  segments.reserve(sidecar.segments_info.size());
  for (const auto& entry : sidecar.segments_info) {
    if (entry.id == PanopticMap::kVoidId) {
      throw validation_error("sidecar entry uses the reserved void id 0");
    }
    if (!seen.insert(entry.id).second) {
      throw validation_error("duplicate id " + std::to_string(entry.id) +
                             " in segment sidecar");
    }
    const ClassDef* def = classes.find(entry.category_id);
    if (def == nullptr) {
      throw validation_error("sidecar segment " + std::to_string(entry.id) +
                             " has unknown category " +
                             std::to_string(entry.category_id));
    }
    segments.push_back(
        {entry.id, entry.category_id, def->is_thing, entry.is_crowd});
  }
  return segments;
}

}  // namespace

PanopticMap decode_panoptic(std::span<const std::uint8_t> raster_bytes,
                            const PanopticSidecar* sidecar,
                            const PanopticDecodeOptions& options) {
  const PngImage png = decode_png(raster_bytes);
  IdImage ids = ids_from_raster(png, options.encoding);

  if (options.void_label != PanopticMap::kVoidId) {
    for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
      if (ids[i] == options.void_label) ids[i] = PanopticMap::kVoidId;
    }
  }

  std::vector<SegmentInfo> segments;
  if (options.encoding == PanopticEncoding::cityscapes_instance_ids) {
    // Table synthesized from the pixel values themselves.
    std::map<std::uint32_t, SegmentInfo> table;
    for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
      const std::uint32_t v = ids[i];
      if (v == PanopticMap::kVoidId || table.count(v) != 0) continue;
      const bool thing = v >= 1000;
      const int category = thing ? static_cast<int>(v / 1000)
                                 : static_cast<int>(v);
      table.emplace(v, SegmentInfo{v, category, thing, false});
    }
    // Categories outside the active class set (e.g. non-eval labels) are
    // remapped to void rather than rejected.
    std::unordered_set<std::uint32_t> dropped;
    for (const auto& [v, seg] : table) {
      if (options.classes != nullptr && !options.classes->contains(seg.category_id)) {
        dropped.insert(v);
      } else {
        segments.push_back(seg);
      }
    }
    if (!dropped.empty()) {
      for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
        if (dropped.count(ids[i]) != 0) ids[i] = PanopticMap::kVoidId;
      }
    }
  } else {
    if (sidecar == nullptr) {
      throw validation_error("encoding " + to_string(options.encoding) +
                             " requires a segment sidecar");
    }
    if (options.classes == nullptr) {
      throw validation_error("encoding " + to_string(options.encoding) +
                             " requires a class set to resolve thing/stuff");
    }
    segments = table_from_sidecar(*sidecar, *options.classes);
  }

  return PanopticMap(std::move(ids), std::move(segments));
}

PanopticMap read_panoptic(
    const std::filesystem::path& raster_path,
    const std::optional<std::filesystem::path>& sidecar_path,
    const PanopticDecodeOptions& options) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(raster_path);
  if (options.encoding == PanopticEncoding::cityscapes_instance_ids) {
    return decode_panoptic(bytes, nullptr, options);
  }
  if (!sidecar_path) {
    throw validation_error("panoptic raster " + raster_path.string() +
                           ": encoding " + to_string(options.encoding) +
                           " requires a segment sidecar");
  }
  const PanopticSidecar sidecar = read_segments_json(*sidecar_path);
  return decode_panoptic(bytes, &sidecar, options);
}

void write_panoptic_id16(const std::filesystem::path& raster_path,
                         const std::filesystem::path& sidecar_path,
                         const PanopticMap& map, const std::string& image_id) {
  Image<std::uint16_t> raster(map.width(), map.height());
  const IdImage& ids = map.ids();
  for (std::int64_t i = 0; i < ids.pixel_count(); ++i) {
    if (ids[i] > 0xFFFF) {
      throw validation_error("segment id " + std::to_string(ids[i]) +
                             " does not fit the id16 encoding");
    }
    raster[i] = static_cast<std::uint16_t>(ids[i]);
  }
  PanopticSidecar sidecar;
  sidecar.image_id = image_id;
  for (const auto& seg : map.segments()) {
    sidecar.segments_info.push_back({seg.id, seg.category_id, seg.is_crowd});
  }
  write_png_gray16(raster_path, raster);
  write_segments_json(sidecar_path, sidecar);
}

DisparityMap decode_disparity(std::span<const std::uint8_t> raster_bytes) {
  const PngImage png = decode_png(raster_bytes);
  if (png.format != PngFormat::gray16) {
    throw io_error("disparity raster must be a 16-bit grayscale PNG");
  }
  Image<double> values(png.width, png.height);
  MaskImage valid(png.width, png.height);
  for (std::int64_t i = 0; i < values.pixel_count(); ++i) {
    const std::uint16_t p = png.gray[i];
    if (p > 1) {
      values[i] = (p - 1) / 256.0;
      valid[i] = 1;
    }
  }
  return DisparityMap(std::move(values), std::move(valid));
}

DisparityMap read_disparity(const std::filesystem::path& path) {
  return decode_disparity(read_file_bytes(path));
}

std::vector<std::uint8_t> encode_disparity(const DisparityMap& disp) {
  Image<std::uint16_t> raster(disp.width(), disp.height());
  for (std::int64_t i = 0; i < disp.pixel_count(); ++i) {
    if (!disp.is_valid(i)) continue;
    std::int64_t s = std::llround(disp.value(i) * 256.0);
    if (s < 1) s = 1;  // keep the pixel decodable as valid
    if (s > 65534) s = 65534;
    raster[i] = static_cast<std::uint16_t>(s + 1);
  }
  return encode_png_gray16(raster);
}

void write_disparity(const std::filesystem::path& path,
                     const DisparityMap& disp) {
  write_file_atomic(path, encode_disparity(disp));
}

DepthEncodeResult encode_depth(const DepthMap& depth) {
  Image<std::uint16_t> raster(depth.width(), depth.height());
  std::int64_t clamped = 0;
  for (std::int64_t i = 0; i < depth.pixel_count(); ++i) {
    if (!depth.is_valid(i)) continue;
    std::int64_t s = std::llround(depth.value(i) * 256.0);
    if (s > 65535) {
      s = 65535;
      ++clamped;
    } else if (s < 1) {
      s = 1;  // 0 is reserved for invalid pixels
    }
    raster[i] = static_cast<std::uint16_t>(s);
  }
  return {encode_png_gray16(raster), clamped};
}

DepthMap decode_depth(std::span<const std::uint8_t> raster_bytes) {
  const PngImage png = decode_png(raster_bytes);
  if (png.format != PngFormat::gray16) {
    throw io_error("depth raster must be a 16-bit grayscale PNG");
  }
  Image<double> values(png.width, png.height);
  MaskImage valid(png.width, png.height);
  for (std::int64_t i = 0; i < values.pixel_count(); ++i) {
    const std::uint16_t p = png.gray[i];
    if (p > 0) {
      values[i] = p / 256.0;
      valid[i] = 1;
    }
  }
  return DepthMap(std::move(values), std::move(valid));
}

DepthMap read_depth(const std::filesystem::path& path) {
  return decode_depth(read_file_bytes(path));
}

std::int64_t write_depth(const std::filesystem::path& path,
                         const DepthMap& depth) {
  DepthEncodeResult encoded = encode_depth(depth);
  write_file_atomic(path, encoded.png_bytes);
  return encoded.clamped_pixels;
}

}  // namespace pdkit
