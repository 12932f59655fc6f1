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
#include "pdkit/depth.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"
#include "pdkit/png_io.hpp"

namespace pdkit {

MaskedMap::MaskedMap(Image<double> values, MaskImage valid, const char* what)
    : values_(std::move(values)), valid_(std::move(valid)) {
  if (!values_.same_size(valid_)) {
    throw validation_error(std::string(what) +
                           " values and validity mask differ in size");
  }
  if (values_.empty()) {
    throw validation_error(std::string(what) +
                           " map must have positive dimensions");
  }
  for (std::int64_t i = 0; i < values_.pixel_count(); ++i) {
    if (valid_[i] != 0 && !(values_[i] > 0 && std::isfinite(values_[i]))) {
      throw validation_error(std::string(what) + " value at pixel " +
                             std::to_string(i) +
                             " is marked valid but not positive finite");
    }
  }
}

std::int64_t MaskedMap::valid_count() const {
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < valid_.pixel_count(); ++i) {
    if (valid_[i] != 0) ++n;
  }
  return n;
}

void MaskedMap::set(std::int64_t i, double value, bool valid) {
  if (valid && !(value > 0 && std::isfinite(value))) {
    throw validation_error("valid pixel must hold a positive finite value");
  }
  const_cast<Image<double>&>(values_)[i] = value;
  const_cast<MaskImage&>(valid_)[i] = valid ? 1 : 0;
}

StereoCamera validated(const StereoCamera& cam) {
  if (!(cam.baseline_m > 0 && std::isfinite(cam.baseline_m))) {
    throw validation_error("camera baseline_m must be positive and finite");
  }
  if (!(cam.focal_px > 0 && std::isfinite(cam.focal_px))) {
    throw validation_error("camera focal_px must be positive and finite");
  }
  return cam;
}

StereoCamera read_camera_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open camera file: " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed camera JSON " + path.string() + ": " + e.what());
  }
  StereoCamera cam;
  try {
    cam.baseline_m = doc.at("baseline_m").get<double>();
    cam.focal_px = doc.at("focal_px").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw io_error("camera JSON " + path.string() + ": " + e.what());
  }
  return validated(cam);
}

void write_camera_json(const std::filesystem::path& path,
                       const StereoCamera& cam) {
  nlohmann::json doc{{"baseline_m", cam.baseline_m},
                     {"focal_px", cam.focal_px}};
  write_text_atomic(path, doc.dump(2) + "\n");
}

DepthMap disparity_to_depth(const DisparityMap& disp,
                            const StereoCamera& cam_in) {
  const StereoCamera cam = validated(cam_in);
  const double fb = cam.focal_px * cam.baseline_m;
  Image<double> depth(disp.width(), disp.height());
  MaskImage valid(disp.width(), disp.height());
  for (std::int64_t i = 0; i < disp.pixel_count(); ++i) {
    if (disp.is_valid(i)) {
      depth[i] = fb / disp.value(i);
      valid[i] = 1;
    }
  }
  return DepthMap(std::move(depth), std::move(valid));
}

}  // namespace pdkit
