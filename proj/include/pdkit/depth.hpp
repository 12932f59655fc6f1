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
#ifndef PDKIT_DEPTH_HPP_
#define PDKIT_DEPTH_HPP_

#include <cstdint>
#include <filesystem>

#include "pdkit/image.hpp"

namespace pdkit {

/// Per-pixel real values with a validity mask. Valid pixels must hold a
/// finite, strictly positive value; invalid pixels may hold anything and
/// are never read by consumers.
class MaskedMap {
 public:
  MaskedMap() = default;
  MaskedMap(Image<double> values, MaskImage valid, const char* what);

  int width() const { return values_.width(); }
  int height() const { return values_.height(); }
  std::int64_t pixel_count() const { return values_.pixel_count(); }

  double value(std::int64_t i) const { return values_[i]; }
  double value_at(int row, int col) const { return values_.at(row, col); }
  bool is_valid(std::int64_t i) const { return valid_[i] != 0; }
  bool is_valid_at(int row, int col) const { return valid_.at(row, col) != 0; }

  const Image<double>& values() const { return values_; }
  const MaskImage& valid() const { return valid_; }
  std::int64_t valid_count() const;

  /// Mutators for perturbation-style workflows; the invariant is re-checked
  /// for valid pixels.
  void set(std::int64_t i, double value, bool valid);

  template <typename U>
  bool same_size(const Image<U>& img) const {
    return values_.same_size(img);
  }
  bool same_size(const MaskedMap& other) const {
    return values_.same_size(other.values_);
  }

 private:
  Image<double> values_;
  MaskImage valid_;
};

/// Disparity in pixels.
class DisparityMap : public MaskedMap {
 public:
  DisparityMap() = default;
  DisparityMap(Image<double> values, MaskImage valid)
      : MaskedMap(std::move(values), std::move(valid), "disparity") {}
};

/// Depth in meters.
class DepthMap : public MaskedMap {
 public:
  DepthMap() = default;
  DepthMap(Image<double> values, MaskImage valid)
      : MaskedMap(std::move(values), std::move(valid), "depth") {}
};

/// Rectified stereo pair geometry: depth = focal_px * baseline_m / disparity.
struct StereoCamera {
  double baseline_m = 0;
  double focal_px = 0;
};

StereoCamera validated(const StereoCamera& cam);
StereoCamera read_camera_json(const std::filesystem::path& path);
void write_camera_json(const std::filesystem::path& path,
                       const StereoCamera& cam);

/// Per-pixel pinhole-stereo conversion. The output validity mask equals
/// the input mask; invalid pixels carry value 0.
DepthMap disparity_to_depth(const DisparityMap& disp, const StereoCamera& cam);

}  // namespace pdkit

#endif  // PDKIT_DEPTH_HPP_
