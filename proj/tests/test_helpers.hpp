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
#ifndef PDKIT_TESTS_TEST_HELPERS_HPP_
#define PDKIT_TESTS_TEST_HELPERS_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pdkit/classes.hpp"
#include "pdkit/depth.hpp"
#include "pdkit/image.hpp"
#include "pdkit/panoptic.hpp"

namespace pdkit::test {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = base / ("pdkit_test_" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

/// Three-class set used across tests: one stuff, two things.
inline ClassSet small_classes() {
  return ClassSet({{1, "ground", false}, {2, "box", true}, {3, "ball", true}});
}

/// Map from a literal id raster and table.
inline PanopticMap make_map(int width, int height,
                            std::vector<std::uint32_t> ids,
                            std::vector<SegmentInfo> segments) {
  return PanopticMap(IdImage(width, height, std::move(ids)),
                     std::move(segments));
}

/// Depth map from literal values; value 0 marks an invalid pixel.
inline DepthMap make_depth(int width, int height, std::vector<double> values) {
  MaskImage valid(width, height);
  for (std::int64_t i = 0; i < valid.pixel_count(); ++i) {
    valid[i] = values[static_cast<std::size_t>(i)] > 0 ? 1 : 0;
  }
  return DepthMap(Image<double>(width, height, std::move(values)),
                  std::move(valid));
}

/// Uniform-depth map.
inline DepthMap flat_depth(int width, int height, double value) {
  return DepthMap(Image<double>(width, height, value),
                  MaskImage(width, height, 1));
}

}  // namespace pdkit::test

#endif  // PDKIT_TESTS_TEST_HELPERS_HPP_
