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
#ifndef PDKIT_PARALLEL_HPP_
#define PDKIT_PARALLEL_HPP_

#include <cstdint>
#include <vector>

namespace pdkit {

/// Half-open range of row-major pixel indices.
struct TileRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

/// Rows per reduction tile. Tile boundaries depend only on the image
/// size, never on the thread count, so per-tile partial results merge in
/// a fixed order and parallel reductions are reproducible under any
/// OMP_NUM_THREADS / --jobs setting.
inline constexpr int kTileRows = 64;

inline std::vector<TileRange> row_tiles(int width, int height) {
  std::vector<TileRange> tiles;
  for (int row = 0; row < height; row += kTileRows) {
    const int rows = row + kTileRows <= height ? kTileRows : height - row;
    tiles.push_back({static_cast<std::int64_t>(row) * width,
                     (static_cast<std::int64_t>(row) + rows) * width});
  }
  return tiles;
}

}  // namespace pdkit

#endif  // PDKIT_PARALLEL_HPP_
