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
#ifndef PDKIT_SYNTH_HPP_
#define PDKIT_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/depth.hpp"
#include "pdkit/depth_metrics.hpp"
#include "pdkit/panoptic.hpp"
#include "pdkit/panoptic_metrics.hpp"

namespace pdkit {

/// SplitMix64: the fixed pseudo-random generator behind scene synthesis.
/// state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
/// z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31.
/// Pure 64-bit integer mixing, so identical seeds reproduce identical
/// scenes on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive. Plain modulo: the
  /// bias is irrelevant at synthesis scales and keeps the stream simple
  /// to reproduce in other languages.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

struct Perturbation {
  int boundary_erosion_px = 0;
  double class_flip_rate = 0;   // in [0, 1]
  double drop_rate = 0;         // in [0, 1]
  double depth_noise_rel = 0;   // in [0, 1)
};

struct SceneSpec {
  int width = 64;
  int height = 64;
  int num_things = 3;
  int num_stuff = 2;
  double depth_min_m = 2.0;
  double depth_max_m = 80.0;
  Perturbation perturbation;
  std::uint64_t seed = 0;
};

SceneSpec scene_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SceneSpec& spec);

struct Scene {
  PanopticMap gt;
  DepthMap gt_depth;
  PanopticMap pred;
  DepthMap pred_depth;
};

/// Builds a ground-truth scene of non-overlapping thing rectangles over
/// horizontal stuff bands, each segment at a constant depth, then derives
/// the prediction by eroding thing boundaries, flipping thing classes,
/// dropping things, and applying relative per-pixel depth noise.
/// Identical (spec, classes) inputs give byte-identical outputs.
Scene generate_scene(const SceneSpec& spec, const ClassSet& classes);

/// Exhaustive-matching reference: enumerates all same-class (gt, pred)
/// pairs with literal pixel-count loops, keeps IoU > 0.5, and asserts the
/// result is a unique matching. Shares no code with match_segments.
/// Intended for small inputs; no performance contract.
MatchResult oracle_match(const PanopticMap& gt, const PanopticMap& pred,
                         const ClassSet& classes);

/// Literal per-formula reference for the depth metrics: one independent
/// pass per reported field. Shares no code with evaluate_depth.
DepthReport oracle_depth_report(const DepthMap& pred, const DepthMap& gt);

/// Scene files on disk, in the dataset formats (id16 panoptic + sidecar,
/// 16-bit depth and disparity PNGs, camera/classes JSON).
struct SceneWriteOptions {
  double baseline_m = 0.209313;
  double focal_px = 2262.52;
};

void write_scene(const std::filesystem::path& out_dir, const std::string& stem,
                 const Scene& scene, const SceneWriteOptions& options);

}  // namespace pdkit

#endif  // PDKIT_SYNTH_HPP_
