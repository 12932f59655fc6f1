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
#ifndef PDKIT_DEPTH_METRICS_HPP_
#define PDKIT_DEPTH_METRICS_HPP_

#include <array>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pdkit/depth.hpp"

namespace pdkit {

/// Ratio thresholds for the delta accuracies: 1.25, 1.25^2, 1.25^3.
inline constexpr std::array<double, 3> kDeltaThresholds{1.25, 1.5625,
                                                        1.953125};

/// Depth-error summary over the jointly valid pixel set S.
///   sq_err, abs_err  relative squared / absolute error (unitless)
///   irmse            inverse RMSE reported per kilometer (x1000)
///   silog            scale-invariant log error, x100 scale
///   delta            fraction of S with max(d/d*, d*/d) < t
///   n                |S|
///   coverage         n / (gt-valid pixel count)
struct DepthReport {
  double sq_err = 0;
  double abs_err = 0;
  double irmse = 0;
  double silog = 0;
  std::array<double, 3> delta{0, 0, 0};
  std::int64_t n = 0;
  double coverage = 0;
};

/// Mergeable partial sums behind every depth metric. Tiles or images may
/// be accumulated independently and merged in any order.
struct DepthAccum {
  double sum_sq_rel = 0;
  double sum_abs_rel = 0;
  double sum_inv_sq = 0;
  double sum_log = 0;     // sum of x_i = ln(gt) - ln(pred)
  double sum_log_sq = 0;  // sum of x_i^2
  std::array<std::int64_t, 3> delta_hits{0, 0, 0};
  std::int64_t n = 0;
  std::int64_t gt_valid = 0;

  void merge(const DepthAccum& other);
};

DepthAccum accumulate_depth(const DepthMap& pred, const DepthMap& gt);
DepthAccum accumulate_depth_serial(const DepthMap& pred, const DepthMap& gt);

/// Throws validation_error when the accumulator holds no pixels.
DepthReport finalize(const DepthAccum& acc);

DepthReport evaluate_depth(const DepthMap& pred, const DepthMap& gt);
DepthReport evaluate_depth_serial(const DepthMap& pred, const DepthMap& gt);

double sq_err(const DepthMap& pred, const DepthMap& gt);
double abs_err(const DepthMap& pred, const DepthMap& gt);
double irmse(const DepthMap& pred, const DepthMap& gt);
double silog(const DepthMap& pred, const DepthMap& gt);
/// Requires t > 1.
double delta(const DepthMap& pred, const DepthMap& gt, double t);

/// {sqErr, absErr, IRMSE, SILog, delta_1..3, n, coverage} plus a units
/// note for the IRMSE/SILog scalings.
nlohmann::json to_json(const DepthReport& report);
std::string format_table(const DepthReport& report);

}  // namespace pdkit

#endif  // PDKIT_DEPTH_METRICS_HPP_
