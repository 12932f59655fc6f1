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
#include "pdkit/depth_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"
#include "pdkit/parallel.hpp"

namespace pdkit {

namespace {

void require_same_size(const DepthMap& pred, const DepthMap& gt) {
  if (!pred.same_size(gt)) {
    throw validation_error(
        "dimension mismatch: pred " + std::to_string(pred.width()) + "x" +
        std::to_string(pred.height()) + " vs gt " + std::to_string(gt.width()) +
        "x" + std::to_string(gt.height()));
  }
}

void accumulate_range(const DepthMap& pred, const DepthMap& gt,
                      std::int64_t begin, std::int64_t end, DepthAccum& out) {
  for (std::int64_t i = begin; i < end; ++i) {
    if (!gt.is_valid(i)) continue;
    ++out.gt_valid;
    if (!pred.is_valid(i)) continue;
    const double d = gt.value(i);
    const double d_pred = pred.value(i);
    const double rel = (d_pred - d) / d;
    out.sum_sq_rel += rel * rel;
    out.sum_abs_rel += std::abs(rel);
    const double inv_diff = 1.0 / d_pred - 1.0 / d;
    out.sum_inv_sq += inv_diff * inv_diff;
    const double x = std::log(d) - std::log(d_pred);
    out.sum_log += x;
    out.sum_log_sq += x * x;
    const double ratio = std::max(d / d_pred, d_pred / d);
    for (std::size_t k = 0; k < kDeltaThresholds.size(); ++k) {
      if (ratio < kDeltaThresholds[k]) ++out.delta_hits[k];
    }
    ++out.n;
  }
}

}  // namespace

void DepthAccum::merge(const DepthAccum& other) {
  sum_sq_rel += other.sum_sq_rel;
  sum_abs_rel += other.sum_abs_rel;
  sum_inv_sq += other.sum_inv_sq;
  sum_log += other.sum_log;
  sum_log_sq += other.sum_log_sq;
  for (std::size_t k = 0; k < delta_hits.size(); ++k) {
    delta_hits[k] += other.delta_hits[k];
  }
  n += other.n;
  gt_valid += other.gt_valid;
}

DepthAccum accumulate_depth(const DepthMap& pred, const DepthMap& gt) {
  require_same_size(pred, gt);
  const std::vector<TileRange> tiles = row_tiles(gt.width(), gt.height());
  std::vector<DepthAccum> partials(tiles.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(tiles.size()); ++t) {
    accumulate_range(pred, gt, tiles[t].begin, tiles[t].end, partials[t]);
  }
  DepthAccum acc;
  for (const DepthAccum& partial : partials) acc.merge(partial);
  return acc;
}

DepthAccum accumulate_depth_serial(const DepthMap& pred, const DepthMap& gt) {
  require_same_size(pred, gt);
  DepthAccum acc;
  accumulate_range(pred, gt, 0, gt.pixel_count(), acc);
  return acc;
}

DepthReport finalize(const DepthAccum& acc) {
  if (acc.n == 0) throw validation_error("no jointly valid pixels");
  const double n = static_cast<double>(acc.n);
  DepthReport report;
  report.sq_err = acc.sum_sq_rel / n;
  report.abs_err = acc.sum_abs_rel / n;
  report.irmse = 1000.0 * std::sqrt(acc.sum_inv_sq / n);
  const double mean_x = acc.sum_log / n;
  // Variance form; clamp the rounding residue so equality gives exact 0.
  report.silog = 100.0 * std::max(0.0, acc.sum_log_sq / n - mean_x * mean_x);
  for (std::size_t k = 0; k < kDeltaThresholds.size(); ++k) {
    report.delta[k] = static_cast<double>(acc.delta_hits[k]) / n;
  }
  report.n = acc.n;
  report.coverage =
      acc.gt_valid > 0 ? n / static_cast<double>(acc.gt_valid) : 0.0;
  return report;
}

DepthReport evaluate_depth(const DepthMap& pred, const DepthMap& gt) {
  return finalize(accumulate_depth(pred, gt));
}

DepthReport evaluate_depth_serial(const DepthMap& pred, const DepthMap& gt) {
  return finalize(accumulate_depth_serial(pred, gt));
}

double sq_err(const DepthMap& pred, const DepthMap& gt) {
  return evaluate_depth(pred, gt).sq_err;
}

double abs_err(const DepthMap& pred, const DepthMap& gt) {
  return evaluate_depth(pred, gt).abs_err;
}

double irmse(const DepthMap& pred, const DepthMap& gt) {
  return evaluate_depth(pred, gt).irmse;
}

double silog(const DepthMap& pred, const DepthMap& gt) {
  return evaluate_depth(pred, gt).silog;
}

double delta(const DepthMap& pred, const DepthMap& gt, double t) {
  if (!(t > 1.0)) {
    throw validation_error("delta threshold must be greater than 1");
  }
  require_same_size(pred, gt);
  std::int64_t hits = 0;
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < gt.pixel_count(); ++i) {
    if (!gt.is_valid(i) || !pred.is_valid(i)) continue;
    ++n;
    const double d = gt.value(i);
    const double d_pred = pred.value(i);
    if (std::max(d / d_pred, d_pred / d) < t) ++hits;
  }
  if (n == 0) throw validation_error("no jointly valid pixels");
  return static_cast<double>(hits) / static_cast<double>(n);
}

nlohmann::json to_json(const DepthReport& report) {
  nlohmann::json doc;
  doc["sqErr"] = report.sq_err;
  doc["absErr"] = report.abs_err;
  doc["IRMSE"] = report.irmse;
  doc["SILog"] = report.silog;
  doc["delta_1"] = report.delta[0];
  doc["delta_2"] = report.delta[1];
  doc["delta_3"] = report.delta[2];
  doc["n"] = report.n;
  doc["coverage"] = report.coverage;
  doc["units"] = {{"IRMSE", "1/km"}, {"SILog", "x100"}};
  return doc;
}

std::string format_table(const DepthReport& report) {
  std::string out;
  char line[200];
  std::snprintf(line, sizeof(line), "%8s %8s %8s %8s %8s %8s %8s %10s %9s\n",
                "sqErr", "absErr", "IRMSE", "SILog", "delta_1", "delta_2",
                "delta_3", "n", "coverage");
  out += line;
  std::snprintf(line, sizeof(line),
                "%8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %10lld %9.3f\n",
                report.sq_err, report.abs_err, report.irmse, report.silog,
                report.delta[0], report.delta[1], report.delta[2],
                static_cast<long long>(report.n), report.coverage);
  out += line;
  return out;
}

}  // namespace pdkit
