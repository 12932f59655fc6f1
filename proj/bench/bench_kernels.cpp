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
//
// Side-by-side timings of the parallel kernels and their serial
// counterparts. Run with --benchmark_filter=... to narrow down.

#include <benchmark/benchmark.h>

#include "pdkit/classes.hpp"
#include "pdkit/colormap.hpp"
#include "pdkit/depth_metrics.hpp"
#include "pdkit/fusion.hpp"
#include "pdkit/panoptic_metrics.hpp"
#include "pdkit/synth.hpp"

namespace {

using namespace pdkit;

/// One fixed large scene shared by all benchmarks.
const Scene& bench_scene() {
  static const Scene scene = [] {
    SceneSpec spec;
    spec.width = 768;
    spec.height = 768;
    spec.num_things = 12;
    spec.num_stuff = 6;
    spec.perturbation.boundary_erosion_px = 1;
    spec.perturbation.class_flip_rate = 0.1;
    spec.perturbation.drop_rate = 0.1;
    spec.perturbation.depth_noise_rel = 0.1;
    spec.seed = 1;
    return generate_scene(spec, ClassSet::cityscapes());
  }();
  return scene;
}

const ClassSet& bench_classes() {
  static const ClassSet classes = ClassSet::cityscapes();
  return classes;
}

void BM_MatchSegments(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        match_segments(scene.gt, scene.pred, bench_classes()));
  }
}
BENCHMARK(BM_MatchSegments);

void BM_MatchSegmentsSerial(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        match_segments_serial(scene.gt, scene.pred, bench_classes()));
  }
}
BENCHMARK(BM_MatchSegmentsSerial);

void BM_AccumulateDepth(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        accumulate_depth(scene.pred_depth, scene.gt_depth));
  }
}
BENCHMARK(BM_AccumulateDepth);

void BM_AccumulateDepthSerial(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        accumulate_depth_serial(scene.pred_depth, scene.gt_depth));
  }
}
BENCHMARK(BM_AccumulateDepthSerial);

void BM_InstanceDepths(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(instance_depths(scene.pred, scene.pred_depth));
  }
}
BENCHMARK(BM_InstanceDepths);

void BM_InstanceDepthsSerial(benchmark::State& state) {
  const Scene& scene = bench_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        instance_depths_serial(scene.pred, scene.pred_depth));
  }
}
BENCHMARK(BM_InstanceDepthsSerial);

void BM_Render(benchmark::State& state) {
  const Scene& scene = bench_scene();
  const auto records = instance_depths(scene.pred, scene.pred_depth);
  const ColorMapConfig cfg = default_colormap_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(render(scene.pred, records, cfg, bench_classes()));
  }
}
BENCHMARK(BM_Render);

void BM_RenderSerial(benchmark::State& state) {
  const Scene& scene = bench_scene();
  const auto records = instance_depths(scene.pred, scene.pred_depth);
  const ColorMapConfig cfg = default_colormap_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        render_serial(scene.pred, records, cfg, bench_classes()));
  }
}
BENCHMARK(BM_RenderSerial);

}  // namespace

BENCHMARK_MAIN();
