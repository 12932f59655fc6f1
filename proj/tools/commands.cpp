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
#include "commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/colormap.hpp"
#include "pdkit/dataset_io.hpp"
#include "pdkit/depth.hpp"
#include "pdkit/depth_metrics.hpp"
#include "pdkit/errors.hpp"
#include "pdkit/fusion.hpp"
#include "pdkit/panoptic_metrics.hpp"
#include "pdkit/png_io.hpp"
#include "pdkit/synth.hpp"

namespace pdkit::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- logging

/// PDK_LOG: silent | warn (default) | info | debug, or 0..3.
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("PDK_LOG");
    if (env == nullptr || *env == '\0') return 1;
    const std::string value(env);
    if (value == "silent" || value == "0") return 0;
    if (value == "warn" || value == "1") return 1;
    if (value == "info" || value == "2") return 2;
    if (value == "debug" || value == "3") return 3;
    return 1;
  }();
  return level;
}

void log_warn(const std::string& message) {
  if (log_level() >= 1) std::cerr << "warning: " << message << "\n";
}

void log_info(const std::string& message) {
  if (log_level() >= 2) std::cerr << "info: " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= 3) std::cerr << "debug: " << message << "\n";
}

// ------------------------------------------------------------- file utils

void require_exists(const fs::path& path) {
  if (!fs::exists(path)) throw io_error("no such path: " + path.string());
}

/// Default sidecar location for a panoptic raster: <dir>/<stem>.segments.json.
fs::path sidecar_for(const fs::path& raster) {
  fs::path side = raster;
  side.replace_extension();  // drop .png
  side += ".segments.json";
  return side;
}

ClassSet load_classes(const std::string& path) {
  if (path.empty()) return ClassSet::cityscapes();
  require_exists(path);
  return ClassSet::from_json_file(path);
}

/// Re-throws with the offending file prepended, preserving the category.
template <typename Fn>
auto with_file(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const io_error& e) {
    throw io_error(path.string() + ": " + e.what());
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

std::string join_stems(const std::vector<std::string>& stems) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(stems.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += stems[i];
  }
  if (stems.size() > shown) {
    out += ", … (" + std::to_string(stems.size()) + " total)";
  }
  return out;
}

/// One gt/pred input pair, either single files or matched directory
/// entries. pred is empty when missing and tolerated.
struct InputPair {
  std::string stem;
  fs::path gt;
  std::optional<fs::path> pred;
};

/// Pairs gt and pred inputs by basename stem. Missing predictions are
/// fatal unless allow_missing; prediction-only stems are ignored with a
/// note.
std::vector<InputPair> pair_inputs(const fs::path& gt, const fs::path& pred,
                                   bool allow_missing) {
  require_exists(gt);
  require_exists(pred);
  if (fs::is_directory(gt) != fs::is_directory(pred)) {
    throw validation_error(
        "gt and pred must both be files or both be directories");
  }
  std::vector<InputPair> pairs;
  if (!fs::is_directory(gt)) {
    pairs.push_back({gt.stem().string(), gt, pred});
    return pairs;
  }

  const auto gt_stems = png_stems(gt);
  const auto pred_stems = png_stems(pred);
  if (gt_stems.empty()) {
    throw validation_error("no .png inputs in " + gt.string());
  }
  std::vector<std::string> missing;
  for (const auto& [stem, gt_path] : gt_stems) {
    const auto it = pred_stems.find(stem);
    if (it != pred_stems.end()) {
      pairs.push_back({stem, gt_path, it->second});
    } else {
      missing.push_back(stem);
      pairs.push_back({stem, gt_path, std::nullopt});
    }
  }
  for (const auto& [stem, path] : pred_stems) {
    if (gt_stems.count(stem) == 0) {
      log_info("prediction without ground truth ignored: " + path.string());
    }
  }
  if (!missing.empty() && !allow_missing) {
    throw validation_error("no prediction for gt stem(s): " +
                           join_stems(missing));
  }
  return pairs;
}

/// Runs fn(i) over [0, n) with at most `jobs` concurrent images, keeping
/// the first error (in index order) with its category intact.
template <typename Fn>
void for_each_input(std::int64_t n, int jobs, Fn&& fn) {
  std::vector<int> error_kind(static_cast<std::size_t>(n), 0);
  std::vector<std::string> error_text(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (const io_error& e) {
      error_kind[i] = 1;
      error_text[i] = e.what();
    } catch (const validation_error& e) {
      error_kind[i] = 2;
      error_text[i] = e.what();
    } catch (const std::exception& e) {
      error_kind[i] = 1;
      error_text[i] = e.what();
    }
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (error_kind[i] == 1) throw io_error(error_text[i]);
    if (error_kind[i] == 2) throw validation_error(error_text[i]);
  }
}

// ----------------------------------------------------------- subcommands

struct PanopticReadOptions {
  PanopticEncoding encoding = PanopticEncoding::id16;
  std::uint32_t void_label = 0;
};

PanopticMap read_panoptic_input(const fs::path& raster,
                                const std::optional<fs::path>& sidecar,
                                const PanopticReadOptions& opts,
                                const ClassSet& classes) {
  PanopticDecodeOptions decode;
  decode.encoding = opts.encoding;
  decode.void_label = opts.void_label;
  decode.classes = &classes;
  std::optional<fs::path> side = sidecar;
  if (!side && opts.encoding != PanopticEncoding::cityscapes_instance_ids) {
    side = sidecar_for(raster);
  }
  return with_file(raster,
                   [&] { return read_panoptic(raster, side, decode); });
}

struct EvalPanopticArgs {
  std::string gt;
  std::string pred;
  std::string classes;
  std::string encoding = "id16";
  std::uint32_t void_label = 0;
  std::string report;
  bool allow_missing = false;
  int jobs = 0;
};

/// Everything a gt segment table implies when the prediction is absent:
/// each non-crowd segment becomes a false negative.
MatchResult all_false_negatives(const PanopticMap& gt, const ClassSet& classes) {
  MatchResult result;
  for (const auto& seg : gt.segments()) {
    if (!classes.contains(seg.category_id)) {
      throw validation_error("gt segment " + std::to_string(seg.id) +
                             " has category " +
                             std::to_string(seg.category_id) +
                             " outside the class set");
    }
    if (seg.is_crowd) continue;
    result.by_class[seg.category_id].unmatched_gt.push_back(seg.id);
  }
  return result;
}

void run_eval_panoptic(const EvalPanopticArgs& args) {
  const ClassSet classes = load_classes(args.classes);
  PanopticReadOptions opts;
  opts.encoding = panoptic_encoding_from_string(args.encoding);
  opts.void_label = args.void_label;

  const std::vector<InputPair> pairs =
      pair_inputs(args.gt, args.pred, args.allow_missing);
  const std::int64_t n = static_cast<std::int64_t>(pairs.size());
  std::vector<MatchResult> results(pairs.size());
  for_each_input(n, args.jobs, [&](std::int64_t i) {
    const InputPair& pair = pairs[static_cast<std::size_t>(i)];
    const PanopticMap gt =
        read_panoptic_input(pair.gt, std::nullopt, opts, classes);
    if (!pair.pred) {
      log_warn("no prediction for " + pair.stem + ": counting all-FN");
      results[i] = all_false_negatives(gt, classes);
      return;
    }
    const PanopticMap pred =
        read_panoptic_input(*pair.pred, std::nullopt, opts, classes);
    results[i] = with_file(*pair.pred,
                           [&] { return match_segments(gt, pred, classes); });
    log_debug("matched " + pair.stem);
  });

  PQAccumulator acc;
  for (const MatchResult& result : results) acc.add(result);
  const PQReport report = finalize(acc, classes);
  log_info("evaluated " + std::to_string(n) + " image(s)");
  std::cout << format_table(report);
  if (!args.report.empty()) {
    write_text_atomic(args.report, to_json(report).dump(2) + "\n");
    log_info("report written to " + args.report);
  }
}

struct EvalDepthArgs {
  std::string gt;
  std::string pred;
  std::string report;
  bool allow_missing = false;
  int jobs = 0;
};

void run_eval_depth(const EvalDepthArgs& args) {
  const std::vector<InputPair> pairs =
      pair_inputs(args.gt, args.pred, args.allow_missing);
  const std::int64_t n = static_cast<std::int64_t>(pairs.size());
  std::vector<DepthAccum> accums(pairs.size());
  std::vector<char> used(pairs.size(), 0);
  for_each_input(n, args.jobs, [&](std::int64_t i) {
    const InputPair& pair = pairs[static_cast<std::size_t>(i)];
    if (!pair.pred) {
      log_warn("no prediction for " + pair.stem + ": skipped");
      return;
    }
    const DepthMap gt = with_file(pair.gt, [&] { return read_depth(pair.gt); });
    const DepthMap pred =
        with_file(*pair.pred, [&] { return read_depth(*pair.pred); });
    accums[i] = with_file(*pair.pred,
                          [&] { return accumulate_depth(pred, gt); });
    used[i] = 1;
  });

  DepthAccum total;
  std::int64_t evaluated = 0;
  for (std::size_t i = 0; i < accums.size(); ++i) {
    if (used[i] == 0) continue;
    total.merge(accums[i]);
    ++evaluated;
  }
  if (evaluated == 0) {
    throw validation_error("no image pairs to evaluate");
  }
  const DepthReport report = finalize(total);
  log_info("evaluated " + std::to_string(evaluated) + " image(s)");
  std::cout << format_table(report);
  if (!args.report.empty()) {
    write_text_atomic(args.report, to_json(report).dump(2) + "\n");
    log_info("report written to " + args.report);
  }
}

struct ConvertArgs {
  std::string input;
  std::string camera;
  std::string output;
  int jobs = 0;
};

void convert_one(const fs::path& in, const fs::path& out,
                 const StereoCamera& cam) {
  const DisparityMap disp = with_file(in, [&] { return read_disparity(in); });
  const DepthMap depth = disparity_to_depth(disp, cam);
  const std::int64_t clamped =
      with_file(out, [&] { return write_depth(out, depth); });
  if (clamped > 0) {
    log_warn(out.string() + ": " + std::to_string(clamped) +
             " pixel(s) clamped to the 16-bit depth ceiling");
  }
}

void run_convert(const ConvertArgs& args) {
  require_exists(args.input);
  require_exists(args.camera);
  const StereoCamera cam = with_file(
      args.camera, [&] { return read_camera_json(args.camera); });

  if (!fs::is_directory(args.input)) {
    convert_one(args.input, args.output, cam);
    return;
  }
  const auto stems = png_stems(args.input);
  if (stems.empty()) {
    throw validation_error("no .png inputs in " + args.input);
  }
  std::error_code ec;
  fs::create_directories(args.output, ec);
  if (ec) {
    throw io_error("cannot create directory " + args.output + ": " +
                   ec.message());
  }
  std::vector<std::pair<std::string, fs::path>> inputs(stems.begin(),
                                                       stems.end());
  for_each_input(static_cast<std::int64_t>(inputs.size()), args.jobs,
                 [&](std::int64_t i) {
                   const auto& [stem, path] = inputs[static_cast<std::size_t>(i)];
                   convert_one(path, fs::path(args.output) / (stem + ".png"),
                               cam);
                 });
  log_info("converted " + std::to_string(inputs.size()) + " image(s)");
}

struct FuseArgs {
  std::string panoptic;
  std::string segments;
  std::string depth;
  std::string classes;
  std::string encoding = "id16";
  std::uint32_t void_label = 0;
  std::string output;
  int jobs = 0;
};

void fuse_one(const fs::path& pan_path, const std::optional<fs::path>& sidecar,
              const fs::path& depth_path, const fs::path& out,
              const PanopticReadOptions& opts, const ClassSet& classes) {
  const PanopticMap pan = read_panoptic_input(pan_path, sidecar, opts, classes);
  const DepthMap depth =
      with_file(depth_path, [&] { return read_depth(depth_path); });
  const std::vector<InstanceDepthRecord> records =
      with_file(pan_path, [&] { return instance_depths(pan, depth); });
  write_text_atomic(out, to_json(records).dump(2) + "\n");
}

void run_fuse(const FuseArgs& args) {
  const ClassSet classes = load_classes(args.classes);
  PanopticReadOptions opts;
  opts.encoding = panoptic_encoding_from_string(args.encoding);
  opts.void_label = args.void_label;
  require_exists(args.panoptic);
  require_exists(args.depth);
  if (fs::is_directory(args.panoptic) != fs::is_directory(args.depth)) {
    throw validation_error(
        "panoptic and depth must both be files or both be directories");
  }

  if (!fs::is_directory(args.panoptic)) {
    std::optional<fs::path> sidecar;
    if (!args.segments.empty()) sidecar = args.segments;
    fuse_one(args.panoptic, sidecar, args.depth, args.output, opts, classes);
    return;
  }

  const auto pan_stems = png_stems(args.panoptic);
  const auto depth_stems = png_stems(args.depth);
  if (pan_stems.empty()) {
    throw validation_error("no .png inputs in " + args.panoptic);
  }
  std::vector<std::string> missing;
  std::vector<std::pair<fs::path, fs::path>> pairs;
  std::vector<std::string> stems;
  for (const auto& [stem, path] : pan_stems) {
    const auto it = depth_stems.find(stem);
    if (it == depth_stems.end()) {
      missing.push_back(stem);
    } else {
      pairs.emplace_back(path, it->second);
      stems.push_back(stem);
    }
  }
  if (!missing.empty()) {
    throw validation_error("no depth map for panoptic stem(s): " +
                           join_stems(missing));
  }
  std::error_code ec;
  fs::create_directories(args.output, ec);
  if (ec) {
    throw io_error("cannot create directory " + args.output + ": " +
                   ec.message());
  }
  for_each_input(static_cast<std::int64_t>(pairs.size()), args.jobs,
                 [&](std::int64_t i) {
                   const auto& [pan_path, depth_path] =
                       pairs[static_cast<std::size_t>(i)];
                   fuse_one(pan_path, std::nullopt, depth_path,
                            fs::path(args.output) /
                                (stems[static_cast<std::size_t>(i)] +
                                 ".instances.json"),
                            opts, classes);
                 });
  log_info("fused " + std::to_string(pairs.size()) + " image(s)");
}

struct RenderArgs {
  std::string panoptic;
  std::string segments;
  std::string instances;
  std::string depth;
  std::string classes;
  std::string encoding = "id16";
  std::uint32_t void_label = 0;
  std::string output;
  std::string annotations;
  std::string palette;
  double near_m = 0.0;
  double far_m = 80.0;
  bool no_boundaries = false;
  int jobs = 0;
};

ColorMapConfig make_colormap_config(const std::string& palette_path,
                                    double near_m, double far_m,
                                    bool no_boundaries) {
  ColorMapConfig cfg = default_colormap_config();
  cfg.near_m = near_m;
  cfg.far_m = far_m;
  cfg.draw_boundaries = !no_boundaries;
  if (!palette_path.empty()) {
    require_exists(palette_path);
    cfg.stuff_palette = read_palette_json(palette_path);
  }
  return cfg;
}

void run_render(const RenderArgs& args) {
  const ClassSet classes = load_classes(args.classes);
  PanopticReadOptions opts;
  opts.encoding = panoptic_encoding_from_string(args.encoding);
  opts.void_label = args.void_label;
  if (args.instances.empty() == args.depth.empty()) {
    throw validation_error("render needs exactly one of --instances/--depth");
  }
  omp_set_num_threads(std::max(1, args.jobs));

  std::optional<fs::path> sidecar;
  if (!args.segments.empty()) sidecar = args.segments;
  const PanopticMap pan =
      read_panoptic_input(args.panoptic, sidecar, opts, classes);

  std::vector<InstanceDepthRecord> records;
  if (!args.instances.empty()) {
    require_exists(args.instances);
    records = with_file(args.instances, [&] {
      std::ifstream in(args.instances);
      if (!in) throw io_error("cannot open file");
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("malformed JSON: ") + e.what());
      }
      return instance_depths_from_json(doc);
    });
  } else {
    const DepthMap depth =
        with_file(args.depth, [&] { return read_depth(args.depth); });
    records = with_file(args.panoptic,
                        [&] { return instance_depths(pan, depth); });
  }

  const ColorMapConfig cfg = make_colormap_config(args.palette, args.near_m,
                                                  args.far_m,
                                                  args.no_boundaries);
  const RenderResult result = with_file(
      args.panoptic, [&] { return render(pan, records, cfg, classes); });
  write_png_rgb8(args.output, result.raster);
  fs::path ann_path = args.annotations;
  if (ann_path.empty()) {
    ann_path = args.output;
    ann_path.replace_extension();
    ann_path += ".annotations.json";
  }
  write_text_atomic(ann_path,
                    annotations_to_json(result.annotations).dump(2) + "\n");
  log_info("rendered " + args.output);
}

struct SynthArgs {
  std::string output;
  std::string spec_file;
  std::string classes;
  int count = 1;
  // Spec fields; negative sentinels mean "not set on the command line".
  SceneSpec spec;
  double baseline_m = 0.209313;
  double focal_px = 2262.52;
};

void run_synth(const SynthArgs& args, const SceneSpec& spec) {
  const ClassSet classes = load_classes(args.classes);
  if (args.count < 1) throw validation_error("--count must be at least 1");
  std::error_code ec;
  fs::create_directories(args.output, ec);
  if (ec) {
    throw io_error("cannot create directory " + args.output + ": " +
                   ec.message());
  }

  SceneWriteOptions write_opts;
  write_opts.baseline_m = args.baseline_m;
  write_opts.focal_px = args.focal_px;

  for (int i = 0; i < args.count; ++i) {
    SceneSpec scene_spec = spec;
    scene_spec.seed = spec.seed + static_cast<std::uint64_t>(i);
    const Scene scene = generate_scene(scene_spec, classes);
    char stem[32];
    std::snprintf(stem, sizeof(stem), "scene_%06d", i);
    write_scene(args.output, stem, scene, write_opts);
    log_debug(std::string("generated ") + stem);
  }

  const fs::path root(args.output);
  nlohmann::json spec_doc = to_json(spec);
  spec_doc["count"] = args.count;
  write_text_atomic(root / "scene_spec.json", spec_doc.dump(2) + "\n");
  write_text_atomic(root / "classes.json", classes.to_json().dump(2) + "\n");
  write_camera_json(root / "camera.json",
                    StereoCamera{args.baseline_m, args.focal_px});
  log_info("wrote " + std::to_string(args.count) + " scene(s) to " +
           args.output);
}

struct PipelineArgs {
  std::string disparity;
  std::string camera;
  std::string panoptic;
  std::string segments;
  std::string classes;
  std::string encoding = "id16";
  std::uint32_t void_label = 0;
  std::string out_dir;
  std::string palette;
  double near_m = 0.0;
  double far_m = 80.0;
  bool no_boundaries = false;
  int jobs = 0;
};

void run_pipeline(const PipelineArgs& args) {
  const ClassSet classes = load_classes(args.classes);
  PanopticReadOptions opts;
  opts.encoding = panoptic_encoding_from_string(args.encoding);
  opts.void_label = args.void_label;
  omp_set_num_threads(std::max(1, args.jobs));
  require_exists(args.disparity);
  require_exists(args.camera);
  require_exists(args.panoptic);

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) {
    throw io_error("cannot create directory " + args.out_dir + ": " +
                   ec.message());
  }
  const fs::path out(args.out_dir);

  // Convert: disparity -> metric depth.
  const StereoCamera cam = with_file(
      args.camera, [&] { return read_camera_json(args.camera); });
  const DisparityMap disp =
      with_file(args.disparity, [&] { return read_disparity(args.disparity); });
  const DepthMap depth = disparity_to_depth(disp, cam);
  const std::int64_t clamped = write_depth(out / "depth.png", depth);
  if (clamped > 0) {
    log_warn("depth.png: " + std::to_string(clamped) +
             " pixel(s) clamped to the 16-bit depth ceiling");
  }

  // Fuse: one depth per segment.
  std::optional<fs::path> sidecar;
  if (!args.segments.empty()) sidecar = args.segments;
  const PanopticMap pan =
      read_panoptic_input(args.panoptic, sidecar, opts, classes);
  const std::vector<InstanceDepthRecord> records = with_file(
      args.panoptic, [&] { return instance_depths(pan, depth); });
  write_text_atomic(out / "instances.json", to_json(records).dump(2) + "\n");

  // Render: the instance-depth color map plus its annotations.
  const ColorMapConfig cfg = make_colormap_config(args.palette, args.near_m,
                                                  args.far_m,
                                                  args.no_boundaries);
  const RenderResult result = with_file(
      args.panoptic, [&] { return render(pan, records, cfg, classes); });
  write_png_rgb8(out / "colormap.png", result.raster);
  write_text_atomic(out / "annotations.json",
                    annotations_to_json(result.annotations).dump(2) + "\n");
  log_info("pipeline outputs written to " + args.out_dir);
}

}  // namespace

std::map<std::string, fs::path> png_stems(const fs::path& dir) {
  std::map<std::string, fs::path> stems;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; it != end && !ec;
       it.increment(ec)) {
    const fs::path& path = it->path();
    if (path.extension() != ".png") continue;
    stems[path.stem().string()] = path;
  }
  if (ec) {
    throw io_error("cannot list directory " + dir.string() + ": " +
                   ec.message());
  }
  return stems;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Panoptic-segmentation and depth evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  int jobs = omp_get_max_threads();
  app.add_option("--jobs", jobs,
                 "maximum worker threads (kernels and image batches)")
      ->check(CLI::PositiveNumber);

  // convert-disparity
  ConvertArgs convert_args;
  auto* convert = app.add_subcommand(
      "convert-disparity", "Convert disparity PNGs to 16-bit depth PNGs");
  convert->add_option("--input", convert_args.input,
                      "disparity PNG or directory")->required();
  convert->add_option("--camera", convert_args.camera,
                      "camera JSON {baseline_m, focal_px}")->required();
  convert->add_option("--output", convert_args.output,
                      "output PNG or directory")->required();
  convert->callback([&] {
    convert_args.jobs = jobs;
    omp_set_num_threads(jobs);
    run_convert(convert_args);
  });

  // eval-panoptic
  EvalPanopticArgs ep_args;
  auto* ep = app.add_subcommand("eval-panoptic",
                                "Panoptic quality of predictions vs ground truth");
  ep->add_option("--gt", ep_args.gt, "ground-truth raster or directory")
      ->required();
  ep->add_option("--pred", ep_args.pred, "prediction raster or directory")
      ->required();
  ep->add_option("--classes", ep_args.classes,
                 "classes JSON (default: built-in street-scene set)");
  ep->add_option("--encoding", ep_args.encoding,
                 "id16 | rgb_id | cityscapes_instance_ids");
  ep->add_option("--void-label", ep_args.void_label,
                 "raster value to treat as void");
  ep->add_option("--report", ep_args.report, "write JSON report here");
  ep->add_flag("--allow-missing-pred", ep_args.allow_missing,
               "score images without predictions as all-FN");
  ep->callback([&] {
    ep_args.jobs = jobs;
    omp_set_num_threads(jobs);
    run_eval_panoptic(ep_args);
  });

  // eval-depth
  EvalDepthArgs ed_args;
  auto* ed = app.add_subcommand("eval-depth",
                                "Depth-error metrics of predictions vs ground truth");
  ed->add_option("--gt", ed_args.gt, "ground-truth depth PNG or directory")
      ->required();
  ed->add_option("--pred", ed_args.pred, "predicted depth PNG or directory")
      ->required();
  ed->add_option("--report", ed_args.report, "write JSON report here");
  ed->add_flag("--allow-missing-pred", ed_args.allow_missing,
               "skip images without predictions");
  ed->callback([&] {
    ed_args.jobs = jobs;
    omp_set_num_threads(jobs);
    run_eval_depth(ed_args);
  });

  // fuse
  FuseArgs fuse_args;
  auto* fuse = app.add_subcommand(
      "fuse", "Average depth over each segment into instance records");
  fuse->add_option("--panoptic", fuse_args.panoptic,
                   "panoptic raster or directory")->required();
  fuse->add_option("--segments", fuse_args.segments,
                   "segment sidecar JSON (single-file mode)");
  fuse->add_option("--depth", fuse_args.depth, "depth PNG or directory")
      ->required();
  fuse->add_option("--classes", fuse_args.classes, "classes JSON");
  fuse->add_option("--encoding", fuse_args.encoding,
                   "id16 | rgb_id | cityscapes_instance_ids");
  fuse->add_option("--void-label", fuse_args.void_label,
                   "raster value to treat as void");
  fuse->add_option("--output", fuse_args.output,
                   "instances JSON path or directory")->required();
  fuse->callback([&] {
    fuse_args.jobs = jobs;
    omp_set_num_threads(jobs);
    run_fuse(fuse_args);
  });

  // render
  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand(
      "render", "Render the instance-depth color map for one image");
  render_cmd->add_option("--panoptic", render_args.panoptic,
                         "panoptic raster")->required();
  render_cmd->add_option("--segments", render_args.segments,
                         "segment sidecar JSON");
  render_cmd->add_option("--instances", render_args.instances,
                         "instances JSON from fuse");
  render_cmd->add_option("--depth", render_args.depth,
                         "depth PNG (fuse inline instead of --instances)");
  render_cmd->add_option("--classes", render_args.classes, "classes JSON");
  render_cmd->add_option("--encoding", render_args.encoding,
                         "id16 | rgb_id | cityscapes_instance_ids");
  render_cmd->add_option("--void-label", render_args.void_label,
                         "raster value to treat as void");
  render_cmd->add_option("--output", render_args.output, "output PNG")
      ->required();
  render_cmd->add_option("--annotations", render_args.annotations,
                         "annotation JSON (default: <output>.annotations.json)");
  render_cmd->add_option("--palette", render_args.palette,
                         "stuff palette JSON");
  render_cmd->add_option("--near", render_args.near_m, "red depth, meters");
  render_cmd->add_option("--far", render_args.far_m, "blue depth, meters");
  render_cmd->add_flag("--no-boundaries", render_args.no_boundaries,
                       "skip the 1-px black segment boundaries");
  render_cmd->callback([&] {
    render_args.jobs = jobs;
    run_render(render_args);
  });

  // synth
  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "Generate synthetic gt/pred scene pairs in dataset formats");
  synth->add_option("--output", synth_args.output, "output directory")
      ->required();
  synth->add_option("--count", synth_args.count, "number of scenes");
  synth->add_option("--spec", synth_args.spec_file, "scene spec JSON");
  synth->add_option("--classes", synth_args.classes, "classes JSON");
  auto* o_seed = synth->add_option("--seed", synth_args.spec.seed,
                                   "seed of the first scene");
  auto* o_width = synth->add_option("--width", synth_args.spec.width, "scene width, pixels");
  auto* o_height = synth->add_option("--height", synth_args.spec.height, "scene height, pixels");
  auto* o_things =
      synth->add_option("--things", synth_args.spec.num_things,
                        "instances per scene");
  auto* o_stuff = synth->add_option("--stuff", synth_args.spec.num_stuff,
                                       "background regions per scene");
  auto* o_dmin =
      synth->add_option("--depth-min", synth_args.spec.depth_min_m,
                        "nearest ground-truth depth, meters");
  auto* o_dmax =
      synth->add_option("--depth-max", synth_args.spec.depth_max_m,
                        "farthest ground-truth depth, meters");
  auto* o_erosion = synth->add_option(
      "--erosion", synth_args.spec.perturbation.boundary_erosion_px,
      "pixels to shave off predicted segment boundaries");
  auto* o_flip = synth->add_option(
      "--flip-rate", synth_args.spec.perturbation.class_flip_rate,
      "chance a predicted instance gets the wrong class");
  auto* o_drop = synth->add_option(
      "--drop-rate", synth_args.spec.perturbation.drop_rate,
      "chance a ground-truth instance goes unpredicted");
  auto* o_noise = synth->add_option(
      "--depth-noise", synth_args.spec.perturbation.depth_noise_rel,
      "relative noise applied to predicted depth");
  synth->add_option("--baseline-m", synth_args.baseline_m, "camera baseline");
  synth->add_option("--focal-px", synth_args.focal_px, "camera focal length");
  synth->callback([&] {
    SceneSpec spec;
    if (!synth_args.spec_file.empty()) {
      require_exists(synth_args.spec_file);
      std::ifstream in(synth_args.spec_file);
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw io_error("malformed scene spec " + synth_args.spec_file + ": " +
                       e.what());
      }
      spec = scene_spec_from_json(doc);
    }
    // Explicit flags override values loaded from the --spec file.
    if (o_seed->count() > 0) spec.seed = synth_args.spec.seed;
    if (o_width->count() > 0) spec.width = synth_args.spec.width;
    if (o_height->count() > 0) spec.height = synth_args.spec.height;
    if (o_things->count() > 0) spec.num_things = synth_args.spec.num_things;
    if (o_stuff->count() > 0) spec.num_stuff = synth_args.spec.num_stuff;
    if (o_dmin->count() > 0) spec.depth_min_m = synth_args.spec.depth_min_m;
    if (o_dmax->count() > 0) spec.depth_max_m = synth_args.spec.depth_max_m;
    if (o_erosion->count() > 0) {
      spec.perturbation.boundary_erosion_px =
          synth_args.spec.perturbation.boundary_erosion_px;
    }
    if (o_flip->count() > 0) {
      spec.perturbation.class_flip_rate =
          synth_args.spec.perturbation.class_flip_rate;
    }
    if (o_drop->count() > 0) {
      spec.perturbation.drop_rate = synth_args.spec.perturbation.drop_rate;
    }
    if (o_noise->count() > 0) {
      spec.perturbation.depth_noise_rel =
          synth_args.spec.perturbation.depth_noise_rel;
    }
    run_synth(synth_args, spec);
  });

  // pipeline
  PipelineArgs pipe_args;
  auto* pipe = app.add_subcommand(
      "pipeline",
      "convert -> fuse -> render for one image (depth, instances, color map)");
  pipe->add_option("--disparity", pipe_args.disparity, "disparity PNG")
      ->required();
  pipe->add_option("--camera", pipe_args.camera, "camera JSON")->required();
  pipe->add_option("--panoptic", pipe_args.panoptic, "panoptic raster")
      ->required();
  pipe->add_option("--segments", pipe_args.segments, "segment sidecar JSON");
  pipe->add_option("--classes", pipe_args.classes, "classes JSON");
  pipe->add_option("--encoding", pipe_args.encoding,
                   "id16 | rgb_id | cityscapes_instance_ids");
  pipe->add_option("--void-label", pipe_args.void_label,
                   "raster value to treat as void");
  pipe->add_option("--out-dir", pipe_args.out_dir, "output directory")
      ->required();
  pipe->add_option("--palette", pipe_args.palette, "stuff palette JSON");
  pipe->add_option("--near", pipe_args.near_m, "red depth, meters");
  pipe->add_option("--far", pipe_args.far_m, "blue depth, meters");
  pipe->add_flag("--no-boundaries", pipe_args.no_boundaries,
                 "skip the 1-px black segment boundaries");
  pipe->callback([&] {
    pipe_args.jobs = jobs;
    run_pipeline(pipe_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pdkit");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace pdkit::cli
