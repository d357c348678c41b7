/* Copyright 2026 The OFFSEG Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Pipeline configuration and the per-frame post-network pipeline:
// prediction -> pooled mask -> RoI -> color pools -> sub-class labels ->
// composite.
//
// Pipeline config (JSON; relative paths resolve against the config file):
//
//   {
//     "fine_schema": "rellis3d.json",         dataset schema with "pooling"
//     "subclass_schema": "subclasses.json",
//     "classifier_model": "seed_model.json",  needed by segment-post / bench
//     "external_pool_labels": "labels.json",  optional, replaces the model
//     "prediction_schema": "pooled",          "pooled" or "fine"
//     "roi_class": "traversable",
//     "unknown_detection": true,
//     "kmeans": {"k": 4, "init": "plusplus", "seed": 20211, "max_iters": 100,
//                "tol": 1e-4, "color_space": "rgb"},
//     "compose": {"alpha": 0.5, "export_pools": false},
//     "metrics": {"policy": "skip_undefined"},
//     "bench": {"warmup": 3, "repetitions": 1},
//     "output_dir": "out",
//     "jobs": 1
//   }

#ifndef OFFSEG_PIPELINE_HPP_
#define OFFSEG_PIPELINE_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "offseg/classify.hpp"
#include "offseg/compose.hpp"
#include "offseg/error.hpp"
#include "offseg/ingest.hpp"
#include "offseg/kmeans.hpp"
#include "offseg/manifest.hpp"
#include "offseg/metrics.hpp"
#include "offseg/png_io.hpp"
#include "offseg/schema.hpp"

namespace offseg {

enum class PredictionSchema { pooled, fine };

struct PipelineConfig {
  std::filesystem::path fine_schema;
  std::filesystem::path subclass_schema;
  std::filesystem::path classifier_model;
  std::filesystem::path external_pool_labels;
  PredictionSchema prediction_schema = PredictionSchema::pooled;
  std::string roi_class = "traversable";
  bool unknown_detection = true;
  KMeansConfig kmeans;
  double alpha = 0.5;
  bool export_pools = false;
  UndefinedPolicy policy = UndefinedPolicy::skip_undefined;
  std::size_t warmup = 3;
  std::size_t repetitions = 1;
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;

  /// Checks value ranges and that referenced files exist. With
  /// `need_classifier`, a model or external label file must be configured.
  void validate(bool need_classifier = false) const {
    kmeans.validate();
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("compose.alpha must be in [0, 1]");
    if (repetitions < 1) throw ConfigError("bench.repetitions must be >= 1");
    auto require = [](const std::filesystem::path& p, const char* what) {
      if (p.empty()) throw ConfigError(std::string(what) + " is not configured");
      if (!std::filesystem::is_regular_file(p)) {
        throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
      }
    };
    require(fine_schema, "fine_schema");
    require(subclass_schema, "subclass_schema");
    if (!classifier_model.empty()) require(classifier_model, "classifier_model");
    if (!external_pool_labels.empty()) require(external_pool_labels, "external_pool_labels");
    if (need_classifier && classifier_model.empty() && external_pool_labels.empty()) {
      throw ConfigError("classifier_model (or external_pool_labels) is not configured");
    }
  }
};

inline KMeansConfig parse_kmeans_config(const nlohmann::json& j, KMeansConfig cfg = {}) {
  if (j.contains("k")) cfg.k = j["k"].get<std::size_t>();
  if (j.contains("init")) {
    auto init = parse_kmeans_init(j["init"].get<std::string>());
    if (!init) throw ConfigError("kmeans.init must be 'plusplus' or 'random_points'");
    cfg.init = *init;
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("max_iters")) cfg.max_iters = j["max_iters"].get<std::size_t>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("color_space")) {
    auto cs = parse_color_space(j["color_space"].get<std::string>());
    if (!cs) throw ConfigError("kmeans.color_space must be 'rgb' or 'lab'");
    cfg.color_space = *cs;
  }
  return cfg;
}

inline PipelineConfig parse_pipeline_config(const nlohmann::json& doc, const std::filesystem::path& base,
                                            const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": pipeline config must be an object");
  PipelineConfig cfg;
  auto path = [&](const char* key) -> std::filesystem::path {
    if (!doc.contains(key) || doc[key].is_null()) return {};
    std::filesystem::path p(doc[key].get<std::string>());
    return p.is_absolute() ? p : base / p;
  };
  try {
    cfg.fine_schema = path("fine_schema");
    cfg.subclass_schema = path("subclass_schema");
    cfg.classifier_model = path("classifier_model");
    cfg.external_pool_labels = path("external_pool_labels");
    if (doc.contains("output_dir")) cfg.output_dir = path("output_dir");
    const auto ps = doc.value("prediction_schema", std::string("pooled"));
    if (ps == "pooled") {
      cfg.prediction_schema = PredictionSchema::pooled;
    } else if (ps == "fine") {
      cfg.prediction_schema = PredictionSchema::fine;
    } else {
      throw ConfigError(origin + ": prediction_schema must be 'pooled' or 'fine'");
    }
    cfg.roi_class = doc.value("roi_class", cfg.roi_class);
    cfg.unknown_detection = doc.value("unknown_detection", cfg.unknown_detection);
    if (doc.contains("kmeans")) cfg.kmeans = parse_kmeans_config(doc["kmeans"]);
    if (doc.contains("compose")) {
      cfg.alpha = doc["compose"].value("alpha", cfg.alpha);
      cfg.export_pools = doc["compose"].value("export_pools", cfg.export_pools);
    }
    if (doc.contains("metrics")) {
      auto p = parse_undefined_policy(doc["metrics"].value("policy", std::string("skip_undefined")));
      if (!p) throw ConfigError(origin + ": metrics.policy must be 'skip_undefined' or 'count_as_zero'");
      cfg.policy = *p;
    }
    if (doc.contains("bench")) {
      cfg.warmup = doc["bench"].value("warmup", cfg.warmup);
      cfg.repetitions = doc["bench"].value("repetitions", cfg.repetitions);
    }
    const auto jobs = doc.value("jobs", static_cast<long long>(cfg.jobs));
    if (jobs < 1) throw ConfigError(origin + ": jobs must be >= 1");
    cfg.jobs = static_cast<std::size_t>(jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return parse_pipeline_config(detail::read_json_file(path), path.parent_path(), path.string());
}

/// Loaded, immutable pipeline resources; shared read-only across workers.
struct PipelineContext {
  PipelineConfig config;
  SchemaPtr fine;
  SchemaPtr pooled;
  SchemaPtr subclasses;
  std::shared_ptr<const PoolingMap> pooling;
  std::shared_ptr<const SubClassModel> model;
  std::shared_ptr<const PoolLabeler> labeler;
  ClassId roi_class = 0;

  static PipelineContext load(const PipelineConfig& cfg, bool need_classifier) {
    cfg.validate(need_classifier);
    PipelineContext ctx;
    ctx.config = cfg;
    auto dataset = load_dataset_config(cfg.fine_schema);
    if (!dataset.pooling) {
      throw ConfigError(cfg.fine_schema.string() + ": dataset config has no 'pooling' section");
    }
    if (!dataset.pooling->is_total()) {
      std::string names;
      for (const auto& n : validate_pooling(*dataset.pooling).unmapped) names += " " + n;
      throw ConfigError(cfg.fine_schema.string() + ": pooling leaves classes unmapped:" + names);
    }
    ctx.fine = dataset.schema;
    ctx.pooled = dataset.pooling->target_ptr();
    ctx.pooling = std::make_shared<const PoolingMap>(std::move(*dataset.pooling));
    ctx.subclasses = load_schema(cfg.subclass_schema);
    ctx.roi_class = ctx.pooled->id_of(cfg.roi_class);
    if (!cfg.external_pool_labels.empty()) {
      ctx.labeler = std::make_shared<const ExternalPoolLabels>(ctx.subclasses, cfg.external_pool_labels);
    } else if (!cfg.classifier_model.empty()) {
      ctx.model = std::make_shared<const SubClassModel>(load_model(cfg.classifier_model));
      if (!(ctx.model->schema() == *ctx.subclasses)) {
        throw ConfigError("classifier model sub-classes differ from '" + cfg.subclass_schema.string() + "'");
      }
      if (ctx.model->color_space() != cfg.kmeans.color_space) {
        throw ConfigError(std::string("classifier model was trained in ") + to_string(ctx.model->color_space()) +
                          " but kmeans.color_space is " + to_string(cfg.kmeans.color_space));
      }
      ctx.labeler = std::make_shared<const GaussianPoolLabeler>(ctx.model, cfg.unknown_detection);
    }
    return ctx;
  }

  /// Ground-truth mask in the pooled schema.
  DecodedMask pooled_ground_truth(const std::filesystem::path& path) const {
    auto d = load_mask(path, fine, MaskKind::ground_truth);
    d.mask = remap_mask(d.mask, *pooling);
    return d;
  }

  /// Prediction mask in the pooled schema.
  DecodedMask pooled_prediction(const std::filesystem::path& path) const {
    if (config.prediction_schema == PredictionSchema::pooled) {
      return load_mask(path, pooled, MaskKind::prediction);
    }
    auto d = load_mask(path, fine, MaskKind::prediction);
    d.mask = remap_mask(d.mask, *pooling);
    return d;
  }
};

/// Output of the post-network pipeline for one frame.
struct PostResult {
  std::size_t roi_pixels = 0;
  std::optional<ClusterResult> clusters;  // empty when the RoI is empty
  std::vector<ClassifiedPool> classified;
  CompositeMask composite;
};

inline ClusterResult cluster_stage(const PipelineContext& ctx, const Frame& frame, const LabelMask& pooled,
                                   std::size_t* roi_pixels = nullptr) {
  auto roi = extract_roi(pooled, ctx.roi_class);
  if (roi_pixels) *roi_pixels = roi.pixel_count;
  return cluster_roi(frame, roi.mask, ctx.config.kmeans);
}

inline PostResult post_process(const PipelineContext& ctx, const Frame& frame, const LabelMask& pooled) {
  if (!ctx.labeler) throw ConfigError("no classifier configured");
  require_same_shape(frame.pixels, pooled.ids, "post_process");
  PostResult r;
  try {
    r.clusters = cluster_stage(ctx, frame, pooled, &r.roi_pixels);
  } catch (const EmptyRoiError&) {
    r.clusters.reset();
  }
  if (r.clusters) r.classified = classify_pools(*ctx.labeler, r.clusters->pools, frame);
  r.composite = compose(pooled, r.classified, *ctx.subclasses, ctx.roi_class);
  return r;
}

inline nlohmann::json sidecar_json(const PipelineContext& ctx, const Frame& frame, const PostResult& r,
                                   std::size_t unknown_prediction_pixels) {
  const auto& km = ctx.config.kmeans;
  nlohmann::json pools = nlohmann::json::array();
  if (r.clusters) {
    for (std::size_t i = 0; i < r.classified.size(); ++i) {
      const auto& cp = r.classified[i];
      pools.push_back({{"index", i},
                       {"centroid", cp.pool.centroid},
                       {"centroid_rgb", color_to_json(cp.pool.centroid_rgb())},
                       {"count", cp.pool.count},
                       {"inertia", cp.pool.inertia_contribution},
                       {"label", cp.label.name},
                       {"confidence", cp.confidence}});
    }
  }
  nlohmann::json j{{"id", frame.source_id},
                   {"width", frame.width()},
                   {"height", frame.height()},
                   {"roi_class", ctx.config.roi_class},
                   {"roi_pixels", r.roi_pixels},
                   {"empty_roi", !r.clusters.has_value()},
                   {"unknown_prediction_pixels", unknown_prediction_pixels},
                   {"kmeans", {{"k", km.k},
                               {"init", to_string(km.init)},
                               {"seed", km.seed},
                               {"color_space", to_string(km.color_space)},
                               {"max_iters", km.max_iters},
                               {"tol", km.tol}}},
                   {"pools", pools}};
  if (r.clusters) {
    j["kmeans"]["iterations"] = r.clusters->iterations;
    j["kmeans"]["inertia"] = r.clusters->inertia;
    j["kmeans"]["distinct_colors"] = r.clusters->distinct_colors;
    j["kmeans"]["shortfall"] = r.clusters->shortfall();
  }
  return j;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions escaping fn
/// are rethrown after all workers finish (the first one by index wins).
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct BenchOptions {
  std::size_t repetitions = 1;
  std::size_t warmup = 3;
  std::size_t jobs = 1;
};

namespace detail {

using BenchClock = std::chrono::steady_clock;

inline double seconds_since(BenchClock::time_point t0) {
  return std::chrono::duration<double>(BenchClock::now() - t0).count();
}

// One full pass over a manifest entry, adding each stage's wall time to
// `rec`. Entries without a prediction use their pooled ground truth as the
// prediction; entries without ground truth skip the evaluate stage.
inline void bench_frame(const PipelineContext& ctx, const ManifestEntry& e, ThroughputRecord& rec,
                        ConfusionMatrix& matrix) {
  auto t = BenchClock::now();
  Frame frame = png::read_frame(e.frame);
  frame.source_id = e.id;
  std::optional<png::Image> gt_png;
  std::optional<png::Image> pred_png;
  if (!e.ground_truth.empty()) gt_png = png::read(e.ground_truth);
  if (!e.prediction.empty()) pred_png = png::read(e.prediction);
  rec.stage("io") += seconds_since(t);

  t = BenchClock::now();
  auto to_mask = [](png::Image& img, const SchemaPtr& schema, MaskKind kind) {
    if (img.channels == 1) {
      for (auto& v : img.bytes) v = schema->valid(v) ? v : kIgnoreId;
      return LabelMask{Raster<ClassId>(img.width, img.height, std::move(img.bytes)), schema, kind, {}};
    }
    std::vector<Rgb> px(img.width * img.height);
    std::memcpy(px.data(), img.bytes.data(), img.bytes.size());
    return decode_mask(RgbRaster(img.width, img.height, std::move(px)), schema, kind).mask;
  };
  std::optional<LabelMask> gt;
  std::optional<LabelMask> pred;
  if (gt_png) gt = to_mask(*gt_png, ctx.fine, MaskKind::ground_truth);
  const bool pred_is_fine = ctx.config.prediction_schema == PredictionSchema::fine;
  if (pred_png) pred = to_mask(*pred_png, pred_is_fine ? ctx.fine : ctx.pooled, MaskKind::prediction);
  rec.stage("decode") += seconds_since(t);

  t = BenchClock::now();
  if (gt) gt = remap_mask(*gt, *ctx.pooling);
  if (pred && pred_is_fine) pred = remap_mask(*pred, *ctx.pooling);
  if (!pred) {
    if (!gt) throw DataError("bench: entry '" + e.id + "' has neither prediction nor ground truth");
    pred = *gt;
  }
  rec.stage("remap") += seconds_since(t);

  t = BenchClock::now();
  std::optional<ClusterResult> clusters;
  try {
    clusters = cluster_stage(ctx, frame, *pred);
  } catch (const EmptyRoiError&) {
  }
  rec.stage("cluster") += seconds_since(t);

  t = BenchClock::now();
  std::vector<ClassifiedPool> classified;
  if (clusters) classified = classify_pools(*ctx.labeler, clusters->pools, frame);
  rec.stage("classify") += seconds_since(t);

  t = BenchClock::now();
  auto composite = compose(*pred, classified, *ctx.subclasses, ctx.roi_class);
  auto blend = overlay_on_frame(composite, frame, ctx.config.alpha);
  rec.stage("compose") += seconds_since(t);

  t = BenchClock::now();
  if (gt) matrix.accumulate(*gt, *pred);
  rec.stage("evaluate") += seconds_since(t);

  if (rec.width == 0) {
    rec.width = frame.width();
    rec.height = frame.height();
  }
}

}  // namespace detail

/// Times the post-network pipeline over `manifest`, `repetitions` times.
/// The first `warmup` frames run untimed beforehand.
inline ThroughputRecord bench(const PipelineContext& ctx, const DatasetManifest& manifest,
                              const BenchOptions& opt = {}) {
  if (manifest.entries.empty()) throw DataError("bench: manifest is empty");
  if (opt.repetitions < 1) throw ConfigError("bench: repetitions must be >= 1");
  if (!ctx.labeler) throw ConfigError("bench: no classifier configured");
  const auto& entries = manifest.entries;

  ThroughputRecord scratch;
  ConfusionMatrix scratch_matrix(ctx.pooled);
  for (std::size_t i = 0; i < opt.warmup; ++i) {
    detail::bench_frame(ctx, entries[i % entries.size()], scratch, scratch_matrix);
  }

  const std::size_t total = entries.size() * opt.repetitions;
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, total));
  std::vector<ThroughputRecord> per_worker(total);
  std::vector<ConfusionMatrix> matrices(total, ConfusionMatrix(ctx.pooled));

  const auto t0 = detail::BenchClock::now();
  parallel_for(total, jobs, [&](std::size_t i) {
    detail::bench_frame(ctx, entries[i % entries.size()], per_worker[i], matrices[i]);
  });
  ThroughputRecord rec;
  rec.total_seconds = detail::seconds_since(t0);
  rec.frames = total;
  rec.jobs = jobs;
  rec.warmup_frames = opt.warmup;
  for (const auto& w : per_worker) {
    for (std::size_t s = 0; s < rec.stage_seconds.size(); ++s) rec.stage_seconds[s] += w.stage_seconds[s];
    if (rec.width == 0) {
      rec.width = w.width;
      rec.height = w.height;
    }
  }
  return rec;
}

}  // namespace offseg

#endif  // OFFSEG_PIPELINE_HPP_
