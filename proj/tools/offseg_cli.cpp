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

// offseg: batch front end for the off-road segmentation post-processing
// pipeline.
//
// Exit codes: 0 success, 1 data error (missing or unreadable inputs, some
// entries failed), 2 configuration error, 3 internal error, 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "offseg/offseg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::string config;
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> k;
  bool json_summary = false;

  // train-classifier
  std::string samples;
  std::string eval_samples;
  std::string features = "mean";
  double unknown_quantile = 0.001;
  double variance_floor = 1e-4;

  // bench
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> warmup;

  // synth
  std::size_t frames = 10;
  std::size_t width = 1024;
  std::size_t height = 640;
  std::string samples_out;
  std::size_t per_class = 40;
};

class Reporter {
 public:
  explicit Reporter(bool json) : json_(json) {}

  void warn(const std::string& msg) {
    std::lock_guard lock(mu_);
    std::cerr << "warning: " << msg << '\n';
  }
  void fail(const std::string& id, const std::string& msg) {
    std::lock_guard lock(mu_);
    std::cerr << "error: " << id << ": " << msg << '\n';
  }
  void summary(const json& j, const std::string& human) const {
    if (json_) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cerr << human;
    }
  }

 private:
  bool json_;
  std::mutex mu_;
};

offseg::PipelineConfig resolve_config(const Options& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("OFFSEG_CONFIG")) path = env;
  }
  if (path.empty()) throw offseg::ConfigError("no pipeline config: pass --config or set OFFSEG_CONFIG");
  auto cfg = offseg::load_pipeline_config(path);
  if (o.seed) cfg.kmeans.seed = *o.seed;
  if (o.k) cfg.kmeans.k = *o.k;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.repetitions) cfg.repetitions = *o.repetitions;
  if (o.warmup) cfg.warmup = *o.warmup;
  return cfg;
}

offseg::DatasetManifest load_manifest_lenient(const Options& o) {
  if (o.manifest.empty()) throw offseg::ConfigError("--manifest is required");
  return offseg::load_manifest(o.manifest, /*require_files=*/false);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw offseg::DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

// Per-entry outcome of a batch command; failures are kept in entry order so
// summaries are reproducible regardless of scheduling.
struct Outcome {
  bool ok = false;
  std::string error;
  std::size_t unknown_pixels = 0;
};

json failures_json(const offseg::DatasetManifest& m, const std::vector<Outcome>& outcomes) {
  json f = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok) f.push_back({{"id", m.entries[i].id}, {"error", outcomes[i].error}});
  }
  return f;
}

template <typename Fn>
std::vector<Outcome> run_batch(const offseg::DatasetManifest& m, std::size_t jobs, Reporter& rep, Fn&& fn) {
  std::vector<Outcome> outcomes(m.entries.size());
  offseg::parallel_for(m.entries.size(), jobs, [&](std::size_t i) {
    try {
      outcomes[i] = fn(m.entries[i]);
      outcomes[i].ok = true;
    } catch (const offseg::Error& e) {
      outcomes[i].error = e.what();
      rep.fail(m.entries[i].id, e.what());
    }
  });
  return outcomes;
}

std::size_t count_failed(const std::vector<Outcome>& o) {
  std::size_t n = 0;
  for (const auto& x : o) n += !x.ok;
  return n;
}

void require(const fs::path& p, const char* what) {
  if (p.empty()) throw offseg::DataError(std::string("no ") + what + " path in manifest");
  if (!fs::is_regular_file(p)) throw offseg::DataError(std::string(what) + " '" + p.string() + "' not found");
}

int cmd_remap(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  const auto ctx = offseg::PipelineContext::load(cfg, false);
  const auto m = load_manifest_lenient(o);
  fs::create_directories(cfg.output_dir);
  auto outcomes = run_batch(m, cfg.jobs, rep, [&](const offseg::ManifestEntry& e) {
    require(e.ground_truth, "gt");
    auto d = ctx.pooled_ground_truth(e.ground_truth);
    if (d.unknown_pixels > 0) {
      rep.warn(e.id + ": " + std::to_string(d.unknown_pixels) + " pixel(s) with off-palette colors");
    }
    offseg::save_mask(cfg.output_dir / (e.id + ".pooled.png"), d.mask);
    return Outcome{true, {}, d.unknown_pixels};
  });
  std::size_t unknown = 0;
  for (const auto& x : outcomes) unknown += x.unknown_pixels;
  const auto failed = count_failed(outcomes);
  json s{{"command", "remap"},
         {"entries", m.entries.size()},
         {"written", m.entries.size() - failed},
         {"off_palette_pixels", unknown},
         {"failures", failures_json(m, outcomes)}};
  write_json(cfg.output_dir / "remap_summary.json", s);
  rep.summary(s, "remap: wrote " + std::to_string(m.entries.size() - failed) + " pooled mask(s), " +
                     std::to_string(failed) + " failed, " + std::to_string(unknown) +
                     " off-palette pixel(s) mapped to ignore\n");
  return failed ? kExitData : kExitOk;
}

int cmd_segment_post(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  const auto ctx = offseg::PipelineContext::load(cfg, true);
  const auto m = load_manifest_lenient(o);
  fs::create_directories(cfg.output_dir);
  std::vector<char> empty_roi(m.entries.size(), 0);
  auto outcomes = run_batch(m, cfg.jobs, rep, [&](const offseg::ManifestEntry& e) {
    require(e.frame, "frame");
    require(e.prediction, "prediction");
    auto frame = offseg::png::read_frame(e.frame);
    frame.source_id = e.id;
    auto pred = ctx.pooled_prediction(e.prediction);
    auto r = offseg::post_process(ctx, frame, pred.mask);
    const fs::path base = cfg.output_dir / e.id;
    offseg::save_mask(base.string() + ".pooled.png", pred.mask);
    offseg::png::write(base.string() + ".final.png", r.composite.rendered);
    offseg::png::write(base.string() + ".blend.png", offseg::overlay_on_frame(r.composite, frame, cfg.alpha));
    if (cfg.export_pools && r.clusters) {
      for (std::size_t i = 0; i < r.clusters->pools.size(); ++i) {
        auto mask = r.clusters->pools[i].members;
        for (auto& v : mask.pixels()) v = v ? 255 : 0;
        offseg::png::write(base.string() + ".pool" + std::to_string(i) + ".png", mask);
      }
    }
    write_json(base.string() + ".json", offseg::sidecar_json(ctx, frame, r, pred.unknown_pixels));
    if (!r.clusters) {
      rep.warn(e.id + ": empty '" + cfg.roi_class + "' region, composite equals pooled render");
      empty_roi[static_cast<std::size_t>(&e - m.entries.data())] = 1;
    }
    return Outcome{true, {}, pred.unknown_pixels};
  });
  const auto failed = count_failed(outcomes);
  json empties = json::array();
  for (std::size_t i = 0; i < empty_roi.size(); ++i) {
    if (empty_roi[i]) empties.push_back(m.entries[i].id);
  }
  json s{{"command", "segment-post"},
         {"entries", m.entries.size()},
         {"processed", m.entries.size() - failed},
         {"empty_roi", empties},
         {"failures", failures_json(m, outcomes)}};
  write_json(cfg.output_dir / "segment_post_summary.json", s);
  rep.summary(s, "segment-post: processed " + std::to_string(m.entries.size() - failed) + " of " +
                     std::to_string(m.entries.size()) + " frame(s), " + std::to_string(empties.size()) +
                     " with an empty region, " + std::to_string(failed) + " failed\n");
  return failed ? kExitData : kExitOk;
}

int cmd_eval(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  const auto ctx = offseg::PipelineContext::load(cfg, false);
  const auto m = load_manifest_lenient(o);
  if (m.entries.empty()) throw offseg::DataError("eval: manifest has no entries");
  fs::create_directories(cfg.output_dir);
  std::vector<offseg::ConfusionMatrix> per_entry(m.entries.size(), offseg::ConfusionMatrix(ctx.pooled));
  auto outcomes = run_batch(m, cfg.jobs, rep, [&](const offseg::ManifestEntry& e) {
    require(e.ground_truth, "gt");
    require(e.prediction, "prediction");
    auto gt = ctx.pooled_ground_truth(e.ground_truth);
    auto pred = ctx.pooled_prediction(e.prediction);
    per_entry[static_cast<std::size_t>(&e - m.entries.data())].accumulate(gt.mask, pred.mask);
    return Outcome{true, {}, gt.unknown_pixels + pred.unknown_pixels};
  });
  offseg::ConfusionMatrix total(ctx.pooled);
  std::uint64_t images = 0;
  for (std::size_t i = 0; i < per_entry.size(); ++i) {
    if (!outcomes[i].ok) continue;
    total.merge(per_entry[i]);
    ++images;
  }
  const auto failed = count_failed(outcomes);
  if (images == 0) throw offseg::DataError("eval: no entry could be evaluated");
  auto report = offseg::make_report(total, cfg.policy, images, m.name.empty() ? "eval" : m.name);
  auto j = report.to_json();
  j["failures"] = failures_json(m, outcomes);
  write_json(cfg.output_dir / "eval_report.json", j);
  {
    std::ofstream table(cfg.output_dir / "eval_table.txt");
    table << report.to_table();
  }
  rep.summary(j, report.to_table() + "eval: " + std::to_string(images) + " image(s), " +
                     std::to_string(failed) + " failed, policy " + offseg::to_string(cfg.policy) + "\n");
  return failed ? kExitData : kExitOk;
}

json distribution_json(const offseg::ClassDistribution& d) {
  json classes = json::array();
  for (std::size_t c = 0; c < d.fractions.size(); ++c) {
    classes.push_back({{"class", (*d.schema)[static_cast<offseg::ClassId>(c)].name},
                       {"pixels", d.histogram.counts[c]},
                       {"fraction", d.fractions[c]}});
  }
  std::vector<double> sorted = d.fractions;
  std::sort(sorted.rbegin(), sorted.rend());
  double top4 = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(4, sorted.size()); ++i) top4 += sorted[i];
  return {{"schema", d.schema->name()},
          {"labeled_pixels", d.histogram.labeled()},
          {"ignored_pixels", d.histogram.ignored},
          {"top4_fraction", top4},
          {"classes", classes}};
}

int cmd_stats(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  const auto ctx = offseg::PipelineContext::load(cfg, false);
  const auto m = load_manifest_lenient(o);
  if (m.entries.empty()) throw offseg::DataError("stats: manifest has no entries");
  fs::create_directories(cfg.output_dir);
  std::vector<offseg::ClassHistogram> fine(m.entries.size(), offseg::ClassHistogram(ctx.fine->size()));
  std::vector<offseg::ClassHistogram> pooled(m.entries.size(), offseg::ClassHistogram(ctx.pooled->size()));
  auto outcomes = run_batch(m, cfg.jobs, rep, [&](const offseg::ManifestEntry& e) {
    require(e.ground_truth, "gt");
    auto d = offseg::load_mask(e.ground_truth, ctx.fine, offseg::MaskKind::ground_truth);
    const auto i = static_cast<std::size_t>(&e - m.entries.data());
    fine[i].add(d.mask);
    pooled[i].add(offseg::remap_mask(d.mask, *ctx.pooling));
    return Outcome{true, {}, d.unknown_pixels};
  });
  offseg::ClassHistogram fine_total(ctx.fine->size()), pooled_total(ctx.pooled->size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (!outcomes[i].ok) continue;
    fine_total.merge(fine[i]);
    pooled_total.merge(pooled[i]);
  }
  const auto failed = count_failed(outcomes);
  if (failed == m.entries.size()) throw offseg::DataError("stats: no entry could be read");
  auto fd = offseg::distribution_from(ctx.fine, fine_total);
  auto pd = offseg::distribution_from(ctx.pooled, pooled_total);
  json s{{"command", "stats"},
         {"images", m.entries.size() - failed},
         {"fine", distribution_json(fd)},
         {"pooled", distribution_json(pd)},
         {"failures", failures_json(m, outcomes)}};
  write_json(cfg.output_dir / "stats.json", s);
  std::string human = "class distribution (" + ctx.fine->name() + "):\n";
  char buf[96];
  for (std::size_t c = 0; c < fd.fractions.size(); ++c) {
    std::snprintf(buf, sizeof buf, "  %-18s %8.4f%%\n", (*ctx.fine)[static_cast<offseg::ClassId>(c)].name.c_str(),
                  fd.fractions[c] * 100.0);
    human += buf;
  }
  human += "pooled (" + ctx.pooled->name() + "):\n";
  for (std::size_t c = 0; c < pd.fractions.size(); ++c) {
    std::snprintf(buf, sizeof buf, "  %-18s %8.4f%%\n", (*ctx.pooled)[static_cast<offseg::ClassId>(c)].name.c_str(),
                  pd.fractions[c] * 100.0);
    human += buf;
  }
  rep.summary(s, human);
  return failed ? kExitData : kExitOk;
}

std::vector<offseg::LabeledSample> read_samples(const std::string& path, offseg::FeatureSet features,
                                                offseg::ColorSpace space) {
  if (fs::is_directory(path)) return offseg::samples_from_crop_directory(path, features, space);
  return offseg::load_samples_csv(path);
}

int cmd_train_classifier(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  if (o.samples.empty()) throw offseg::ConfigError("--samples is required");
  auto features = offseg::parse_feature_set(o.features);
  if (!features) throw offseg::ConfigError("--features must be 'mean' or 'mean_std'");
  auto subclasses = offseg::load_schema(cfg.subclass_schema);
  offseg::TrainOptions topt;
  topt.features = *features;
  topt.color_space = cfg.kmeans.color_space;
  topt.unknown_quantile = o.unknown_quantile;
  topt.variance_floor = o.variance_floor;
  auto samples = read_samples(o.samples, topt.features, topt.color_space);
  auto trained = offseg::train(samples, subclasses, topt);
  for (const auto& w : trained.warnings) rep.warn(w);

  fs::path model_path = cfg.output_dir / "model.json";
  if (!o.out.empty() && fs::path(o.out).extension() == ".json") model_path = o.out;
  if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
  offseg::save_model(trained.model, model_path);

  json s{{"command", "train-classifier"},
         {"model", model_path.string()},
         {"samples", samples.size()},
         {"warnings", trained.warnings},
         {"training_fit", offseg::evaluate_classifier(trained.model, samples).to_json()}};
  std::string human = "train-classifier: " + std::to_string(samples.size()) + " sample(s) -> " +
                      model_path.string() + "\n";
  if (!o.eval_samples.empty()) {
    auto held_out = read_samples(o.eval_samples, topt.features, topt.color_space);
    auto report = offseg::evaluate_classifier(trained.model, held_out);
    s["held_out"] = report.to_json();
    char buf[96];
    std::snprintf(buf, sizeof buf, "held-out: %zu sample(s), accuracy %.4f, mean accuracy %.4f\n",
                  held_out.size(), report.accuracy, report.mean_accuracy);
    human += buf;
  }
  rep.summary(s, human);
  return kExitOk;
}

int cmd_bench(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  const auto ctx = offseg::PipelineContext::load(cfg, true);
  if (o.manifest.empty()) throw offseg::ConfigError("--manifest is required");
  const auto m = offseg::load_manifest(o.manifest);
  fs::create_directories(cfg.output_dir);
  auto rec = offseg::bench(ctx, m, {cfg.repetitions, cfg.warmup, cfg.jobs});
  write_json(cfg.output_dir / "bench.json", rec.to_json());
  {
    std::ofstream csv(cfg.output_dir / "bench.csv");
    csv << rec.to_csv();
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "bench: %llu frame(s) at %zux%zu in %.3f s = %.2f fps (jobs %zu)\n",
                static_cast<unsigned long long>(rec.frames), rec.width, rec.height, rec.total_seconds,
                rec.fps(), rec.jobs);
  std::string human = buf;
  for (std::size_t i = 0; i < rec.stage_seconds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  %-9s %9.4f s\n", offseg::ThroughputRecord::kStages[i], rec.stage_seconds[i]);
    human += buf;
  }
  rep.summary(rec.to_json(), human);
  return kExitOk;
}

int cmd_validate_config(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  cfg.validate(false);
  auto dataset = offseg::load_dataset_config(cfg.fine_schema);
  if (!dataset.pooling) throw offseg::ConfigError(cfg.fine_schema.string() + ": no 'pooling' section");
  auto report = offseg::validate_pooling(*dataset.pooling);
  auto subclasses = offseg::load_schema(cfg.subclass_schema);
  json s{{"command", "validate-config"},
         {"fine_classes", dataset.schema->size()},
         {"pooling", report.to_json()},
         {"subclasses", subclasses->size()}};
  std::string human = "schema '" + dataset.schema->name() + "': " + std::to_string(dataset.schema->size()) +
                      " classes -> '" + report.target + "'\n";
  for (const auto& [name, n] : report.bucket_counts) human += "  " + name + ": " + std::to_string(n) + "\n";
  for (const auto& u : report.unmapped) human += "  unmapped: " + u + "\n";
  if (report.ok()) {
    // Loading the full context also checks the model and RoI class.
    auto ctx = offseg::PipelineContext::load(cfg, false);
    s["roi_class"] = cfg.roi_class;
    s["classifier"] = ctx.labeler ? (cfg.external_pool_labels.empty() ? "model" : "external") : "none";
  }
  rep.summary(s, human);
  return report.ok() ? kExitOk : kExitConfig;
}

int cmd_synth(const Options& o, Reporter& rep) {
  const auto cfg = resolve_config(o);
  if (o.out.empty()) throw offseg::ConfigError("--out is required");
  const std::uint64_t seed = o.seed.value_or(offseg::kDefaultSeed);
  json s{{"command", "synth"}};
  std::string human;
  if (o.frames > 0) {
    auto dataset = offseg::load_dataset_config(cfg.fine_schema);
    if (!dataset.pooling) throw offseg::ConfigError(cfg.fine_schema.string() + ": no 'pooling' section");
    offseg::synthetic::SceneOptions so;
    so.width = o.width;
    so.height = o.height;
    auto m = offseg::synthetic::write_dataset(o.out, *dataset.pooling, o.frames, seed, so);
    s["manifest"] = (fs::path(o.out) / "manifest.json").string();
    s["frames"] = m.entries.size();
    human += "synth: wrote " + std::to_string(m.entries.size()) + " scene(s) and " +
             (fs::path(o.out) / "manifest.json").string() + "\n";
  }
  if (!o.samples_out.empty()) {
    auto subclasses = offseg::load_schema(cfg.subclass_schema);
    auto samples = offseg::synthetic::seed_samples(*subclasses, o.per_class, 6.0, seed, cfg.kmeans.color_space);
    offseg::save_samples_csv(samples, o.samples_out);
    s["samples"] = o.samples_out;
    human += "synth: wrote " + std::to_string(samples.size()) + " labeled sample(s) to " + o.samples_out + "\n";
  }
  rep.summary(s, human);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offseg: off-road segmentation post-processing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Pipeline config (default: $OFFSEG_CONFIG)");
  app.add_option("--manifest", o.manifest, "Dataset manifest");
  app.add_option("--out", o.out, "Output directory (overrides output_dir)");
  app.add_option("--seed", o.seed, "K-Means seed (default 20211)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--k", o.k, "Number of color pools")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json_summary, "Print the summary as JSON on stdout");

  auto* remap = app.add_subcommand("remap", "Pool ground-truth masks into the 4-class schema");
  auto* segment = app.add_subcommand("segment-post", "Cluster, classify and compose predicted masks");
  auto* eval = app.add_subcommand("eval", "Per-class IoU and mIoU of predictions against ground truth");
  auto* stats = app.add_subcommand("stats", "Class pixel distribution of ground-truth masks");
  auto* train = app.add_subcommand("train-classifier", "Fit the sub-class color model");
  train->add_option("--samples", o.samples, "CSV of label,features... or directory of labeled crops")->required();
  train->add_option("--eval-samples", o.eval_samples, "Held-out samples to score the model on");
  train->add_option("--features", o.features, "mean | mean_std");
  train->add_option("--unknown-quantile", o.unknown_quantile, "Training-score quantile below which pools are unknown");
  train->add_option("--variance-floor", o.variance_floor, "Minimum per-feature variance");
  auto* bench = app.add_subcommand("bench", "Time the post-network pipeline");
  bench->add_option("--reps", o.repetitions, "Passes over the manifest");
  bench->add_option("--warmup", o.warmup, "Untimed warm-up frames");
  auto* validate = app.add_subcommand("validate-config", "Check a pipeline config and its pooling map");
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset and/or seed training samples");
  synth->add_option("--frames", o.frames, "Number of scenes (0 for none)");
  synth->add_option("--width", o.width, "Scene width")->check(CLI::PositiveNumber);
  synth->add_option("--height", o.height, "Scene height")->check(CLI::PositiveNumber);
  synth->add_option("--samples-out", o.samples_out, "Also write seed training samples to this CSV");
  synth->add_option("--per-class", o.per_class, "Seed samples per sub-class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Reporter rep(o.json_summary);
  try {
    if (*remap) return cmd_remap(o, rep);
    if (*segment) return cmd_segment_post(o, rep);
    if (*eval) return cmd_eval(o, rep);
    if (*stats) return cmd_stats(o, rep);
    if (*train) return cmd_train_classifier(o, rep);
    if (*bench) return cmd_bench(o, rep);
    if (*validate) return cmd_validate_config(o, rep);
    if (*synth) return cmd_synth(o, rep);
  } catch (const offseg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const offseg::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
