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

// Sub-class classification of color pools.
//
// Each sub-class is modelled as an axis-aligned Gaussian over a pool feature
// vector (pool mean color, optionally followed by the per-channel standard
// deviation). A pool is assigned the class maximizing
//
//   log N(x | mean_c, diag(variance_c)) + log prior_c
//
// with ties going to the lower class id. Confidence is the normalized
// posterior of the winning class. A pool whose winning log-likelihood falls
// below that class's threshold (a low quantile of its training scores) is
// reported as "unknown".

#ifndef OFFSEG_CLASSIFY_HPP_
#define OFFSEG_CLASSIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "offseg/color_space.hpp"
#include "offseg/error.hpp"
#include "offseg/kmeans.hpp"
#include "offseg/png_io.hpp"
#include "offseg/schema.hpp"

namespace offseg {

enum class FeatureSet { mean, mean_std };

inline const char* to_string(FeatureSet f) noexcept { return f == FeatureSet::mean ? "mean" : "mean_std"; }

inline std::optional<FeatureSet> parse_feature_set(std::string_view s) {
  if (s == "mean") return FeatureSet::mean;
  if (s == "mean_std") return FeatureSet::mean_std;
  return std::nullopt;
}

inline std::size_t feature_dim(FeatureSet f) noexcept { return f == FeatureSet::mean ? 3 : 6; }

inline std::vector<double> feature_vector(const ColorStats& s, FeatureSet f) {
  std::vector<double> v(s.mean.begin(), s.mean.end());
  if (f == FeatureSet::mean_std) {
    for (double var : s.variance) v.push_back(std::sqrt(var));
  }
  return v;
}

struct SubClassLabel {
  std::string name = "unknown";
  int id = -1;

  bool known() const noexcept { return id >= 0; }
  static SubClassLabel unknown() { return {}; }
  friend bool operator==(const SubClassLabel&, const SubClassLabel&) = default;
};

struct LabeledSample {
  std::vector<double> features;
  std::string label;
};

struct ClassSignature {
  std::vector<double> mean;
  std::vector<double> variance;
  double prior = 0.0;
  std::uint64_t samples = 0;
  /// Log-likelihoods below this mark a query as "unknown".
  double unknown_threshold = -std::numeric_limits<double>::infinity();
};

struct TrainOptions {
  FeatureSet features = FeatureSet::mean;
  ColorSpace color_space = ColorSpace::rgb;
  double variance_floor = 1e-4;
  double unknown_quantile = 0.001;
};

class SubClassModel {
 public:
  static constexpr int kFormatVersion = 1;

  SubClassModel() = default;
  SubClassModel(SchemaPtr schema, std::vector<ClassSignature> signatures, TrainOptions options,
                std::uint64_t training_samples)
      : schema_(std::move(schema)),
        signatures_(std::move(signatures)),
        options_(options),
        training_samples_(training_samples) {
    if (!schema_ || signatures_.size() != schema_->size()) {
      throw ConfigError("sub-class model needs one signature per sub-class");
    }
    const std::size_t dim = feature_dim(options_.features);
    for (std::size_t c = 0; c < signatures_.size(); ++c) {
      const auto& s = signatures_[c];
      if (s.mean.size() != dim || s.variance.size() != dim) {
        throw ConfigError("signature of '" + (*schema_)[static_cast<ClassId>(c)].name +
                          "' has the wrong dimension");
      }
      for (double v : s.variance) {
        if (!(v > 0.0)) {
          throw ConfigError("signature of '" + (*schema_)[static_cast<ClassId>(c)].name +
                            "' has a non-positive variance");
        }
      }
      if (!(s.prior > 0.0)) {
        throw ConfigError("signature of '" + (*schema_)[static_cast<ClassId>(c)].name +
                          "' has a non-positive prior");
      }
    }
  }

  bool trained() const noexcept { return schema_ != nullptr; }
  const ClassSchema& schema() const {
    require_trained();
    return *schema_;
  }
  const SchemaPtr& schema_ptr() const noexcept { return schema_; }
  std::span<const ClassSignature> signatures() const noexcept { return signatures_; }
  const TrainOptions& options() const noexcept { return options_; }
  FeatureSet features() const noexcept { return options_.features; }
  ColorSpace color_space() const noexcept { return options_.color_space; }
  std::uint64_t training_samples() const noexcept { return training_samples_; }
  std::size_t size() const noexcept { return signatures_.size(); }

  double log_likelihood(std::size_t c, std::span<const double> x) const {
    const auto& s = signatures_.at(c);
    double ll = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double diff = x[d] - s.mean[d];
      ll -= 0.5 * (std::log(2.0 * std::numbers::pi * s.variance[d]) + diff * diff / s.variance[d]);
    }
    return ll;
  }

  void require_trained() const {
    if (!trained()) throw ConfigError("sub-class model is not trained");
  }

 private:
  SchemaPtr schema_;
  std::vector<ClassSignature> signatures_;
  TrainOptions options_;
  std::uint64_t training_samples_ = 0;
};

struct TrainResult {
  SubClassModel model;
  std::vector<std::string> warnings;
};

namespace detail {

inline void check_features(std::span<const double> x, std::size_t dim, const std::string& where) {
  if (x.size() != dim) {
    throw DataError(where + ": expected " + std::to_string(dim) + " features, got " +
                    std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError(where + ": non-finite feature value");
  }
}

}  // namespace detail

/// Fits one signature per sub-class of `schema`: per-dimension mean and
/// population variance of that class's samples (variance floored at
/// options.variance_floor), and prior = class frequency.
inline TrainResult train(std::span<const LabeledSample> samples, SchemaPtr schema,
                         const TrainOptions& options = {}) {
  if (!schema) throw ConfigError("train: no sub-class schema");
  if (!(options.variance_floor > 0.0)) throw ConfigError("train: variance_floor must be > 0");
  if (!(options.unknown_quantile >= 0.0 && options.unknown_quantile <= 1.0)) {
    throw ConfigError("train: unknown_quantile must be in [0, 1]");
  }
  const std::size_t dim = feature_dim(options.features);
  const std::size_t classes = schema->size();
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto id = schema->find(samples[i].label);
    if (!id) {
      throw ConfigError("train: sample " + std::to_string(i) + " has label '" + samples[i].label +
                        "' not in sub-class schema '" + schema->name() + "'");
    }
    detail::check_features(samples[i].features, dim, "train: sample " + std::to_string(i));
    members[*id].push_back(i);
  }
  std::string empty;
  for (std::size_t c = 0; c < classes; ++c) {
    if (members[c].empty()) empty += (empty.empty() ? "" : ", ") + (*schema)[static_cast<ClassId>(c)].name;
  }
  if (!empty.empty()) throw DataError("train: no samples for sub-class(es): " + empty);

  TrainResult result;
  std::vector<ClassSignature> sigs(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    auto& s = sigs[c];
    const double n = static_cast<double>(members[c].size());
    s.samples = members[c].size();
    s.prior = n / static_cast<double>(samples.size());
    s.mean.assign(dim, 0.0);
    s.variance.assign(dim, 0.0);
    for (std::size_t i : members[c]) {
      for (std::size_t d = 0; d < dim; ++d) s.mean[d] += samples[i].features[d];
    }
    for (double& m : s.mean) m /= n;
    for (std::size_t i : members[c]) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = samples[i].features[d] - s.mean[d];
        s.variance[d] += diff * diff;
      }
    }
    bool floored = false;
    for (double& v : s.variance) {
      v /= n;
      if (v < options.variance_floor) {
        v = options.variance_floor;
        floored = true;
      }
    }
    if (floored) {
      result.warnings.push_back("sub-class '" + (*schema)[static_cast<ClassId>(c)].name +
                                "': variance floored to " + std::to_string(options.variance_floor) +
                                " (" + std::to_string(members[c].size()) + " sample(s))");
    }
  }
  // Thresholds need the floored variances, so they come from a provisional
  // model.
  SubClassModel provisional(schema, sigs, options, samples.size());
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<double> scores;
    for (std::size_t i : members[c]) scores.push_back(provisional.log_likelihood(c, samples[i].features));
    std::sort(scores.begin(), scores.end());
    const auto rank = static_cast<std::size_t>(
        std::floor(options.unknown_quantile * static_cast<double>(scores.size() - 1)));
    sigs[c].unknown_threshold = scores[rank];
  }
  result.model = SubClassModel(std::move(schema), std::move(sigs), options, samples.size());
  return result;
}

struct Classification {
  SubClassLabel label;
  /// Posterior of the best-scoring class, in [0, 1].
  double confidence = 0.0;
  /// Index of the best-scoring class, even when the label is "unknown".
  int best_class = -1;
  double log_likelihood = 0.0;
  std::vector<double> scores;
};

inline Classification classify_pool(const SubClassModel& model, std::span<const double> features,
                                    bool detect_unknown = true) {
  model.require_trained();
  detail::check_features(features, feature_dim(model.features()), "classify_pool");
  Classification r;
  r.scores.resize(model.size());
  std::size_t best = 0;
  for (std::size_t c = 0; c < model.size(); ++c) {
    r.scores[c] = model.log_likelihood(c, features) + std::log(model.signatures()[c].prior);
    if (r.scores[c] > r.scores[best]) best = c;
  }
  double denom = 0.0;
  for (double s : r.scores) denom += std::exp(s - r.scores[best]);
  r.confidence = std::clamp(1.0 / denom, 0.0, 1.0);
  r.best_class = static_cast<int>(best);
  r.log_likelihood = model.log_likelihood(best, features);
  if (detect_unknown && r.log_likelihood < model.signatures()[best].unknown_threshold) {
    r.label = SubClassLabel::unknown();
  } else {
    r.label = {model.schema()[static_cast<ClassId>(best)].name, static_cast<int>(best)};
  }
  return r;
}

inline Classification classify_pool(const SubClassModel& model, const ColorStats& stats,
                                    bool detect_unknown = true) {
  const auto x = feature_vector(stats, model.features());
  return classify_pool(model, x, detect_unknown);
}

struct ClassifiedPool {
  ColorPool pool;
  ColorStats stats;
  SubClassLabel label;
  double confidence = 0.0;
};

/// Labels the pools of one frame. Implementations must return one label per
/// pool, in pool order.
class PoolLabeler {
 public:
  virtual ~PoolLabeler() = default;
  virtual std::vector<Classification> label(const Frame& frame, std::span<const ColorPool> pools,
                                            std::span<const ColorStats> stats) const = 0;
};

class GaussianPoolLabeler final : public PoolLabeler {
 public:
  explicit GaussianPoolLabeler(std::shared_ptr<const SubClassModel> model, bool detect_unknown = true)
      : model_(std::move(model)), detect_unknown_(detect_unknown) {
    if (!model_) throw ConfigError("no classifier model");
    model_->require_trained();
  }

  std::vector<Classification> label(const Frame&, std::span<const ColorPool>,
                                    std::span<const ColorStats> stats) const override {
    std::vector<Classification> out;
    out.reserve(stats.size());
    for (const auto& s : stats) out.push_back(classify_pool(*model_, s, detect_unknown_));
    return out;
  }

 private:
  std::shared_ptr<const SubClassModel> model_;
  bool detect_unknown_;
};

/// Pool labels produced by an external classifier, read from a JSON file of
/// the form {"<frame id>": ["grass", "unknown", "mud", ...], ...} where the
/// n-th name labels the n-th pool of that frame.
class ExternalPoolLabels final : public PoolLabeler {
 public:
  ExternalPoolLabels(SchemaPtr schema, const std::filesystem::path& path) : schema_(std::move(schema)) {
    const auto doc = detail::read_json_file(path);
    if (!doc.is_object()) throw ConfigError(path.string() + ": expected an object keyed by frame id");
    for (const auto& [frame, names] : doc.items()) {
      if (!names.is_array()) throw ConfigError(path.string() + ": labels of '" + frame + "' must be an array");
      auto& v = labels_[frame];
      for (const auto& n : names) {
        const auto name = n.get<std::string>();
        if (name != "unknown" && !schema_->find(name)) {
          throw ConfigError(path.string() + ": '" + name + "' is not a sub-class");
        }
        v.push_back(name);
      }
    }
  }

  std::vector<Classification> label(const Frame& frame, std::span<const ColorPool> pools,
                                    std::span<const ColorStats>) const override {
    auto it = labels_.find(frame.source_id);
    if (it == labels_.end()) throw DataError("no external pool labels for frame '" + frame.source_id + "'");
    if (it->second.size() != pools.size()) {
      throw DataError("external labels for '" + frame.source_id + "' list " +
                      std::to_string(it->second.size()) + " pools, clustering produced " +
                      std::to_string(pools.size()));
    }
    std::vector<Classification> out(pools.size());
    for (std::size_t i = 0; i < pools.size(); ++i) {
      if (auto id = schema_->find(it->second[i])) {
        out[i].label = {it->second[i], *id};
        out[i].best_class = *id;
        out[i].confidence = 1.0;
      }
    }
    return out;
  }

 private:
  SchemaPtr schema_;
  std::map<std::string, std::vector<std::string>> labels_;
};

inline std::vector<ClassifiedPool> classify_pools(const PoolLabeler& labeler,
                                                  const std::vector<ColorPool>& pools,
                                                  const Frame& frame) {
  std::vector<ColorStats> stats;
  stats.reserve(pools.size());
  for (const auto& p : pools) stats.push_back(pool_stats(p, frame));
  auto labels = labeler.label(frame, pools, stats);
  if (labels.size() != pools.size()) throw DataError("labeler returned the wrong number of labels");
  std::vector<ClassifiedPool> out;
  out.reserve(pools.size());
  for (std::size_t i = 0; i < pools.size(); ++i) {
    out.push_back({pools[i], stats[i], std::move(labels[i].label), labels[i].confidence});
  }
  return out;
}

inline std::vector<ClassifiedPool> classify_pools(const SubClassModel& model,
                                                  const std::vector<ColorPool>& pools,
                                                  const Frame& frame, bool detect_unknown = true) {
  model.require_trained();
  std::vector<ClassifiedPool> out;
  out.reserve(pools.size());
  for (const auto& p : pools) {
    auto stats = pool_stats(p, frame);
    auto c = classify_pool(model, stats, detect_unknown);
    out.push_back({p, stats, std::move(c.label), c.confidence});
  }
  return out;
}

struct ClassifierReport {
  std::vector<std::string> classes;
  /// rows = true class, columns = predicted class, last column = unknown.
  std::vector<std::vector<std::uint64_t>> confusion;
  std::vector<double> precision;  // NaN when the class was never predicted
  std::vector<double> recall;     // NaN when the class has no samples
  double accuracy = 0.0;
  /// Mean of per-class recall over classes with samples.
  double mean_accuracy = 0.0;
  std::uint64_t samples = 0;

  nlohmann::json to_json() const {
    auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    nlohmann::json per_class = nlohmann::json::array();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      per_class.push_back({{"class", classes[c]}, {"precision", num(precision[c])},
                           {"recall", num(recall[c])}, {"row", confusion[c]}});
    }
    return {{"samples", samples}, {"accuracy", accuracy}, {"mean_accuracy", mean_accuracy},
            {"per_class", per_class}};
  }
};

inline ClassifierReport evaluate_classifier(const SubClassModel& model,
                                            std::span<const LabeledSample> samples,
                                            bool detect_unknown = true) {
  model.require_trained();
  if (samples.empty()) throw DataError("evaluate_classifier: no samples");
  const std::size_t n = model.size();
  ClassifierReport r;
  for (const auto& c : model.schema().classes()) r.classes.push_back(c.name);
  r.confusion.assign(n, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto truth = model.schema().find(samples[i].label);
    if (!truth) {
      throw ConfigError("evaluate_classifier: sample " + std::to_string(i) + " has label '" +
                        samples[i].label + "' outside the model's sub-classes");
    }
    const auto c = classify_pool(model, samples[i].features, detect_unknown);
    ++r.confusion[*truth][c.label.known() ? static_cast<std::size_t>(c.label.id) : n];
  }
  r.samples = samples.size();
  std::uint64_t correct = 0;
  double recall_sum = 0.0;
  std::size_t recall_classes = 0;
  r.precision.assign(n, std::numeric_limits<double>::quiet_NaN());
  r.recall.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < n; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t j = 0; j <= n; ++j) row += r.confusion[c][j];
    for (std::size_t i = 0; i < n; ++i) col += r.confusion[i][c];
    const auto tp = r.confusion[c][c];
    correct += tp;
    if (col > 0) r.precision[c] = static_cast<double>(tp) / static_cast<double>(col);
    if (row > 0) {
      r.recall[c] = static_cast<double>(tp) / static_cast<double>(row);
      recall_sum += r.recall[c];
      ++recall_classes;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.samples);
  r.mean_accuracy = recall_sum / static_cast<double>(recall_classes);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json model_to_json(const SubClassModel& model) {
  model.require_trained();
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < model.size(); ++c) {
    const auto& s = model.signatures()[c];
    classes.push_back({{"name", model.schema()[static_cast<ClassId>(c)].name},
                       {"mean", s.mean},
                       {"variance", s.variance},
                       {"prior", s.prior},
                       {"samples", s.samples},
                       {"unknown_threshold", s.unknown_threshold}});
  }
  return {{"format", "offseg-subclass-model"},
          {"version", SubClassModel::kFormatVersion},
          {"color_space", to_string(model.color_space())},
          {"features", to_string(model.features())},
          {"variance_floor", model.options().variance_floor},
          {"unknown_quantile", model.options().unknown_quantile},
          {"training_samples", model.training_samples()},
          {"schema", schema_to_json(model.schema())},
          {"signatures", std::move(classes)}};
}

inline SubClassModel model_from_json(const nlohmann::json& doc, const std::string& origin = "model") {
  try {
    if (doc.value("format", std::string{}) != "offseg-subclass-model") {
      throw ConfigError(origin + ": not an offseg sub-class model");
    }
    if (doc.at("version").get<int>() != SubClassModel::kFormatVersion) {
      throw ConfigError(origin + ": unsupported model version " + doc.at("version").dump());
    }
    TrainOptions opt;
    auto cs = parse_color_space(doc.at("color_space").get<std::string>());
    auto fs = parse_feature_set(doc.at("features").get<std::string>());
    if (!cs || !fs) throw ConfigError(origin + ": bad color_space or features");
    opt.color_space = *cs;
    opt.features = *fs;
    opt.variance_floor = doc.at("variance_floor").get<double>();
    opt.unknown_quantile = doc.at("unknown_quantile").get<double>();
    auto schema = std::make_shared<const ClassSchema>(parse_schema(doc.at("schema"), origin + ": schema"));
    const auto& js = doc.at("signatures");
    if (js.size() != schema->size()) throw ConfigError(origin + ": signature count does not match schema");
    std::vector<ClassSignature> sigs;
    for (std::size_t c = 0; c < js.size(); ++c) {
      if (js[c].at("name").get<std::string>() != (*schema)[static_cast<ClassId>(c)].name) {
        throw ConfigError(origin + ": signature " + std::to_string(c) + " is out of schema order");
      }
      ClassSignature s;
      s.mean = js[c].at("mean").get<std::vector<double>>();
      s.variance = js[c].at("variance").get<std::vector<double>>();
      s.prior = js[c].at("prior").get<double>();
      s.samples = js[c].at("samples").get<std::uint64_t>();
      const auto& t = js[c].at("unknown_threshold");
      s.unknown_threshold = t.is_null() ? -std::numeric_limits<double>::infinity() : t.get<double>();
      sigs.push_back(std::move(s));
    }
    return SubClassModel(std::move(schema), std::move(sigs), opt,
                         doc.at("training_samples").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline void save_model(const SubClassModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << model_to_json(model).dump(2) << '\n';
}

inline SubClassModel load_model(const std::filesystem::path& path) {
  return model_from_json(detail::read_json_file(path), path.string());
}

/// Training samples as text rows `label,f0,f1,...`. Blank lines and lines
/// starting with '#' are skipped.
inline std::vector<LabeledSample> parse_samples_csv(std::istream& in, const std::string& origin) {
  std::vector<LabeledSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::stringstream row(line);
    std::string cell;
    LabeledSample s;
    bool first_cell = true;
    while (std::getline(row, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1);
      if (first_cell) {
        s.label = cell;
        first_cell = false;
        continue;
      }
      try {
        std::size_t used = 0;
        s.features.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw DataError(origin + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (s.label.empty() || s.features.empty()) {
      throw DataError(origin + ":" + std::to_string(lineno) + ": expected label,f0,f1,...");
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<LabeledSample> load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_samples_csv(in, path.string());
}

inline void save_samples_csv(std::span<const LabeledSample> samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.precision(17);
  for (const auto& s : samples) {
    out << s.label;
    for (double f : s.features) out << ',' << f;
    out << '\n';
  }
}

/// Builds samples from a directory of labeled crops: every PNG under
/// `root/<label>/` contributes the color statistics of all its pixels.
inline std::vector<LabeledSample> samples_from_crop_directory(const std::filesystem::path& root,
                                                              FeatureSet features,
                                                              ColorSpace space) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DataError("'" + root.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file() && de.path().extension() == ".png") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LabeledSample> out;
  for (const auto& f : files) {
    const auto rel = f.lexically_relative(root);
    if (std::distance(rel.begin(), rel.end()) < 2) continue;
    Frame crop = png::read_frame(f);
    ColorPool whole;
    whole.color_space = space;
    whole.members = BinaryMask(crop.width(), crop.height(), 1);
    whole.count = crop.pixels.size();
    out.push_back({feature_vector(pool_stats(whole, crop), features), rel.begin()->string()});
  }
  return out;
}

}  // namespace offseg

#endif  // OFFSEG_CLASSIFY_HPP_
