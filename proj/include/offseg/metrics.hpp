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

// Confusion-matrix segmentation metrics.
//
// For class c: TP = counts[c][c], FP = column sum - TP, FN = row sum - TP
// (plus pixels of class c whose prediction was the ignore id), and
// IoU = TP / (TP + FP + FN). mIoU is the mean IoU over the classes included
// by the undefined-IoU policy. Counts stay integral; ratios are formed only
// when reporting.

#ifndef OFFSEG_METRICS_HPP_
#define OFFSEG_METRICS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "offseg/error.hpp"
#include "offseg/ingest.hpp"
#include "offseg/schema.hpp"

namespace offseg {

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(SchemaPtr schema)
      : schema_(std::move(schema)),
        n_(schema_->size()),
        counts_(n_ * n_, 0),
        unlabeled_predictions_(n_, 0) {}

  const ClassSchema& schema() const noexcept { return *schema_; }
  const SchemaPtr& schema_ptr() const noexcept { return schema_; }
  std::size_t classes() const noexcept { return n_; }

  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
  std::uint64_t& at(std::size_t truth, std::size_t predicted) { return counts_[truth * n_ + predicted]; }

  /// Pixels whose ground truth was the ignore id.
  std::uint64_t ignored_pixels() const noexcept { return ignored_; }
  /// Per true class: pixels predicted as the ignore id. They count as misses.
  std::uint64_t unlabeled_predictions(std::size_t truth) const { return unlabeled_predictions_.at(truth); }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
  }
  std::uint64_t evaluated_pixels() const noexcept {
    std::uint64_t t = total() + ignored_;
    for (auto u : unlabeled_predictions_) t += u;
    return t;
  }

  std::uint64_t true_positives(std::size_t c) const { return at(c, c); }
  std::uint64_t false_positives(std::size_t c) const {
    std::uint64_t col = 0;
    for (std::size_t t = 0; t < n_; ++t) col += at(t, c);
    return col - at(c, c);
  }
  std::uint64_t false_negatives(std::size_t c) const {
    std::uint64_t row = 0;
    for (std::size_t p = 0; p < n_; ++p) row += at(c, p);
    return row - at(c, c) + unlabeled_predictions_[c];
  }

  void accumulate(const LabelMask& gt, const LabelMask& pred) {
    if (!(*gt.schema == *schema_) || !(*pred.schema == *schema_)) {
      throw ConfigError("accumulate: masks must use schema '" + schema_->name() + "' (got '" +
                        gt.schema->name() + "' and '" + pred.schema->name() + "')");
    }
    require_same_shape(gt.ids, pred.ids, "accumulate");
    const auto g = gt.ids.pixels();
    const auto p = pred.ids.pixels();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] >= n_) {
        ++ignored_;
      } else if (p[i] >= n_) {
        ++unlabeled_predictions_[g[i]];
      } else {
        ++counts_[g[i] * n_ + p[i]];
      }
    }
  }

  void merge(const ConfusionMatrix& other) {
    if (!(*other.schema_ == *schema_)) throw ConfigError("merge: confusion matrices use different schemas");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    for (std::size_t i = 0; i < n_; ++i) unlabeled_predictions_[i] += other.unlabeled_predictions_[i];
    ignored_ += other.ignored_;
  }

  friend bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return *a.schema_ == *b.schema_ && a.counts_ == b.counts_ && a.ignored_ == b.ignored_ &&
           a.unlabeled_predictions_ == b.unlabeled_predictions_;
  }

 private:
  SchemaPtr schema_;
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> unlabeled_predictions_;
  std::uint64_t ignored_ = 0;
};

inline ConfusionMatrix accumulate(ConfusionMatrix matrix, const LabelMask& gt, const LabelMask& pred) {
  matrix.accumulate(gt, pred);
  return matrix;
}

/// TP / (TP + FP + FN); nullopt when the class appears in neither ground truth
/// nor prediction.
inline std::optional<double> iou(const ConfusionMatrix& m, std::size_t c) {
  if (c >= m.classes()) throw ConfigError("iou: class id " + std::to_string(c) + " out of range");
  const auto tp = m.true_positives(c);
  const auto denom = tp + m.false_positives(c) + m.false_negatives(c);
  if (denom == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

enum class UndefinedPolicy { skip_undefined, count_as_zero };

inline const char* to_string(UndefinedPolicy p) noexcept {
  return p == UndefinedPolicy::skip_undefined ? "skip_undefined" : "count_as_zero";
}

inline std::optional<UndefinedPolicy> parse_undefined_policy(std::string_view s) {
  if (s == "skip_undefined") return UndefinedPolicy::skip_undefined;
  if (s == "count_as_zero") return UndefinedPolicy::count_as_zero;
  return std::nullopt;
}

struct MeanIou {
  double value = 0.0;
  UndefinedPolicy policy = UndefinedPolicy::skip_undefined;
  std::size_t classes_included = 0;
};

inline MeanIou miou(const ConfusionMatrix& m, UndefinedPolicy policy = UndefinedPolicy::skip_undefined) {
  double sum = 0.0;
  std::size_t included = 0;
  bool any_defined = false;
  for (std::size_t c = 0; c < m.classes(); ++c) {
    if (auto z = iou(m, c)) {
      sum += *z;
      ++included;
      any_defined = true;
    } else if (policy == UndefinedPolicy::count_as_zero) {
      ++included;
    }
  }
  if (!any_defined) throw DataError("miou: IoU is undefined for every class");
  return {sum / static_cast<double>(included), policy, included};
}

/// Wall-clock totals per pipeline stage.
struct ThroughputRecord {
  static constexpr std::array<const char*, 7> kStages = {"io", "decode", "remap", "cluster",
                                                         "classify", "compose", "evaluate"};
  std::array<double, kStages.size()> stage_seconds{};
  double total_seconds = 0.0;
  std::uint64_t frames = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t jobs = 1;
  std::size_t warmup_frames = 0;

  double fps() const noexcept { return total_seconds > 0.0 ? static_cast<double>(frames) / total_seconds : 0.0; }
  double stage_sum() const noexcept {
    double s = 0.0;
    for (double v : stage_seconds) s += v;
    return s;
  }
  double& stage(std::string_view name) {
    for (std::size_t i = 0; i < kStages.size(); ++i) {
      if (name == kStages[i]) return stage_seconds[i];
    }
    throw ConfigError("unknown stage '" + std::string(name) + "'");
  }

  nlohmann::json to_json() const {
    nlohmann::json stages = nlohmann::json::object();
    for (std::size_t i = 0; i < kStages.size(); ++i) stages[kStages[i]] = stage_seconds[i];
    return {{"frames", frames},
            {"total_seconds", total_seconds},
            {"fps", fps()},
            {"stage_seconds", stages},
            {"stage_sum_seconds", stage_sum()},
            {"resolution", {width, height}},
            {"jobs", jobs},
            {"warmup_frames", warmup_frames}};
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "frames,width,height,jobs,total_seconds,fps";
    for (const char* s : kStages) out << ',' << s << "_seconds";
    out << '\n' << frames << ',' << width << ',' << height << ',' << jobs << ',' << total_seconds << ',' << fps();
    for (double v : stage_seconds) out << ',' << v;
    out << '\n';
    return out.str();
  }
};

struct EvalReport {
  std::string label;
  std::vector<std::pair<std::string, std::optional<double>>> per_class_iou;
  MeanIou mean;
  ConfusionMatrix matrix;
  std::uint64_t image_count = 0;
  std::optional<ThroughputRecord> timing;

  nlohmann::json to_json() const {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& [name, z] : per_class_iou) {
      per_class.push_back({{"class", name}, {"iou", z ? nlohmann::json(*z) : nlohmann::json(nullptr)}});
    }
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t t = 0; t < matrix.classes(); ++t) {
      std::vector<std::uint64_t> row;
      for (std::size_t p = 0; p < matrix.classes(); ++p) row.push_back(matrix.at(t, p));
      rows.push_back(row);
    }
    std::vector<std::uint64_t> unlabeled;
    for (std::size_t t = 0; t < matrix.classes(); ++t) unlabeled.push_back(matrix.unlabeled_predictions(t));
    nlohmann::json j{{"label", label},
                     {"schema", matrix.schema().name()},
                     {"images", image_count},
                     {"policy", to_string(mean.policy)},
                     {"miou", mean.value},
                     {"classes_in_mean", mean.classes_included},
                     {"per_class", per_class},
                     {"confusion", {{"rows", rows},
                                    {"ignored_pixels", matrix.ignored_pixels()},
                                    {"unlabeled_predictions", unlabeled}}}};
    if (timing) j["timing"] = timing->to_json();
    return j;
  }

  /// Plain-text table: one column per class IoU plus mIoU, as percentages.
  std::string to_table() const {
    std::vector<std::string> head{"Model"};
    std::vector<std::string> row{label.empty() ? std::string("-") : label};
    char buf[32];
    for (const auto& [name, z] : per_class_iou) {
      head.push_back(name);
      if (z) {
        std::snprintf(buf, sizeof buf, "%.2f%%", *z * 100.0);
        row.emplace_back(buf);
      } else {
        row.emplace_back("n/a");
      }
    }
    head.emplace_back("mIoU");
    std::snprintf(buf, sizeof buf, "%.2f%%", mean.value * 100.0);
    row.emplace_back(buf);
    std::ostringstream out;
    std::string rule = "+";
    std::vector<std::size_t> width(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) {
      width[i] = std::max(head[i].size(), row[i].size()) + 2;
      rule += std::string(width[i], '-') + "+";
    }
    auto line = [&](const std::vector<std::string>& cells) {
      out << '|';
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto pad = width[i] - cells[i].size() - 1;
        if (i == 0) {
          out << ' ' << cells[i] << std::string(pad, ' ') << '|';
        } else {
          out << std::string(pad, ' ') << cells[i] << ' ' << '|';
        }
      }
      out << '\n';
    };
    out << rule << '\n';
    line(head);
    out << rule << '\n';
    line(row);
    out << rule << '\n';
    return out.str();
  }
};

inline EvalReport make_report(const ConfusionMatrix& m, UndefinedPolicy policy, std::uint64_t images,
                              std::string label = {}) {
  EvalReport r{std::move(label), {}, miou(m, policy), m, images, std::nullopt};
  for (std::size_t c = 0; c < m.classes(); ++c) {
    r.per_class_iou.emplace_back(m.schema()[static_cast<ClassId>(c)].name, iou(m, c));
  }
  return r;
}

}  // namespace offseg

#endif  // OFFSEG_METRICS_HPP_
