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

// Class taxonomies, palettes, and the fine-to-pooled class mapping.
//
// A schema config is a JSON document:
//
//   {
//     "name": "rellis3d",
//     "ignore_color": [255, 255, 255],        (optional, default [0,0,0])
//     "classes": [{"name": "grass", "color": [0, 102, 0]}, ...],
//     "pooled_schema": "offseg4.json",        (required when "pooling" is set)
//     "pooling": {"grass": "traversable", ...} (optional)
//   }
//
// Class ids are list positions. Id 255 is reserved for ignore/void pixels:
// colors that match no palette entry decode to it and it renders as
// `ignore_color`.

#ifndef OFFSEG_SCHEMA_HPP_
#define OFFSEG_SCHEMA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "offseg/error.hpp"
#include "offseg/raster.hpp"

namespace offseg {

using ClassId = std::uint8_t;
inline constexpr ClassId kIgnoreId = 255;
inline constexpr std::size_t kMaxClasses = 255;

struct ClassDef {
  std::string name;
  Rgb color;
  ClassId id = 0;

  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

class ClassSchema {
 public:
  ClassSchema(std::string name, const std::vector<std::pair<std::string, Rgb>>& classes,
              Rgb ignore_color = {}, std::string_view origin = "schema")
      : name_(std::move(name)), ignore_color_(ignore_color) {
    if (classes.empty()) throw ConfigError(std::string(origin) + ": schema has no classes");
    if (classes.size() > kMaxClasses) {
      throw ConfigError(std::string(origin) + ": at most " + std::to_string(kMaxClasses) +
                        " classes are supported, got " + std::to_string(classes.size()));
    }
    classes_.reserve(classes.size());
    for (const auto& [class_name, color] : classes) {
      const auto id = static_cast<ClassId>(classes_.size());
      if (class_name.empty()) {
        throw ConfigError(std::string(origin) + ": class #" + std::to_string(id) +
                          " has an empty name");
      }
      if (auto [it, fresh] = by_name_.emplace(class_name, id); !fresh) {
        throw ConfigError(std::string(origin) + ": duplicate class name '" + class_name + "'");
      }
      if (auto [it, fresh] = by_color_.emplace(color.packed(), id); !fresh) {
        throw ConfigError(std::string(origin) + ": duplicate color " + to_string(color) +
                          " on classes '" + classes_[it->second].name + "' and '" + class_name +
                          "'");
      }
      classes_.push_back({class_name, color, id});
    }
    if (auto it = by_color_.find(ignore_color_.packed()); it != by_color_.end()) {
      throw ConfigError(std::string(origin) + ": ignore color " + to_string(ignore_color_) +
                        " collides with class '" + classes_[it->second].name + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const ClassDef> classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  Rgb ignore_color() const noexcept { return ignore_color_; }

  bool valid(ClassId id) const noexcept { return id < classes_.size(); }
  const ClassDef& operator[](ClassId id) const { return classes_.at(id); }

  std::optional<ClassId> find(std::string_view class_name) const {
    auto it = by_name_.find(std::string(class_name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  ClassId id_of(std::string_view class_name) const {
    if (auto id = find(class_name)) return *id;
    throw ConfigError("schema '" + name_ + "' has no class named '" + std::string(class_name) +
                      "'");
  }

  /// Class id for a palette color, or kIgnoreId when the color is unknown.
  ClassId decode(Rgb color) const noexcept {
    auto it = by_color_.find(color.packed());
    return it == by_color_.end() ? kIgnoreId : it->second;
  }

  /// Palette color for an id; the ignore id (or any out-of-range id) maps to
  /// the ignore color.
  Rgb encode(ClassId id) const noexcept {
    return id < classes_.size() ? classes_[id].color : ignore_color_;
  }

  friend bool operator==(const ClassSchema& a, const ClassSchema& b) {
    return a.name_ == b.name_ && a.classes_ == b.classes_ && a.ignore_color_ == b.ignore_color_;
  }

 private:
  std::string name_;
  std::vector<ClassDef> classes_;
  Rgb ignore_color_;
  std::unordered_map<std::string, ClassId> by_name_;
  std::unordered_map<std::uint32_t, ClassId> by_color_;
};

using SchemaPtr = std::shared_ptr<const ClassSchema>;

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline Rgb parse_color(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + ": color must be an array [r, g, b]");
  }
  std::uint8_t c[3];
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0 || j[i].get<long long>() > 255) {
      throw ConfigError(where + ": color channels must be integers in 0..255");
    }
    c[i] = static_cast<std::uint8_t>(j[i].get<int>());
  }
  return {c[0], c[1], c[2]};
}

}  // namespace detail

inline nlohmann::json color_to_json(Rgb c) { return nlohmann::json::array({c.r, c.g, c.b}); }

inline ClassSchema parse_schema(const nlohmann::json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": schema must be a JSON object");
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ConfigError(origin + ": missing string field 'name'");
  }
  if (!doc.contains("classes") || !doc["classes"].is_array()) {
    throw ConfigError(origin + ": missing array field 'classes'");
  }
  std::vector<std::pair<std::string, Rgb>> classes;
  for (std::size_t i = 0; i < doc["classes"].size(); ++i) {
    const auto& entry = doc["classes"][i];
    const std::string where = origin + ": classes[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("color")) {
      throw ConfigError(where + ": expected {\"name\": ..., \"color\": [r, g, b]}");
    }
    classes.emplace_back(entry["name"].get<std::string>(),
                         detail::parse_color(entry["color"], where));
  }
  Rgb ignore{};
  if (doc.contains("ignore_color")) ignore = detail::parse_color(doc["ignore_color"], origin);
  return ClassSchema(doc["name"].get<std::string>(), classes, ignore, origin);
}

inline nlohmann::json schema_to_json(const ClassSchema& schema) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : schema.classes()) {
    classes.push_back({{"name", c.name}, {"color", color_to_json(c.color)}});
  }
  return {{"name", schema.name()},
          {"ignore_color", color_to_json(schema.ignore_color())},
          {"classes", std::move(classes)}};
}

inline SchemaPtr load_schema(const std::filesystem::path& path) {
  return std::make_shared<const ClassSchema>(parse_schema(detail::read_json_file(path), path.string()));
}

/// Source class id -> target class id. May be partial when built from an
/// incomplete config; validate_pooling() reports the gaps and remapping
/// refuses partial maps.
class PoolingMap {
 public:
  PoolingMap(SchemaPtr source, SchemaPtr target, std::vector<std::optional<ClassId>> mapping)
      : source_(std::move(source)), target_(std::move(target)), mapping_(std::move(mapping)) {
    if (!source_ || !target_) throw ConfigError("pooling map needs both schemas");
    if (mapping_.size() != source_->size()) {
      throw ConfigError("pooling map size does not match source schema '" + source_->name() + "'");
    }
    for (const auto& m : mapping_) {
      if (m && !target_->valid(*m)) {
        throw ConfigError("pooling map references target id " + std::to_string(*m) +
                          " outside schema '" + target_->name() + "'");
      }
    }
  }

  static PoolingMap identity(SchemaPtr schema) {
    std::vector<std::optional<ClassId>> m(schema->size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<ClassId>(i);
    return PoolingMap(schema, schema, std::move(m));
  }

  /// Builds a map from {source_class_name: target_class_name}.
  static PoolingMap from_json(SchemaPtr source, SchemaPtr target, const nlohmann::json& pooling,
                              const std::string& origin = "pooling") {
    if (!pooling.is_object()) throw ConfigError(origin + ": 'pooling' must be an object");
    std::vector<std::optional<ClassId>> m(source->size());
    for (const auto& [src_name, dst] : pooling.items()) {
      auto src = source->find(src_name);
      if (!src) {
        throw ConfigError(origin + ": pooling source '" + src_name + "' is not a class of '" +
                          source->name() + "'");
      }
      if (!dst.is_string()) {
        throw ConfigError(origin + ": pooling target for '" + src_name + "' must be a string");
      }
      auto dst_id = target->find(dst.get<std::string>());
      if (!dst_id) {
        throw ConfigError(origin + ": pooling target '" + dst.get<std::string>() +
                          "' is not a class of '" + target->name() + "'");
      }
      m[*src] = *dst_id;
    }
    return PoolingMap(std::move(source), std::move(target), std::move(m));
  }

  const ClassSchema& source() const noexcept { return *source_; }
  const ClassSchema& target() const noexcept { return *target_; }
  const SchemaPtr& source_ptr() const noexcept { return source_; }
  const SchemaPtr& target_ptr() const noexcept { return target_; }
  std::span<const std::optional<ClassId>> entries() const noexcept { return mapping_; }

  bool is_total() const noexcept {
    for (const auto& m : mapping_) {
      if (!m) return false;
    }
    return true;
  }

  ClassId operator()(ClassId source_id) const {
    if (source_id == kIgnoreId) return kIgnoreId;
    if (!source_->valid(source_id)) {
      throw ConfigError("unknown source class id " + std::to_string(source_id) + " for schema '" +
                        source_->name() + "'");
    }
    const auto& m = mapping_[source_id];
    if (!m) {
      throw ConfigError("source class '" + source_->classes()[source_id].name +
                        "' has no pooling target");
    }
    return *m;
  }

 private:
  SchemaPtr source_;
  SchemaPtr target_;
  std::vector<std::optional<ClassId>> mapping_;
};

/// Pooled class id for `source_id`. The ignore id passes through unchanged.
inline ClassId pool_label(const PoolingMap& map, ClassId source_id) { return map(source_id); }

struct PoolingReport {
  std::string source;
  std::string target;
  /// (target class name, number of source classes pooled into it), in
  /// target schema order.
  std::vector<std::pair<std::string, std::size_t>> bucket_counts;
  std::vector<std::string> unmapped;

  bool ok() const noexcept { return unmapped.empty(); }

  std::size_t bucket(std::string_view target_name) const {
    for (const auto& [name, n] : bucket_counts) {
      if (name == target_name) return n;
    }
    return 0;
  }

  nlohmann::json to_json() const {
    nlohmann::json buckets = nlohmann::json::object();
    for (const auto& [name, n] : bucket_counts) buckets[name] = n;
    return {{"source", source}, {"target", target}, {"buckets", buckets},
            {"unmapped", unmapped}, {"ok", ok()}};
  }
};

inline PoolingReport validate_pooling(const PoolingMap& map) {
  PoolingReport report;
  report.source = map.source().name();
  report.target = map.target().name();
  for (const auto& c : map.target().classes()) report.bucket_counts.emplace_back(c.name, 0);
  const auto entries = map.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i]) {
      ++report.bucket_counts[*entries[i]].second;
    } else {
      report.unmapped.push_back(map.source().classes()[i].name);
    }
  }
  return report;
}

/// A dataset config: the fine schema plus, when present, its pooling map.
struct DatasetConfig {
  SchemaPtr schema;
  std::optional<PoolingMap> pooling;
};

inline DatasetConfig load_dataset_config(const std::filesystem::path& path) {
  const auto doc = detail::read_json_file(path);
  DatasetConfig cfg;
  cfg.schema = std::make_shared<const ClassSchema>(parse_schema(doc, path.string()));
  if (doc.contains("pooling")) {
    if (!doc.contains("pooled_schema") || !doc["pooled_schema"].is_string()) {
      throw ConfigError(path.string() + ": 'pooling' requires a 'pooled_schema' path");
    }
    auto target_path = path.parent_path() / doc["pooled_schema"].get<std::string>();
    cfg.pooling = PoolingMap::from_json(cfg.schema, load_schema(target_path), doc["pooling"],
                                        path.string());
  }
  return cfg;
}

}  // namespace offseg

#endif  // OFFSEG_SCHEMA_HPP_
