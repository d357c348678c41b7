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

// Dataset manifests.
//
// A manifest is a JSON file:
//
//   {
//     "name": "rellis3d",                                   (optional)
//     "entries": [
//       {"id": "frame000104",                               (optional, default: frame stem)
//        "frame": "images/frame000104.png",
//        "gt": "labels/frame000104.png",                    (optional for segment-post)
//        "pred": "preds/frame000104.png",                   (optional)
//        "split": "train"}                                  (train | val | test, default test)
//     ]
//   }
//
// Relative paths resolve against the manifest's directory.

#ifndef OFFSEG_MANIFEST_HPP_
#define OFFSEG_MANIFEST_HPP_

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "offseg/error.hpp"
#include "offseg/schema.hpp"

namespace offseg {

enum class Split { train, val, test };

inline const char* to_string(Split s) noexcept {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "test";
}

inline std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "val" || s == "validation") return Split::val;
  if (s == "test") return Split::test;
  return std::nullopt;
}

struct ManifestEntry {
  std::string id;
  std::filesystem::path frame;
  std::filesystem::path ground_truth;  // empty when absent
  std::filesystem::path prediction;    // empty when absent
  Split split = Split::test;
};

struct MissingFile {
  std::size_t entry = 0;
  std::string field;
  std::filesystem::path path;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;

  std::array<std::size_t, 3> split_counts() const noexcept {
    std::array<std::size_t, 3> n{};
    for (const auto& e : entries) ++n[static_cast<std::size_t>(e.split)];
    return n;
  }

  std::vector<MissingFile> missing_files() const {
    std::vector<MissingFile> missing;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      auto check = [&](const char* field, const std::filesystem::path& p) {
        std::error_code ec;
        if (!p.empty() && !std::filesystem::is_regular_file(p, ec)) missing.push_back({i, field, p});
      };
      check("frame", e.frame);
      check("gt", e.ground_truth);
      check("pred", e.prediction);
    }
    return missing;
  }
};

namespace detail {

inline void check_unique_paths(const DatasetManifest& m, const std::string& origin) {
  std::set<std::filesystem::path> seen;
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    if (!seen.insert(e.frame.lexically_normal()).second) {
      throw DataError(origin + ": frame '" + e.frame.string() + "' listed more than once");
    }
    if (!ids.insert(e.id).second) {
      throw DataError(origin + ": entry id '" + e.id + "' listed more than once");
    }
  }
}

inline std::string missing_message(const std::vector<MissingFile>& missing) {
  std::string msg = std::to_string(missing.size()) + " missing file(s):";
  for (const auto& m : missing) msg += "\n  entry " + std::to_string(m.entry) + " " + m.field + ": " + m.path.string();
  return msg;
}

}  // namespace detail

inline DatasetManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base,
                                      const std::string& origin) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw DataError(origin + ": manifest needs an 'entries' array");
  }
  DatasetManifest m;
  m.name = doc.value("name", std::string{});
  auto resolve = [&](const std::string& p) -> std::filesystem::path {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
    const auto& j = doc["entries"][i];
    const std::string where = origin + ": entries[" + std::to_string(i) + "]";
    if (!j.is_object() || !j.contains("frame") || !j["frame"].is_string()) {
      throw DataError(where + ": missing string field 'frame'");
    }
    ManifestEntry e;
    try {
      e.frame = resolve(j["frame"].get<std::string>());
      e.ground_truth = resolve(j.value("gt", std::string{}));
      e.prediction = resolve(j.value("pred", std::string{}));
      e.id = j.value("id", e.frame.stem().string());
      const auto split = j.value("split", std::string("test"));
      auto s = parse_split(split);
      if (!s) throw DataError(where + ": invalid split '" + split + "'");
      e.split = *s;
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(where + ": " + ex.what());
    }
    m.entries.push_back(std::move(e));
  }
  detail::check_unique_paths(m, origin);
  return m;
}

/// Parses a manifest. With `require_files`, any referenced file that does not
/// exist is an error naming every missing path.
inline DatasetManifest load_manifest(const std::filesystem::path& path, bool require_files = true) {
  nlohmann::json doc;
  try {
    doc = detail::read_json_file(path);
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  auto m = parse_manifest(doc, path.parent_path(), path.string());
  if (require_files) {
    if (auto missing = m.missing_files(); !missing.empty()) {
      throw DataError(path.string() + ": " + detail::missing_message(missing));
    }
  }
  return m;
}

inline nlohmann::json manifest_to_json(const DatasetManifest& m, const std::filesystem::path& base) {
  auto rel = [&](const std::filesystem::path& p) {
    return p.empty() ? std::string{} : p.lexically_relative(base).generic_string();
  };
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json j{{"id", e.id}, {"frame", rel(e.frame)}, {"split", to_string(e.split)}};
    if (!e.ground_truth.empty()) j["gt"] = rel(e.ground_truth);
    if (!e.prediction.empty()) j["pred"] = rel(e.prediction);
    entries.push_back(std::move(j));
  }
  return {{"name", m.name}, {"entries", std::move(entries)}};
}

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << manifest_to_json(m, path.parent_path()).dump(2) << '\n';
}

/// Directory layout for scan_directory(). For every split directory present
/// under the root (or the root itself when none is), frames are
/// `<frames_dir>/<stem><frame_suffix>` and masks are matched by stem.
struct ScanLayout {
  std::string frames_dir = "images";
  std::string gt_dir = "labels";
  std::string pred_dir = "preds";
  std::string frame_suffix = ".png";
  std::string gt_suffix = ".png";
  std::string pred_suffix = ".png";
  Split default_split = Split::test;
};

inline DatasetManifest scan_directory(const std::filesystem::path& root,
                                      const ScanLayout& layout = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DataError("'" + root.string() + "' is not a directory");
  std::vector<std::pair<fs::path, Split>> bases;
  for (Split s : {Split::train, Split::val, Split::test}) {
    if (fs::is_directory(root / to_string(s))) bases.emplace_back(root / to_string(s), s);
  }
  if (bases.empty()) bases.emplace_back(root, layout.default_split);

  DatasetManifest m;
  m.name = root.filename().string();
  std::vector<MissingFile> missing;
  for (const auto& [base, split] : bases) {
    const fs::path frames = base / layout.frames_dir;
    if (!fs::is_directory(frames)) continue;
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(frames)) {
      const auto name = de.path().filename().string();
      if (de.is_regular_file() && name.size() > layout.frame_suffix.size() &&
          name.ends_with(layout.frame_suffix)) {
        files.push_back(de.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto name = f.filename().string();
      const auto stem = name.substr(0, name.size() - layout.frame_suffix.size());
      ManifestEntry e;
      e.id = base == root ? stem : std::string(to_string(split)) + "-" + stem;
      e.frame = f;
      e.split = split;
      e.ground_truth = base / layout.gt_dir / (stem + layout.gt_suffix);
      if (!fs::is_regular_file(e.ground_truth)) missing.push_back({m.entries.size(), "gt", e.ground_truth});
      if (!layout.pred_dir.empty()) {
        auto pred = base / layout.pred_dir / (stem + layout.pred_suffix);
        if (fs::is_regular_file(pred)) e.prediction = pred;
      }
      m.entries.push_back(std::move(e));
    }
  }
  if (!missing.empty()) throw DataError(root.string() + ": " + detail::missing_message(missing));
  return m;
}

}  // namespace offseg

#endif  // OFFSEG_MANIFEST_HPP_
