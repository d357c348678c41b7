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

// Shared fixtures for the unit and acceptance suites.

#ifndef OFFSEG_TESTS_FIXTURES_HPP_
#define OFFSEG_TESTS_FIXTURES_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "offseg/offseg.hpp"

namespace offseg::testing {

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(OFFSEG_CONFIG_DIR) / name;
}

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(OFFSEG_TEST_DATA_DIR) / name;
}

inline SchemaPtr offseg4() { return load_schema(config_path("offseg4.json")); }
inline SchemaPtr subclasses() { return load_schema(config_path("subclasses.json")); }
inline PoolingMap rellis_pooling() { return *load_dataset_config(config_path("rellis3d.json")).pooling; }

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("offseg-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline LabelMask make_mask(SchemaPtr schema, std::size_t w, std::size_t h, std::vector<ClassId> ids,
                           MaskKind kind = MaskKind::ground_truth) {
  return {Raster<ClassId>(w, h, std::move(ids)), std::move(schema), kind, {}};
}

// Three-band fixture: a 12x8 frame whose pooled prediction has two sky rows,
// one row split between obstacle (left half) and non-traversable (right
// half), and five traversable rows painted in three vertical 4-pixel bands
// of the grass, mud and puddle surface colors.
namespace three_band {

inline constexpr std::size_t kWidth = 12;
inline constexpr std::size_t kHeight = 8;
inline constexpr std::size_t kBandWidth = 4;
inline constexpr std::size_t kGroundRow = 3;

inline Rgb frame_color(std::size_t x, std::size_t y) {
  if (y < 2) return {150, 190, 230};
  if (y == 2) return x < 6 ? Rgb{30, 70, 30} : Rgb{80, 110, 60};
  static const Rgb bands[3] = {{70, 120, 50}, {95, 75, 55}, {120, 150, 160}};
  return bands[x / kBandWidth];
}

inline Frame frame() {
  RgbRaster px(kWidth, kHeight);
  for (std::size_t y = 0; y < kHeight; ++y) {
    for (std::size_t x = 0; x < kWidth; ++x) px.at(x, y) = frame_color(x, y);
  }
  return {std::move(px), "three_band"};
}

/// Pooled prediction over the offseg4 schema.
inline LabelMask prediction(const SchemaPtr& pooled) {
  const ClassId sky = pooled->id_of("sky"), trav = pooled->id_of("traversable"),
                non = pooled->id_of("non-traversable"), obst = pooled->id_of("obstacle");
  Raster<ClassId> ids(kWidth, kHeight);
  for (std::size_t y = 0; y < kHeight; ++y) {
    for (std::size_t x = 0; x < kWidth; ++x) {
      ids.at(x, y) = y < 2 ? sky : (y == 2 ? (x < 6 ? obst : non) : trav);
    }
  }
  return {std::move(ids), pooled, MaskKind::prediction, "three_band"};
}

/// Expected composite, written out color by color: pooled palette above the
/// ground row, sub-class palette colors for the three bands.
inline RgbRaster expected_composite() {
  RgbRaster px(kWidth, kHeight);
  const Rgb sky{70, 130, 180}, obstacle{220, 20, 60}, non_traversable{107, 142, 35};
  const Rgb grass{0, 102, 0}, mud{99, 66, 34}, puddle{134, 255, 239};
  for (std::size_t y = 0; y < kHeight; ++y) {
    for (std::size_t x = 0; x < kWidth; ++x) {
      Rgb c;
      if (y < 2) {
        c = sky;
      } else if (y == 2) {
        c = x < 6 ? obstacle : non_traversable;
      } else {
        c = x < 4 ? grass : (x < 8 ? mud : puddle);
      }
      px.at(x, y) = c;
    }
  }
  return px;
}

inline constexpr const char* kGoldenFile = "three_band_composite.png";

}  // namespace three_band

/// Sub-class model trained on samples spread around the synthetic surface
/// colors, which include the three band colors.
inline SubClassModel seed_model(const SchemaPtr& subs, std::uint64_t seed = 7) {
  auto samples = synthetic::seed_samples(*subs, 30, 3.0, seed);
  return train(samples, subs).model;
}

/// Pipeline config pointing at the shipped schemas and the given model.
inline PipelineConfig pipeline_config(const std::filesystem::path& model, const std::filesystem::path& out) {
  PipelineConfig cfg;
  cfg.fine_schema = config_path("rellis3d.json");
  cfg.subclass_schema = config_path("subclasses.json");
  cfg.classifier_model = model;
  cfg.output_dir = out;
  cfg.kmeans.k = 3;
  return cfg;
}

inline std::string read_text(const std::filesystem::path& p) {
  auto b = read_bytes(p);
  return {b.begin(), b.end()};
}

#ifdef OFFSEG_CLI_PATH
struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

/// Runs the offseg binary with `args` (already shell-quoted), capturing
/// stdout and stderr through files in `scratch`.
inline CliResult run_cli(const std::string& args, const std::filesystem::path& scratch,
                         const std::string& env = {}) {
  const auto out = scratch / "cli.stdout", err = scratch / "cli.stderr";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" OFFSEG_CLI_PATH "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}
#endif

/// Writes the three-band frame and prediction, a trained model, a manifest
/// and a pipeline config under `dir`. Returns the config path.
inline std::filesystem::path write_three_band_case(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "preds");
  auto pooled = offseg4();
  png::write(dir / "images/three_band.png", three_band::frame().pixels);
  save_mask(dir / "preds/three_band.png", three_band::prediction(pooled));
  save_model(seed_model(subclasses()), dir / "model.json");
  write_text(dir / "manifest.json",
             R"({"name": "three-band", "entries": [{"frame": "images/three_band.png", "pred": "preds/three_band.png"}]})");
  nlohmann::json cfg{{"fine_schema", config_path("rellis3d.json").string()},
                     {"subclass_schema", config_path("subclasses.json").string()},
                     {"classifier_model", "model.json"},
                     {"kmeans", {{"k", 3}}},
                     {"output_dir", "out"}};
  write_text(dir / "pipeline.json", cfg.dump(2));
  return dir / "pipeline.json";
}

}  // namespace offseg::testing

#endif  // OFFSEG_TESTS_FIXTURES_HPP_
