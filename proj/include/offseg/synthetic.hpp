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

// Deterministic synthetic off-road scenes for demos, tests, and
// benchmarking. A scene has sky on top, a tree/bush band, and a ground
// region split into grass, mud, and puddle strips. Frame colors carry
// uniform noise; the prediction is the pooled ground truth with the horizon
// shifted so it is not perfect.

#ifndef OFFSEG_SYNTHETIC_HPP_
#define OFFSEG_SYNTHETIC_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "offseg/classify.hpp"
#include "offseg/ingest.hpp"
#include "offseg/manifest.hpp"
#include "offseg/png_io.hpp"
#include "offseg/schema.hpp"

namespace offseg::synthetic {

/// Illustrative surface colors for the shipped sub-classes. Not measured
/// from any dataset.
inline const std::vector<std::pair<std::string, Rgb>>& surface_colors() {
  static const std::vector<std::pair<std::string, Rgb>> colors = {
      {"grass", {70, 120, 50}},     {"mud", {95, 75, 55}},       {"puddle", {120, 150, 160}},
      {"dirt", {140, 110, 80}},     {"asphalt", {70, 70, 75}},   {"concrete", {165, 165, 160}},
      {"sand", {210, 190, 150}},    {"gravel", {130, 125, 115}}, {"mulch", {110, 60, 30}},
      {"water", {50, 90, 130}}};
  return colors;
}

inline Rgb surface_color(const std::string& name) {
  for (const auto& [n, c] : surface_colors()) {
    if (n == name) return c;
  }
  throw ConfigError("no synthetic surface color for '" + name + "'");
}

struct SceneOptions {
  std::size_t width = 1024;
  std::size_t height = 640;
  int noise = 4;  // uniform per-channel noise amplitude, in 8-bit levels
  std::size_t prediction_shift = 3;  // rows the predicted horizon is lowered by
};

struct Scene {
  Frame frame;
  LabelMask ground_truth;  // fine schema
  LabelMask prediction;    // pooled schema
};

inline Scene make_scene(const PoolingMap& pooling, std::uint64_t seed, const SceneOptions& opt = {},
                        std::string id = "scene") {
  const auto& fine = pooling.source_ptr();
  const ClassId sky = fine->id_of("sky"), tree = fine->id_of("tree"), bush = fine->id_of("bush"),
                grass = fine->id_of("grass"), mud = fine->id_of("mud"), puddle = fine->id_of("puddle");
  std::mt19937_64 rng(seed);
  auto jitter = [&](std::size_t range) { return range == 0 ? std::size_t{0} : static_cast<std::size_t>(rng() % range); };

  const std::size_t w = opt.width, h = opt.height;
  const std::size_t horizon = h * 3 / 10 + jitter(h / 10 + 1);
  const std::size_t ground = std::min(h - 1, h / 2 + jitter(h / 10 + 1));
  const std::size_t split = w / 3 + jitter(w / 5 + 1);
  const std::size_t strip1 = w / 3 + jitter(w / 6 + 1);
  const std::size_t strip2 = std::min(w - 1, strip1 + w / 4 + jitter(w / 6 + 1));

  Raster<ClassId> ids(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      ClassId c;
      if (y < horizon) {
        c = sky;
      } else if (y < ground) {
        c = x < split ? tree : bush;
      } else {
        c = x < strip1 ? grass : (x < strip2 ? mud : puddle);
      }
      ids.at(x, y) = c;
    }
  }

  std::array<Rgb, 256> base{};
  base[sky] = {150, 190, 230};
  base[tree] = {30, 70, 30};
  base[bush] = {80, 110, 60};
  base[grass] = surface_color("grass");
  base[mud] = surface_color("mud");
  base[puddle] = surface_color("puddle");
  RgbRaster px(w, h);
  const int span = 2 * opt.noise + 1;
  auto noisy = [&](std::uint8_t v) {
    const int n = opt.noise == 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(span)) - opt.noise;
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + n, 0, 255));
  };
  for (std::size_t i = 0; i < px.size(); ++i) {
    const Rgb b = base[ids[i]];
    px[i] = {noisy(b.r), noisy(b.g), noisy(b.b)};
  }

  LabelMask gt{std::move(ids), fine, MaskKind::ground_truth, id};
  LabelMask pred = remap_mask(gt, pooling);
  pred.kind = MaskKind::prediction;
  const ClassId pooled_sky = pooling(sky);
  for (std::size_t y = horizon; y < std::min(h, horizon + opt.prediction_shift); ++y) {
    for (std::size_t x = 0; x < w; ++x) pred.ids.at(x, y) = pooled_sky;
  }
  return {{std::move(px), id}, std::move(gt), std::move(pred)};
}

/// Writes `count` scenes as images/, labels/ (fine colors), preds/ (pooled
/// colors) and a manifest.json under `dir`. Returns the manifest.
inline DatasetManifest write_dataset(const std::filesystem::path& dir, const PoolingMap& pooling,
                                     std::size_t count, std::uint64_t seed, const SceneOptions& opt = {}) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "labels");
  fs::create_directories(dir / "preds");
  DatasetManifest m;
  m.name = "synthetic";
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scene%05zu", i);
    auto scene = make_scene(pooling, seed + i, opt, name);
    ManifestEntry e;
    e.id = name;
    e.frame = dir / "images" / (std::string(name) + ".png");
    e.ground_truth = dir / "labels" / (std::string(name) + ".png");
    e.prediction = dir / "preds" / (std::string(name) + ".png");
    e.split = i % 10 < 6 ? Split::train : (i % 10 < 8 ? Split::val : Split::test);
    png::write(e.frame, scene.frame.pixels);
    save_mask(e.ground_truth, scene.ground_truth);
    save_mask(e.prediction, scene.prediction);
    m.entries.push_back(std::move(e));
  }
  save_manifest(m, dir / "manifest.json");
  return m;
}

/// Labeled samples scattered around each sub-class's surface color with a
/// Gaussian spread of `sigma_levels` 8-bit levels per channel. Features are
/// mean colors in `space`.
inline std::vector<LabeledSample> seed_samples(const ClassSchema& subclasses, std::size_t per_class,
                                               double sigma_levels, std::uint64_t seed,
                                               ColorSpace space = ColorSpace::rgb) {
  std::mt19937_64 rng(seed);
  auto gauss = [&] {
    // Box-Muller on raw engine output keeps this portable across standard
    // libraries.
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  };
  std::vector<LabeledSample> out;
  for (const auto& c : subclasses.classes()) {
    const Rgb base = surface_color(c.name);
    for (std::size_t i = 0; i < per_class; ++i) {
      auto level = [&](std::uint8_t v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v + sigma_levels * gauss()), 0L, 255L));
      };
      const Rgb px{level(base.r), level(base.g), level(base.b)};
      const Vec3 w = to_working(px, space);
      out.push_back({{w[0], w[1], w[2]}, c.name});
    }
  }
  return out;
}

}  // namespace offseg::synthetic

#endif  // OFFSEG_SYNTHETIC_HPP_
