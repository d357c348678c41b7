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

#ifndef OFFSEG_INGEST_HPP_
#define OFFSEG_INGEST_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <cstring>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "offseg/error.hpp"
#include "offseg/png_io.hpp"
#include "offseg/raster.hpp"
#include "offseg/schema.hpp"

namespace offseg {

enum class MaskKind { ground_truth, prediction };

inline const char* to_string(MaskKind k) noexcept {
  return k == MaskKind::ground_truth ? "ground_truth" : "prediction";
}

/// Per-pixel class ids bound to a schema. Pixels hold either a valid class id
/// of `schema` or kIgnoreId.
struct LabelMask {
  Raster<ClassId> ids;
  SchemaPtr schema;
  MaskKind kind = MaskKind::ground_truth;
  std::string source_id;

  std::size_t width() const noexcept { return ids.width(); }
  std::size_t height() const noexcept { return ids.height(); }
};

struct DecodedMask {
  LabelMask mask;
  std::size_t unknown_pixels = 0;
};

/// Pixels in the schema's ignore color decode to kIgnoreId; any other
/// off-palette color does too and is counted in `unknown_pixels`.
inline DecodedMask decode_mask(const RgbRaster& image, SchemaPtr schema,
                               MaskKind kind = MaskKind::ground_truth,
                               std::string source_id = {}) {
  const auto px = image.pixels();
  std::vector<ClassId> ids(px.size());
  std::size_t unknown = 0;
  // Annotation rasters are piecewise constant, so remembering the last
  // lookup skips most hash probes.
  std::uint32_t last_color = px.empty() ? 0 : px[0].packed() ^ 1u;
  ClassId last_id = kIgnoreId;
  const std::uint32_t ignore_color = schema->ignore_color().packed();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::uint32_t c = px[i].packed();
    if (c != last_color) {
      last_color = c;
      last_id = schema->decode(px[i]);
    }
    ids[i] = last_id;
    unknown += last_id == kIgnoreId && c != ignore_color;
  }
  return {{Raster<ClassId>(image.width(), image.height(), std::move(ids)), std::move(schema), kind,
           std::move(source_id)},
          unknown};
}

inline RgbRaster encode_mask(const LabelMask& mask) {
  std::array<Rgb, 256> lut;
  for (std::size_t i = 0; i < lut.size(); ++i) lut[i] = mask.schema->encode(static_cast<ClassId>(i));
  const auto ids = mask.ids.pixels();
  std::vector<Rgb> px(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) px[i] = lut[ids[i]];
  return RgbRaster(mask.width(), mask.height(), std::move(px));
}

/// Applies the pooling map pixel-wise. The map must be total and the mask must
/// be bound to the map's source schema.
inline LabelMask remap_mask(const LabelMask& mask, const PoolingMap& map) {
  if (!(*mask.schema == map.source())) {
    throw ConfigError("remap: mask schema '" + mask.schema->name() +
                      "' does not match pooling source '" + map.source().name() + "'");
  }
  if (!map.is_total()) {
    throw ConfigError("remap: pooling map from '" + map.source().name() + "' is not total");
  }
  std::array<ClassId, 256> lut;
  lut.fill(kIgnoreId);
  for (std::size_t i = 0; i < map.source().size(); ++i) lut[i] = *map.entries()[i];
  const auto in = mask.ids.pixels();
  std::vector<ClassId> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = lut[in[i]];
  return {Raster<ClassId>(mask.width(), mask.height(), std::move(out)), map.target_ptr(), mask.kind,
          mask.source_id};
}

struct Roi {
  BinaryMask mask;
  std::size_t pixel_count = 0;
};

inline Roi extract_roi(const LabelMask& mask, ClassId class_id) {
  if (!mask.schema->valid(class_id)) {
    throw ConfigError("extract_roi: class id " + std::to_string(class_id) +
                      " is not in schema '" + mask.schema->name() + "'");
  }
  const auto ids = mask.ids.pixels();
  std::vector<std::uint8_t> bits(ids.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    bits[i] = ids[i] == class_id;
    n += bits[i];
  }
  return {BinaryMask(mask.width(), mask.height(), std::move(bits)), n};
}

/// Per-class pixel counts. Mergeable by element-wise addition.
struct ClassHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t ignored = 0;

  explicit ClassHistogram(std::size_t classes = 0) : counts(classes, 0) {}

  void add(const LabelMask& mask) {
    for (ClassId id : mask.ids.pixels()) {
      if (id < counts.size()) {
        ++counts[id];
      } else {
        ++ignored;
      }
    }
  }

  void merge(const ClassHistogram& other) {
    if (other.counts.size() != counts.size()) throw DataError("histogram size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    ignored += other.ignored;
  }

  std::uint64_t labeled() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  }
};

inline ClassHistogram histogram(const LabelMask& mask) {
  ClassHistogram h(mask.schema->size());
  h.add(mask);
  return h;
}

struct ClassDistribution {
  SchemaPtr schema;
  ClassHistogram histogram;
  /// Fractions over non-ignore pixels, in schema order. All zero when every
  /// pixel was ignored.
  std::vector<double> fractions;

  double fraction(std::string_view class_name) const {
    return fractions.at(schema->id_of(class_name));
  }
};

inline ClassDistribution distribution_from(SchemaPtr schema, ClassHistogram h) {
  ClassDistribution d{std::move(schema), std::move(h), {}};
  const auto total = d.histogram.labeled();
  d.fractions.resize(d.histogram.counts.size(), 0.0);
  if (total > 0) {
    for (std::size_t i = 0; i < d.fractions.size(); ++i) {
      d.fractions[i] = static_cast<double>(d.histogram.counts[i]) / static_cast<double>(total);
    }
  }
  return d;
}

inline ClassDistribution class_distribution(std::span<const LabelMask> masks) {
  if (masks.empty()) throw DataError("class_distribution: no masks given");
  const SchemaPtr& schema = masks.front().schema;
  ClassHistogram h(schema->size());
  for (const auto& m : masks) {
    if (!(*m.schema == *schema)) {
      throw ConfigError("class_distribution: masks are bound to different schemas ('" +
                        schema->name() + "' and '" + m.schema->name() + "')");
    }
    h.add(m);
  }
  return distribution_from(schema, std::move(h));
}

/// Loads a mask PNG. Color files are decoded through the palette; 8-bit
/// grayscale files are taken as raw class ids (values outside the schema
/// become kIgnoreId).
inline DecodedMask load_mask(const std::filesystem::path& path, SchemaPtr schema, MaskKind kind) {
  png::Image img = png::read(path);
  std::string id = path.stem().string();
  if (img.channels == 3) {
    std::vector<Rgb> px(img.width * img.height);
    std::memcpy(px.data(), img.bytes.data(), img.bytes.size());
    return decode_mask(RgbRaster(img.width, img.height, std::move(px)), std::move(schema), kind,
                       std::move(id));
  }
  std::size_t unknown = 0;
  for (auto& v : img.bytes) {
    if (!schema->valid(v)) {
      v = kIgnoreId;
      ++unknown;
    }
  }
  return {{Raster<ClassId>(img.width, img.height, std::move(img.bytes)), std::move(schema), kind,
           std::move(id)},
          unknown};
}

inline void save_mask(const std::filesystem::path& path, const LabelMask& mask) {
  png::write(path, encode_mask(mask));
}

inline void save_id_mask(const std::filesystem::path& path, const LabelMask& mask) {
  png::write(path, mask.ids);
}

}  // namespace offseg

#endif  // OFFSEG_INGEST_HPP_
