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

#ifndef OFFSEG_COMPOSE_HPP_
#define OFFSEG_COMPOSE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "offseg/classify.hpp"
#include "offseg/error.hpp"
#include "offseg/ingest.hpp"
#include "offseg/raster.hpp"
#include "offseg/schema.hpp"

namespace offseg {

struct SubClassOverlay {
  ClassId subclass = 0;
  BinaryMask mask;
};

/// Final output: the pooled segmentation with traversable pixels recolored by
/// sub-class.
struct CompositeMask {
  LabelMask base;
  std::vector<SubClassOverlay> overlays;
  RgbRaster rendered;
};

/// Appends classified pools onto the pooled segmentation. Pools of the same
/// sub-class merge into one overlay; pools labeled "unknown" keep the base
/// color of `region_class`.
inline CompositeMask compose(const LabelMask& base, std::span<const ClassifiedPool> classified,
                             const ClassSchema& subclass_palette, ClassId region_class) {
  if (!base.schema->valid(region_class)) {
    throw ConfigError("compose: region class id " + std::to_string(region_class) +
                      " is not in schema '" + base.schema->name() + "'");
  }
  CompositeMask out{base, {}, encode_mask(base)};
  const auto ids = base.ids.pixels();
  std::vector<std::uint8_t> claimed(ids.size(), 0);
  std::vector<int> overlay_of(subclass_palette.size(), -1);

  for (std::size_t p = 0; p < classified.size(); ++p) {
    const auto& cp = classified[p];
    require_same_shape(base.ids, cp.pool.members, "compose");
    if (cp.label.known() && !subclass_palette.valid(static_cast<ClassId>(cp.label.id))) {
      throw ConfigError("compose: sub-class id " + std::to_string(cp.label.id) +
                        " has no palette entry");
    }
    const auto bits = cp.pool.members.pixels();
    SubClassOverlay* overlay = nullptr;
    if (cp.label.known()) {
      auto& slot = overlay_of[static_cast<std::size_t>(cp.label.id)];
      if (slot < 0) {
        slot = static_cast<int>(out.overlays.size());
        out.overlays.push_back({static_cast<ClassId>(cp.label.id), BinaryMask(base.width(), base.height(), 0)});
      }
      overlay = &out.overlays[static_cast<std::size_t>(slot)];
    }
    const Rgb color = cp.label.known() ? subclass_palette.encode(static_cast<ClassId>(cp.label.id))
                                       : base.schema->encode(region_class);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (!bits[i]) continue;
      if (ids[i] != region_class) {
        throw DataError("compose: pool " + std::to_string(p) + " covers pixel (" +
                        std::to_string(i % base.width()) + "," + std::to_string(i / base.width()) +
                        ") outside the '" + (*base.schema)[region_class].name + "' region");
      }
      if (claimed[i]) {
        throw DataError("compose: pools overlap at pixel (" + std::to_string(i % base.width()) +
                        "," + std::to_string(i / base.width()) + ")");
      }
      claimed[i] = 1;
      if (overlay) overlay->mask[i] = 1;
      out.rendered[i] = color;
    }
  }
  return out;
}

/// Per-pixel blend frame*(1-alpha) + rendered*alpha, rounded half-up.
inline RgbRaster overlay_on_frame(const CompositeMask& composite, const Frame& frame, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("overlay alpha must be in [0, 1]");
  require_same_shape(composite.rendered, frame.pixels, "overlay_on_frame");
  // Channel pairs only take 256*256 values; tabulate the blend once.
  std::vector<std::uint8_t> table(256 * 256);
  for (int f = 0; f < 256; ++f) {
    for (int m = 0; m < 256; ++m) {
      const double v = f + (m - f) * alpha;
      table[static_cast<std::size_t>(f * 256 + m)] = static_cast<std::uint8_t>(std::floor(v + 0.5));
    }
  }
  const auto fp = frame.pixels.pixels();
  const auto mp = composite.rendered.pixels();
  std::vector<Rgb> out(fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i) {
    out[i] = {table[fp[i].r * 256u + mp[i].r], table[fp[i].g * 256u + mp[i].g],
              table[fp[i].b * 256u + mp[i].b]};
  }
  return RgbRaster(frame.width(), frame.height(), std::move(out));
}

}  // namespace offseg

#endif  // OFFSEG_COMPOSE_HPP_
