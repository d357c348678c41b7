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

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace offseg {
namespace {

using testing::make_mask;

TEST(DecodeMask, SingleColorRaster) {
  auto s = testing::offseg4();
  RgbRaster img(5, 3, s->encode(0));
  auto d = decode_mask(img, s);
  EXPECT_EQ(d.unknown_pixels, 0u);
  for (auto v : d.mask.ids.pixels()) EXPECT_EQ(v, 0);
}

TEST(DecodeMask, OffPalettePixelBecomesIgnore) {
  auto s = testing::offseg4();
  RgbRaster img(4, 4, s->encode(1));
  img.at(2, 3) = {1, 2, 3};
  auto d = decode_mask(img, s);
  EXPECT_EQ(d.unknown_pixels, 1u);
  EXPECT_EQ(d.mask.ids.at(2, 3), kIgnoreId);
  EXPECT_EQ(d.mask.ids.at(1, 3), 1);
}

TEST(DecodeMask, IgnoreColorIsNotCountedAsUnknown) {
  auto s = testing::offseg4();
  RgbRaster img(2, 1, s->ignore_color());
  auto d = decode_mask(img, s);
  EXPECT_EQ(d.unknown_pixels, 0u);
  EXPECT_EQ(d.mask.ids[0], kIgnoreId);
}

TEST(EncodeMask, ZerosAndIgnore) {
  auto s = testing::offseg4();
  auto m = make_mask(s, 3, 2, {0, 0, 0, 0, kIgnoreId, 0});
  auto img = encode_mask(m);
  EXPECT_EQ(img.at(0, 0), s->encode(0));
  EXPECT_EQ(img.at(1, 1), s->ignore_color());
  EXPECT_EQ(decode_mask(img, s).mask.ids, m.ids);
}

TEST(RemapMask, RellisGrassAndSky) {
  auto map = testing::rellis_pooling();
  const auto& fine = map.source_ptr();
  auto grass = make_mask(fine, 4, 4, std::vector<ClassId>(16, fine->id_of("grass")));
  auto pooled = remap_mask(grass, map);
  for (auto v : pooled.ids.pixels()) EXPECT_EQ(v, map.target().id_of("traversable"));
  auto sky = make_mask(fine, 2, 2, std::vector<ClassId>(4, fine->id_of("sky")));
  auto pooled_sky = remap_mask(sky, map);
  for (auto v : pooled_sky.ids.pixels()) EXPECT_EQ(v, map.target().id_of("sky"));
}

TEST(RemapMask, IdentityMapIsIdempotent) {
  auto s = testing::offseg4();
  auto m = make_mask(s, 3, 2, {0, 1, 2, 3, kIgnoreId, 1});
  auto id = PoolingMap::identity(s);
  auto once = remap_mask(m, id);
  EXPECT_EQ(once.ids, m.ids);
  EXPECT_EQ(remap_mask(once, id).ids, m.ids);
}

TEST(RemapMask, RejectsWrongSchema) {
  auto m = make_mask(testing::offseg4(), 1, 1, {0});
  EXPECT_THROW(remap_mask(m, testing::rellis_pooling()), ConfigError);
}

TEST(ExtractRoi, FullEmptyAndCheckerboard) {
  auto s = testing::offseg4();
  const ClassId trav = s->id_of("traversable"), obst = s->id_of("obstacle");
  auto full = extract_roi(make_mask(s, 6, 4, std::vector<ClassId>(24, trav)), trav);
  EXPECT_EQ(full.pixel_count, 24u);
  EXPECT_EQ(count_set(full.mask), 24u);
  auto none = extract_roi(make_mask(s, 6, 4, std::vector<ClassId>(24, obst)), trav);
  EXPECT_EQ(none.pixel_count, 0u);

  std::vector<ClassId> board(7 * 6);
  std::size_t expected = 0;
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 7; ++x) {
      const bool t = (x + y) % 2 == 0;
      board[y * 7 + x] = t ? trav : obst;
      expected += t;
    }
  }
  auto roi = extract_roi(make_mask(s, 7, 6, board), trav);
  EXPECT_EQ(roi.pixel_count, expected);
  EXPECT_EQ(roi.pixel_count, 21u);
  for (std::size_t i = 0; i < board.size(); ++i) EXPECT_EQ(roi.mask[i] != 0, board[i] == trav);
}

TEST(ClassDistribution, SingleAndBalanced) {
  auto fine = testing::rellis_pooling().source_ptr();
  const ClassId grass = fine->id_of("grass"), tree = fine->id_of("tree");
  std::vector<LabelMask> one{make_mask(fine, 3, 3, std::vector<ClassId>(9, grass))};
  EXPECT_DOUBLE_EQ(class_distribution(one).fraction("grass"), 1.0);
  std::vector<LabelMask> two{make_mask(fine, 3, 3, std::vector<ClassId>(9, grass)),
                             make_mask(fine, 3, 3, std::vector<ClassId>(9, tree))};
  auto d = class_distribution(two);
  EXPECT_DOUBLE_EQ(d.fraction("grass"), 0.5);
  EXPECT_DOUBLE_EQ(d.fraction("tree"), 0.5);
  EXPECT_DOUBLE_EQ(d.fraction("sky"), 0.0);
}

TEST(ClassDistribution, IgnoredPixelsExcluded) {
  auto s = testing::offseg4();
  std::vector<LabelMask> m{make_mask(s, 4, 1, {0, 0, 1, kIgnoreId})};
  auto d = class_distribution(m);
  EXPECT_EQ(d.histogram.ignored, 1u);
  EXPECT_DOUBLE_EQ(d.fractions[0], 2.0 / 3.0);
}

TEST(ClassDistribution, RejectsEmptyAndMixed) {
  EXPECT_THROW(class_distribution({}), DataError);
  std::vector<LabelMask> mixed{make_mask(testing::offseg4(), 1, 1, {0}),
                               make_mask(testing::subclasses(), 1, 1, {0})};
  EXPECT_THROW(class_distribution(mixed), ConfigError);
}

TEST(MaskFiles, ColorAndIdRoundTrip) {
  testing::TempDir dir;
  auto s = testing::offseg4();
  auto m = make_mask(s, 5, 2, {0, 1, 2, 3, kIgnoreId, 3, 2, 1, 0, 0});
  save_mask(dir / "c.png", m);
  save_id_mask(dir / "i.png", m);
  EXPECT_EQ(load_mask(dir / "c.png", s, MaskKind::ground_truth).mask.ids, m.ids);
  auto ids = load_mask(dir / "i.png", s, MaskKind::ground_truth);
  EXPECT_EQ(ids.mask.ids, m.ids);
  EXPECT_EQ(ids.unknown_pixels, 1u);  // 255 is outside the 4-class schema
  EXPECT_THROW(load_mask(dir / "absent.png", s, MaskKind::ground_truth), DataError);
}

TEST(MaskFiles, RandomPaletteRoundTrip) {
  auto fine = testing::rellis_pooling().source_ptr();
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t w = 1 + rng() % 20, h = 1 + rng() % 20;
    RgbRaster img(w, h);
    for (auto& p : img.pixels()) p = fine->encode(static_cast<ClassId>(rng() % fine->size()));
    EXPECT_EQ(encode_mask(decode_mask(img, fine).mask), img);
  }
}

}  // namespace
}  // namespace offseg
