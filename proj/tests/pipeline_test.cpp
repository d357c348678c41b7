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

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace offseg {
namespace {

namespace tb = testing::three_band;
using testing::TempDir;

TEST(PipelineConfig, ParsesAndResolvesPaths) {
  TempDir dir;
  testing::write_text(dir / "p.json", R"({
    // comments are allowed
    "fine_schema": "fine.json",
    "subclass_schema": "/abs/sub.json",
    "prediction_schema": "fine",
    "kmeans": {"k": 6, "init": "random_points", "seed": 5, "color_space": "lab"},
    "compose": {"alpha": 0.25, "export_pools": true},
    "metrics": {"policy": "count_as_zero"},
    "bench": {"warmup": 0, "repetitions": 2},
    "jobs": 3})");
  auto cfg = load_pipeline_config(dir / "p.json");
  EXPECT_EQ(cfg.fine_schema, dir / "fine.json");
  EXPECT_EQ(cfg.subclass_schema, "/abs/sub.json");
  EXPECT_EQ(cfg.prediction_schema, PredictionSchema::fine);
  EXPECT_EQ(cfg.kmeans.k, 6u);
  EXPECT_EQ(cfg.kmeans.init, KMeansInit::random_points);
  EXPECT_EQ(cfg.kmeans.seed, 5u);
  EXPECT_EQ(cfg.kmeans.color_space, ColorSpace::lab);
  EXPECT_EQ(cfg.alpha, 0.25);
  EXPECT_TRUE(cfg.export_pools);
  EXPECT_EQ(cfg.policy, UndefinedPolicy::count_as_zero);
  EXPECT_EQ(cfg.warmup, 0u);
  EXPECT_EQ(cfg.repetitions, 2u);
  EXPECT_EQ(cfg.jobs, 3u);
  EXPECT_THROW(cfg.validate(), ConfigError);  // files do not exist
}

TEST(PipelineConfig, RejectsBadValues) {
  TempDir dir;
  testing::write_text(dir / "a.json", R"({"jobs": 0})");
  EXPECT_THROW(load_pipeline_config(dir / "a.json"), ConfigError);
  testing::write_text(dir / "b.json", R"({"kmeans": {"init": "fancy"}})");
  EXPECT_THROW(load_pipeline_config(dir / "b.json"), ConfigError);
  testing::write_text(dir / "c.json", R"({"metrics": {"policy": "nan"}})");
  EXPECT_THROW(load_pipeline_config(dir / "c.json"), ConfigError);
  auto cfg = testing::pipeline_config({}, dir.path());
  EXPECT_NO_THROW(cfg.validate(false));
  EXPECT_THROW(cfg.validate(true), ConfigError);
  cfg.alpha = 2.0;
  EXPECT_THROW(cfg.validate(false), ConfigError);
}

TEST(PipelineConfig, ShippedConfigLoads) {
  auto cfg = load_pipeline_config(testing::config_path("pipeline.json"));
  auto ctx = PipelineContext::load(cfg, true);
  EXPECT_EQ(ctx.fine->size(), 20u);
  EXPECT_EQ(ctx.pooled->size(), 4u);
  EXPECT_EQ(ctx.subclasses->size(), 10u);
  EXPECT_EQ(cfg.kmeans.seed, kDefaultSeed);
}

TEST(PipelineContext, ModelMustMatchColorSpace) {
  TempDir dir;
  save_model(testing::seed_model(testing::subclasses()), dir / "m.json");
  auto cfg = testing::pipeline_config(dir / "m.json", dir.path());
  EXPECT_NO_THROW(PipelineContext::load(cfg, true));
  cfg.kmeans.color_space = ColorSpace::lab;
  EXPECT_THROW(PipelineContext::load(cfg, true), ConfigError);
}

struct ContextFixture : ::testing::Test {
  TempDir dir;
  PipelineContext ctx;
  void SetUp() override {
    save_model(testing::seed_model(testing::subclasses()), dir / "m.json");
    ctx = PipelineContext::load(testing::pipeline_config(dir / "m.json", dir.path()), true);
  }
};

TEST_F(ContextFixture, PostProcessThreeBands) {
  auto r = post_process(ctx, tb::frame(), tb::prediction(ctx.pooled));
  ASSERT_TRUE(r.clusters.has_value());
  EXPECT_EQ(r.roi_pixels, 5u * tb::kWidth);
  EXPECT_EQ(r.composite.rendered, tb::expected_composite());
  auto side = sidecar_json(ctx, tb::frame(), r, 0);
  EXPECT_EQ(side["pools"].size(), 3u);
  EXPECT_FALSE(side["empty_roi"].get<bool>());
}

TEST_F(ContextFixture, EmptyRoiKeepsPooledRender) {
  auto pred = tb::prediction(ctx.pooled);
  for (auto& v : pred.ids.pixels()) v = v == ctx.roi_class ? ctx.pooled->id_of("obstacle") : v;
  auto r = post_process(ctx, tb::frame(), pred);
  EXPECT_FALSE(r.clusters.has_value());
  EXPECT_EQ(r.composite.rendered, encode_mask(pred));
  EXPECT_TRUE(sidecar_json(ctx, tb::frame(), r, 0)["empty_roi"].get<bool>());
}

TEST_F(ContextFixture, BenchCountsFramesAndStages) {
  auto m = synthetic::write_dataset(dir / "ds", *ctx.pooling, 1, 3, {64, 40, 4, 3});
  auto one = bench(ctx, m, {1, 0, 1});
  EXPECT_EQ(one.frames, 1u);
  EXPECT_GT(one.fps(), 0.0);
  EXPECT_LE(one.stage_sum(), one.total_seconds * 1.0001 + 1e-6);
  EXPECT_EQ(one.width, 64u);
  auto two = bench(ctx, m, {2, 1, 1});
  EXPECT_EQ(two.frames, 2 * one.frames);
  EXPECT_EQ(two.warmup_frames, 1u);
}

TEST(ParallelFor, RunsAllAndRethrowsFirstError) {
  std::vector<int> hit(50, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 50);
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 7 || i == 4) throw DataError("boom " + std::to_string(i));
    });
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "boom 4");
  }
}

TEST(Synthetic, SceneIsConsistent) {
  auto pooling = testing::rellis_pooling();
  auto a = synthetic::make_scene(pooling, 1, {80, 50, 4, 3});
  auto b = synthetic::make_scene(pooling, 1, {80, 50, 4, 3});
  EXPECT_EQ(a.frame.pixels, b.frame.pixels);
  EXPECT_EQ(a.prediction.ids, b.prediction.ids);
  EXPECT_GT(extract_roi(a.prediction, pooling.target().id_of("traversable")).pixel_count, 0u);
  EXPECT_EQ(*a.prediction.schema, pooling.target());
}

}  // namespace
}  // namespace offseg
