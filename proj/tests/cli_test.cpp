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

namespace fs = std::filesystem;
namespace tb = testing::three_band;
using testing::run_cli;
using testing::TempDir;

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// Fine-label dataset of `n` small frames for remap/eval/stats.
fs::path write_fine_case(const TempDir& dir, std::size_t n) {
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "labels");
  fs::create_directories(dir / "preds");
  auto pooling = testing::rellis_pooling();
  const auto& fine = pooling.source_ptr();
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "f" + std::to_string(i);
    // grass, grass, tree, tree
    auto gt = testing::make_mask(fine, 4, 1,
                                 {fine->id_of("grass"), fine->id_of("grass"), fine->id_of("tree"), fine->id_of("tree")});
    auto pred = testing::make_mask(pooling.target_ptr(), 4, 1,
                                   {pooling.target().id_of("traversable"), pooling.target().id_of("obstacle"),
                                    pooling.target().id_of("obstacle"), pooling.target().id_of("obstacle")});
    png::write(dir / ("images/" + id + ".png"), RgbRaster(4, 1, {9, 9, 9}));
    save_mask(dir / ("labels/" + id + ".png"), gt);
    save_mask(dir / ("preds/" + id + ".png"), pred);
    entries.push_back({{"frame", "images/" + id + ".png"}, {"gt", "labels/" + id + ".png"}, {"pred", "preds/" + id + ".png"}});
  }
  testing::write_text(dir / "manifest.json", nlohmann::json{{"name", "fine"}, {"entries", entries}}.dump());
  return dir / "manifest.json";
}

std::string shipped_config() { return q(testing::config_path("pipeline.json")); }

TEST(Cli, RemapWritesPooledMasks) {
  TempDir dir;
  auto manifest = write_fine_case(dir, 3);
  auto r = run_cli("remap --config " + shipped_config() + " --manifest " + q(manifest) + " --out " + q(dir / "out"),
                   dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 0; i < 3; ++i) {
    auto m = load_mask(dir / ("out/f" + std::to_string(i) + ".pooled.png"), testing::offseg4(), MaskKind::ground_truth);
    EXPECT_EQ(m.mask.ids[0], testing::offseg4()->id_of("traversable"));
  }
}

TEST(Cli, RemapCountsOffPalettePixels) {
  TempDir dir;
  auto manifest = write_fine_case(dir, 1);
  auto img = png::read_frame(dir / "labels/f0.png").pixels;
  img[3] = {1, 2, 3};
  png::write(dir / "labels/f0.png", img);
  auto r = run_cli("--json remap --config " + shipped_config() + " --manifest " + q(manifest) + " --out " +
                       q(dir / "out"),
                   dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["off_palette_pixels"], 1);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, RemapMissingFileNamed) {
  TempDir dir;
  auto manifest = write_fine_case(dir, 2);
  fs::remove(dir / "labels/f1.png");
  auto r = run_cli("remap --config " + shipped_config() + " --manifest " + q(manifest) + " --out " + q(dir / "out"),
                   dir.path());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("labels/f1.png"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out/f0.pooled.png"));
}

TEST(Cli, SegmentPostMatchesGolden) {
  TempDir dir;
  auto config = testing::write_three_band_case(dir.path());
  auto r = run_cli("segment-post --config " + q(config) + " --manifest " + q(dir / "manifest.json"), dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(testing::read_bytes(dir / "out/three_band.final.png"),
            testing::read_bytes(testing::data_path(tb::kGoldenFile)));
  auto side = nlohmann::json::parse(testing::read_text(dir / "out/three_band.json"));
  EXPECT_EQ(side["pools"].size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "out/three_band.blend.png"));
  EXPECT_TRUE(fs::exists(dir / "out/three_band.pooled.png"));
}

TEST(Cli, SegmentPostEmptyRoiAndMissingPrediction) {
  TempDir dir;
  auto config = testing::write_three_band_case(dir.path());
  auto pooled = testing::offseg4();
  auto pred = tb::prediction(pooled);
  for (auto& v : pred.ids.pixels()) v = v == pooled->id_of("traversable") ? pooled->id_of("sky") : v;
  save_mask(dir / "preds/empty.png", pred);
  png::write(dir / "images/empty.png", tb::frame().pixels);
  png::write(dir / "images/nopred.png", tb::frame().pixels);
  testing::write_text(dir / "manifest.json", R"({"entries": [
      {"frame": "images/three_band.png", "pred": "preds/three_band.png"},
      {"frame": "images/empty.png", "pred": "preds/empty.png"},
      {"frame": "images/nopred.png"}]})");
  auto r = run_cli("--json segment-post --config " + q(config) + " --manifest " + q(dir / "manifest.json"),
                   dir.path());
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["processed"], 2);
  ASSERT_EQ(j["failures"].size(), 1u);
  EXPECT_EQ(j["failures"][0]["id"], "nopred");
  EXPECT_EQ(j["empty_roi"], nlohmann::json::array({"empty"}));
  EXPECT_EQ(png::read_frame(dir / "out/empty.final.png").pixels, encode_mask(pred));
  EXPECT_TRUE(nlohmann::json::parse(testing::read_text(dir / "out/empty.json"))["empty_roi"].get<bool>());
}

TEST(Cli, EvalReports) {
  TempDir dir;
  auto manifest = write_fine_case(dir, 2);
  auto r = run_cli("--json eval --config " + shipped_config() + " --manifest " + q(manifest) + " --out " +
                       q(dir / "out"),
                   dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(testing::read_text(dir / "out/eval_report.json"));
  EXPECT_NEAR(j["miou"].get<double>(), (0.5 + 2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_NE(testing::read_text(dir / "out/eval_table.txt").find("58.33%"), std::string::npos);

  // Ground truth scored against itself.
  auto self = nlohmann::json::parse(testing::read_text(manifest));
  for (auto& e : self["entries"]) e["pred"] = e["gt"];
  testing::write_text(dir / "self.json", self.dump());
  auto cfg = nlohmann::json::parse(R"({"prediction_schema": "fine"})");
  cfg["fine_schema"] = testing::config_path("rellis3d.json").string();
  cfg["subclass_schema"] = testing::config_path("subclasses.json").string();
  testing::write_text(dir / "fine_pred.json", cfg.dump());
  r = run_cli("eval --config " + q(dir / "fine_pred.json") + " --manifest " + q(dir / "self.json") + " --out " +
                  q(dir / "self"),
              dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  auto s = nlohmann::json::parse(testing::read_text(dir / "self/eval_report.json"));
  for (const auto& c : s["per_class"]) {
    if (!c["iou"].is_null()) {
      EXPECT_EQ(c["iou"].get<double>(), 1.0);
    }
  }
  EXPECT_EQ(s["miou"].get<double>(), 1.0);

  testing::write_text(dir / "empty.json", R"({"entries": []})");
  r = run_cli("eval --config " + shipped_config() + " --manifest " + q(dir / "empty.json") + " --out " + q(dir / "e"),
              dir.path());
  EXPECT_NE(r.code, 0);
}

TEST(Cli, StatsDistribution) {
  TempDir dir;
  auto manifest = write_fine_case(dir, 2);
  auto r = run_cli("stats --config " + shipped_config() + " --manifest " + q(manifest) + " --out " + q(dir / "out"),
                   dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(testing::read_text(dir / "out/stats.json"));
  for (const auto& c : j["fine"]["classes"]) {
    if (c["class"] == "grass" || c["class"] == "tree") {
      EXPECT_EQ(c["fraction"].get<double>(), 0.5);
    }
  }
  EXPECT_EQ(j["pooled"]["top4_fraction"].get<double>(), 1.0);
}

TEST(Cli, TrainClassifierAndValidate) {
  TempDir dir;
  save_samples_csv(synthetic::seed_samples(*testing::subclasses(), 20, 3.0, 1), dir / "s.csv");
  auto r = run_cli("--json train-classifier --config " + shipped_config() + " --samples " + q(dir / "s.csv") +
                       " --eval-samples " + q(dir / "s.csv") + " --out " + q(dir / "m.json"),
                   dir.path());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_model(dir / "m.json").size(), 10u);
  EXPECT_EQ(nlohmann::json::parse(r.out)["held_out"]["accuracy"].get<double>(), 1.0);

  r = run_cli("validate-config", dir.path(), "OFFSEG_CONFIG=" + shipped_config());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("traversable: 6"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli("", dir.path()).code, 64);
  EXPECT_EQ(run_cli("remap --bogus", dir.path()).code, 64);
  EXPECT_EQ(run_cli("stats --manifest x.json", dir.path(), "env -u OFFSEG_CONFIG").code, 2);
  testing::write_text(dir / "bad.json", R"({"fine_schema": "nope.json", "subclass_schema": "nope.json"})");
  EXPECT_EQ(run_cli("validate-config --config " + q(dir / "bad.json"), dir.path()).code, 2);
  EXPECT_EQ(run_cli("stats --config " + shipped_config() + " --manifest " + q(dir / "absent.json"), dir.path()).code, 1);
  EXPECT_EQ(run_cli("--help", dir.path()).code, 0);
}

}  // namespace
}  // namespace offseg
