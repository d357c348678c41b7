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

using testing::TempDir;

void touch(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p) << "x";
}

TEST(Manifest, ScanThreePairs) {
  TempDir dir;
  for (const char* s : {"a", "b", "c"}) {
    touch(dir / (std::string("images/") + s + ".png"));
    touch(dir / (std::string("labels/") + s + ".png"));
  }
  auto m = scan_directory(dir.path());
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[0].id, "a");
  EXPECT_EQ(m.entries[2].ground_truth, dir / "labels/c.png");
  EXPECT_TRUE(m.entries[1].prediction.empty());
}

TEST(Manifest, ScanSplitDirectories) {
  TempDir dir;
  touch(dir / "train/images/x.png");
  touch(dir / "train/labels/x.png");
  touch(dir / "test/images/x.png");
  touch(dir / "test/labels/x.png");
  touch(dir / "test/preds/x.png");
  auto m = scan_directory(dir.path());
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].id, "train-x");
  EXPECT_EQ(m.entries[1].split, Split::test);
  EXPECT_FALSE(m.entries[1].prediction.empty());
  const auto counts = m.split_counts();
  EXPECT_EQ(counts[0], 1u);
  EXPECT_EQ(counts[1], 0u);
  EXPECT_EQ(counts[2], 1u);
}

TEST(Manifest, MissingMaskIsNamed) {
  TempDir dir;
  touch(dir / "images/a.png");
  try {
    scan_directory(dir.path());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find((dir / "labels/a.png").string()), std::string::npos);
  }

  testing::write_text(dir / "m.json", R"({"entries": [{"frame": "images/a.png", "gt": "labels/zz.png"}]})");
  try {
    load_manifest(dir / "m.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zz.png"), std::string::npos);
  }
  auto lenient = load_manifest(dir / "m.json", false);
  ASSERT_EQ(lenient.missing_files().size(), 1u);
  EXPECT_EQ(lenient.missing_files()[0].field, "gt");
}

TEST(Manifest, JsonRoundTripAndValidation) {
  TempDir dir;
  touch(dir / "images/a.png");
  touch(dir / "labels/a.png");
  touch(dir / "images/b.png");
  testing::write_text(dir / "m.json", R"({"name": "demo", "entries": [
      {"frame": "images/a.png", "gt": "labels/a.png", "split": "val"},
      {"id": "bee", "frame": "images/b.png"}]})");
  auto m = load_manifest(dir / "m.json");
  EXPECT_EQ(m.name, "demo");
  EXPECT_EQ(m.entries[0].id, "a");
  EXPECT_EQ(m.entries[0].split, Split::val);
  EXPECT_EQ(m.entries[1].id, "bee");
  EXPECT_EQ(m.entries[1].split, Split::test);
  save_manifest(m, dir / "copy.json");
  auto again = load_manifest(dir / "copy.json");
  ASSERT_EQ(again.entries.size(), 2u);
  EXPECT_EQ(again.entries[0].frame, m.entries[0].frame);
  EXPECT_EQ(again.entries[1].id, "bee");

  testing::write_text(dir / "dup.json",
                      R"({"entries": [{"frame": "images/a.png"}, {"frame": "images/a.png"}]})");
  EXPECT_THROW(load_manifest(dir / "dup.json"), DataError);
  testing::write_text(dir / "split.json", R"({"entries": [{"frame": "images/a.png", "split": "dev"}]})");
  EXPECT_THROW(load_manifest(dir / "split.json"), DataError);
}

}  // namespace
}  // namespace offseg
