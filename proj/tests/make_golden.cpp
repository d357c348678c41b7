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

// Writes tests/data/three_band_composite.png from the hand-written expected
// composite of the three-band fixture.

#include <iostream>

#include "fixtures.hpp"

int main() {
  const auto path = offseg::testing::data_path(offseg::testing::three_band::kGoldenFile);
  offseg::png::write(path, offseg::testing::three_band::expected_composite());
  std::cout << path.string() << '\n';
}
