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

#ifndef OFFSEG_OFFSEG_HPP_
#define OFFSEG_OFFSEG_HPP_

#include "offseg/classify.hpp"
#include "offseg/color_space.hpp"
#include "offseg/compose.hpp"
#include "offseg/error.hpp"
#include "offseg/ingest.hpp"
#include "offseg/kmeans.hpp"
#include "offseg/manifest.hpp"
#include "offseg/metrics.hpp"
#include "offseg/pipeline.hpp"
#include "offseg/png_io.hpp"
#include "offseg/raster.hpp"
#include "offseg/schema.hpp"
#include "offseg/synthetic.hpp"

#endif  // OFFSEG_OFFSEG_HPP_
