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

#ifndef OFFSEG_ERROR_HPP_
#define OFFSEG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace offseg {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration: schemas, pooling maps, pipeline
// settings, classifier models.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad or missing input data: unreadable images, missing manifest files,
// mismatched raster dimensions.
class DataError : public Error {
 public:
  using Error::Error;
};

// The traversable region of a frame contained no pixels.
class EmptyRoiError : public DataError {
 public:
  EmptyRoiError() : DataError("region of interest is empty") {}
};

}  // namespace offseg

#endif  // OFFSEG_ERROR_HPP_
