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

// PNG read/write through libpng's simplified API. Color inputs of any bit
// depth or color type are delivered as 8-bit RGB; grayscale inputs are kept
// single-channel so id masks can bypass palette decoding.

#ifndef OFFSEG_PNG_IO_HPP_
#define OFFSEG_PNG_IO_HPP_

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "offseg/error.hpp"
#include "offseg/raster.hpp"

namespace offseg::png {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> bytes;
};

namespace detail {

struct ImageGuard {
  png_image* image;
  ~ImageGuard() { png_image_free(image); }
};

inline Image finish_read(png_image& image, const std::string& origin) {
  ImageGuard guard{&image};
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out;
  out.width = image.width;
  out.height = image.height;
  out.channels = color ? 3 : 1;
  if (out.width == 0 || out.height == 0) throw DataError(origin + ": empty image");
  out.bytes.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.bytes.data(), 0, nullptr)) {
    throw DataError(origin + ": " + image.message);
  }
  return out;
}

}  // namespace detail

inline Image decode(const std::vector<std::uint8_t>& data, const std::string& origin = "memory") {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DataError(origin + ": " + msg);
  }
  return detail::finish_read(image, origin);
}

inline Image read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return decode(data, path.string());
}

inline std::vector<std::uint8_t> encode(const std::uint8_t* pixels, std::size_t width,
                                        std::size_t height, int channels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, pixels, 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DataError("png encode: " + msg);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DataError("png encode: " + msg);
  }
  out.resize(size);
  return out;
}

inline std::vector<std::uint8_t> encode(const RgbRaster& raster) {
  static_assert(sizeof(Rgb) == 3);
  return encode(reinterpret_cast<const std::uint8_t*>(raster.pixels().data()), raster.width(),
                raster.height(), 3);
}

inline std::vector<std::uint8_t> encode(const Raster<std::uint8_t>& gray) {
  return encode(gray.pixels().data(), gray.width(), gray.height(), 1);
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw DataError("short write to '" + path.string() + "'");
}

inline void write(const std::filesystem::path& path, const RgbRaster& raster) {
  write_bytes(path, encode(raster));
}

inline void write(const std::filesystem::path& path, const Raster<std::uint8_t>& gray) {
  write_bytes(path, encode(gray));
}

/// Loads an RGB frame; grayscale files are expanded to RGB.
inline Frame read_frame(const std::filesystem::path& path) {
  Image img = read(path);
  std::vector<Rgb> px(img.width * img.height);
  if (img.channels == 3) {
    std::memcpy(px.data(), img.bytes.data(), img.bytes.size());
  } else {
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = {img.bytes[i], img.bytes[i], img.bytes[i]};
  }
  return {RgbRaster(img.width, img.height, std::move(px)), path.stem().string()};
}

}  // namespace offseg::png

#endif  // OFFSEG_PNG_IO_HPP_
