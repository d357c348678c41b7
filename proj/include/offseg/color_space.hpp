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

// Working color spaces for clustering. Both map 8-bit sRGB into roughly
// unit-range channels so one tolerance setting fits either space:
// rgb divides by 255; lab is CIE L*a*b* (D65) divided by 100.

#ifndef OFFSEG_COLOR_SPACE_HPP_
#define OFFSEG_COLOR_SPACE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>

#include "offseg/raster.hpp"

namespace offseg {

using Vec3 = std::array<double, 3>;

enum class ColorSpace { rgb, lab };

inline const char* to_string(ColorSpace s) noexcept { return s == ColorSpace::rgb ? "rgb" : "lab"; }

inline std::optional<ColorSpace> parse_color_space(std::string_view s) {
  if (s == "rgb") return ColorSpace::rgb;
  if (s == "lab") return ColorSpace::lab;
  return std::nullopt;
}

namespace detail {

inline double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline constexpr double kXn = 0.95047;
inline constexpr double kYn = 1.0;
inline constexpr double kZn = 1.08883;
inline constexpr double kDelta = 6.0 / 29.0;

inline double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
  return t > kDelta ? t * t * t : 3 * kDelta * kDelta * (t - 4.0 / 29.0);
}

inline std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v * 255.0 + 0.5), 0.0, 255.0));
}

}  // namespace detail

inline Vec3 to_working(Rgb c, ColorSpace space) {
  const Vec3 rgb{c.r / 255.0, c.g / 255.0, c.b / 255.0};
  if (space == ColorSpace::rgb) return rgb;
  const double r = detail::srgb_to_linear(rgb[0]);
  const double g = detail::srgb_to_linear(rgb[1]);
  const double b = detail::srgb_to_linear(rgb[2]);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = detail::lab_f(x / detail::kXn);
  const double fy = detail::lab_f(y / detail::kYn);
  const double fz = detail::lab_f(z / detail::kZn);
  return {(116.0 * fy - 16.0) / 100.0, 500.0 * (fx - fy) / 100.0, 200.0 * (fy - fz) / 100.0};
}

/// Nearest 8-bit sRGB color for a working-space point (clamped to gamut).
inline Rgb from_working(const Vec3& v, ColorSpace space) {
  if (space == ColorSpace::rgb) {
    return {detail::to_byte(v[0]), detail::to_byte(v[1]), detail::to_byte(v[2])};
  }
  const double fy = (v[0] * 100.0 + 16.0) / 116.0;
  const double fx = fy + v[1] * 100.0 / 500.0;
  const double fz = fy - v[2] * 100.0 / 200.0;
  const double x = detail::kXn * detail::lab_f_inv(fx);
  const double y = detail::kYn * detail::lab_f_inv(fy);
  const double z = detail::kZn * detail::lab_f_inv(fz);
  const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  auto enc = [](double c) { return detail::linear_to_srgb(std::clamp(c, 0.0, 1.0)); };
  return {detail::to_byte(enc(r)), detail::to_byte(enc(g)), detail::to_byte(enc(b))};
}

inline double squared_distance(const Vec3& a, const Vec3& b) noexcept {
  const double d0 = a[0] - b[0];
  const double d1 = a[1] - b[1];
  const double d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace offseg

#endif  // OFFSEG_COLOR_SPACE_HPP_
