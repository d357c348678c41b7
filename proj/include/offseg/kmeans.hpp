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

// K-Means (Lloyd's algorithm) over pixel colors.
//
// Input points are first collapsed to unique colors with integer weights and
// sorted lexicographically. The weighted objective is identical to the
// per-pixel one, and the canonical order makes results independent of the
// order in which points were supplied.
//
// Rules that make runs reproducible:
//  * all randomness comes from one mt19937_64 seeded with KMeansConfig::seed;
//  * a point equidistant to several centroids joins the lowest-indexed one;
//  * a cluster left empty by an assignment step is reseeded at the point
//    farthest from its current centroid (lowest index on ties), taken from a
//    cluster that keeps at least one other member;
//  * centroid sums are accumulated sequentially in canonical point order.

#ifndef OFFSEG_KMEANS_HPP_
#define OFFSEG_KMEANS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offseg/color_space.hpp"
#include "offseg/error.hpp"
#include "offseg/raster.hpp"

namespace offseg {

inline constexpr std::uint64_t kDefaultSeed = 20211;

enum class KMeansInit { random_points, plusplus };

inline const char* to_string(KMeansInit i) noexcept {
  return i == KMeansInit::plusplus ? "plusplus" : "random_points";
}

inline std::optional<KMeansInit> parse_kmeans_init(std::string_view s) {
  if (s == "plusplus" || s == "kmeans++") return KMeansInit::plusplus;
  if (s == "random_points" || s == "random") return KMeansInit::random_points;
  return std::nullopt;
}

struct KMeansConfig {
  std::size_t k = 4;
  KMeansInit init = KMeansInit::plusplus;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_iters = 100;
  /// Convergence threshold on the largest centroid move, in working-space
  /// units.
  double tol = 1e-4;
  ColorSpace color_space = ColorSpace::rgb;

  void validate() const {
    if (k < 1) throw ConfigError("kmeans: k must be >= 1");
    if (max_iters < 1) throw ConfigError("kmeans: max_iters must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("kmeans: tol must be >= 0");
  }
};

struct ColorPoint {
  Vec3 channels{};
  std::size_t pixel_index = 0;
};

struct KMeansResult {
  std::vector<Vec3> centroids;
  /// Points per cluster, counting duplicates.
  std::vector<std::uint64_t> counts;
  std::vector<double> cluster_inertia;
  /// Cluster index for every input point, in input order.
  std::vector<std::uint32_t> assignment;
  /// Completed update steps.
  std::size_t iterations = 0;
  double inertia = 0.0;
  /// Objective after each assignment step, ending with the final assignment.
  std::vector<double> inertia_history;
  std::size_t requested_k = 0;
  std::size_t distinct_points = 0;

  /// True when fewer distinct colors than k were available.
  bool shortfall() const noexcept { return centroids.size() < requested_k; }
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1), independent of the standard library's distributions.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct WeightedPoints {
  std::vector<Vec3> x;
  std::vector<std::uint64_t> w;
};

struct LloydOutput {
  std::vector<Vec3> centroids;
  std::vector<std::uint32_t> labels;
  std::vector<std::uint64_t> counts;
  std::vector<double> cluster_inertia;
  std::size_t iterations = 0;
  double inertia = 0.0;
  std::vector<double> history;
};

// Index of the first element whose running sum exceeds `target`; only
// elements with positive mass are eligible.
inline std::size_t pick_by_mass(std::span<const double> mass, double target) {
  double cum = 0.0;
  std::size_t last_positive = mass.size();
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    cum += mass[i];
    last_positive = i;
    if (cum > target) return i;
  }
  return last_positive;
}

inline std::vector<Vec3> init_plusplus(const WeightedPoints& p, std::size_t k, Rng& rng) {
  const std::size_t n = p.x.size();
  std::vector<double> mass(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += mass[i] = static_cast<double>(p.w[i]);
  std::vector<Vec3> centers;
  centers.push_back(p.x[pick_by_mass(mass, rng.uniform() * total)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(p.x[i], centers[0]);
  while (centers.size() < k) {
    total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += mass[i] = static_cast<double>(p.w[i]) * d2[i];
    if (!(total > 0.0)) break;
    const std::size_t pick = pick_by_mass(mass, rng.uniform() * total);
    centers.push_back(p.x[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(p.x[i], centers.back()));
  }
  return centers;
}

inline std::vector<Vec3> init_random_points(const WeightedPoints& p, std::size_t k, Rng& rng) {
  const std::size_t n = p.x.size();
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = static_cast<double>(p.w[i]);
  std::vector<Vec3> centers;
  while (centers.size() < k) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0)) break;
    const std::size_t pick = pick_by_mass(mass, rng.uniform() * total);
    centers.push_back(p.x[pick]);
    mass[pick] = 0.0;
  }
  return centers;
}

// Nearest-centroid assignment with lowest-index tie-break, followed by
// empty-cluster repair. Returns the weighted objective.
inline double assign(const WeightedPoints& p, std::vector<Vec3>& centroids,
                     std::vector<std::uint32_t>& labels, std::vector<double>& d2) {
  const std::size_t n = p.x.size();
  const std::size_t k = centroids.size();
  std::vector<std::size_t> members(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_j = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared_distance(p.x[i], centroids[j]);
      if (d < best) {
        best = d;
        best_j = static_cast<std::uint32_t>(j);
      }
    }
    labels[i] = best_j;
    d2[i] = best;
    ++members[best_j];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (members[j] != 0) continue;
    std::size_t far = n;
    double far_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] > far_d && members[labels[i]] > 1) {
        far_d = d2[i];
        far = i;
      }
    }
    if (far == n) continue;
    --members[labels[far]];
    centroids[j] = p.x[far];
    labels[far] = static_cast<std::uint32_t>(j);
    d2[far] = 0.0;
    members[j] = 1;
  }
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) inertia += static_cast<double>(p.w[i]) * d2[i];
  return inertia;
}

inline LloydOutput lloyd(const WeightedPoints& p, const KMeansConfig& cfg) {
  cfg.validate();
  const std::size_t n = p.x.size();
  if (n == 0) throw DataError("kmeans: empty point set");
  const std::size_t k = std::min(cfg.k, n);

  Rng rng(cfg.seed);
  LloydOutput out;
  out.centroids = cfg.init == KMeansInit::plusplus ? init_plusplus(p, k, rng)
                                                   : init_random_points(p, k, rng);
  out.labels.assign(n, 0);
  std::vector<double> d2(n);
  const std::size_t kk = out.centroids.size();
  std::vector<Vec3> sums(kk);
  std::vector<double> weight(kk);

  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    out.history.push_back(assign(p, out.centroids, out.labels, d2));

    std::fill(sums.begin(), sums.end(), Vec3{0.0, 0.0, 0.0});
    std::fill(weight.begin(), weight.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = static_cast<double>(p.w[i]);
      auto& s = sums[out.labels[i]];
      s[0] += w * p.x[i][0];
      s[1] += w * p.x[i][1];
      s[2] += w * p.x[i][2];
      weight[out.labels[i]] += w;
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < kk; ++j) {
      if (weight[j] == 0.0) continue;
      const Vec3 c{sums[j][0] / weight[j], sums[j][1] / weight[j], sums[j][2] / weight[j]};
      shift = std::max(shift, std::sqrt(squared_distance(c, out.centroids[j])));
      out.centroids[j] = c;
    }
    out.iterations = it;
    if (shift <= cfg.tol) break;
  }

  out.inertia = assign(p, out.centroids, out.labels, d2);
  out.history.push_back(out.inertia);
  out.counts.assign(kk, 0);
  out.cluster_inertia.assign(kk, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.counts[out.labels[i]] += p.w[i];
    out.cluster_inertia[out.labels[i]] += static_cast<double>(p.w[i]) * d2[i];
  }
  return out;
}

}  // namespace detail

/// Clusters color points. Returns exactly k clusters, or one per distinct
/// color when fewer than k distinct colors exist.
inline KMeansResult kmeans(std::span<const ColorPoint> points, const KMeansConfig& cfg) {
  cfg.validate();
  if (points.empty()) throw DataError("kmeans: empty point set");
  for (const auto& p : points) {
    if (!std::isfinite(p.channels[0]) || !std::isfinite(p.channels[1]) ||
        !std::isfinite(p.channels[2])) {
      throw DataError("kmeans: non-finite color at pixel " + std::to_string(p.pixel_index));
    }
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].channels < points[b].channels;
  });

  detail::WeightedPoints unique;
  std::vector<std::uint32_t> unique_of(points.size());
  for (std::size_t idx : order) {
    if (unique.x.empty() || unique.x.back() != points[idx].channels) {
      unique.x.push_back(points[idx].channels);
      unique.w.push_back(0);
    }
    ++unique.w.back();
    unique_of[idx] = static_cast<std::uint32_t>(unique.x.size() - 1);
  }

  auto fit = detail::lloyd(unique, cfg);
  KMeansResult r;
  r.centroids = std::move(fit.centroids);
  r.counts = std::move(fit.counts);
  r.cluster_inertia = std::move(fit.cluster_inertia);
  r.iterations = fit.iterations;
  r.inertia = fit.inertia;
  r.inertia_history = std::move(fit.history);
  r.requested_k = cfg.k;
  r.distinct_points = unique.x.size();
  r.assignment.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) r.assignment[i] = fit.labels[unique_of[i]];
  return r;
}

/// One color cluster of a region of interest.
struct ColorPool {
  Vec3 centroid{};
  ColorSpace color_space = ColorSpace::rgb;
  /// Member pixels, aligned with the frame raster.
  BinaryMask members;
  std::uint64_t count = 0;
  double inertia_contribution = 0.0;

  Rgb centroid_rgb() const { return from_working(centroid, color_space); }
};

struct ClusterResult {
  std::vector<ColorPool> pools;
  std::size_t iterations = 0;
  double inertia = 0.0;
  std::vector<double> inertia_history;
  std::size_t requested_k = 0;
  std::size_t distinct_colors = 0;
  std::size_t roi_pixels = 0;

  bool shortfall() const noexcept { return pools.size() < requested_k; }
};

/// Clusters the colors of the frame pixels selected by `roi`.
/// Throws EmptyRoiError when the RoI selects no pixel.
inline ClusterResult cluster_roi(const Frame& frame, const BinaryMask& roi, const KMeansConfig& cfg) {
  cfg.validate();
  require_same_shape(frame.pixels, roi, "cluster_roi");
  const auto px = frame.pixels.pixels();
  const auto bits = roi.pixels();

  std::vector<std::uint32_t> colors;
  colors.reserve(px.size() / 2);
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (bits[i]) colors.push_back(px[i].packed());
  }
  if (colors.empty()) throw EmptyRoiError();
  const std::size_t roi_pixels = colors.size();
  std::sort(colors.begin(), colors.end());

  detail::WeightedPoints unique;
  std::vector<std::uint32_t> palette;
  for (std::uint32_t c : colors) {
    if (palette.empty() || palette.back() != c) {
      palette.push_back(c);
      unique.x.push_back(to_working(Rgb::unpack(c), cfg.color_space));
      unique.w.push_back(0);
    }
    ++unique.w.back();
  }

  auto fit = detail::lloyd(unique, cfg);

  ClusterResult r;
  r.iterations = fit.iterations;
  r.inertia = fit.inertia;
  r.inertia_history = std::move(fit.history);
  r.requested_k = cfg.k;
  r.distinct_colors = palette.size();
  r.roi_pixels = roi_pixels;
  r.pools.resize(fit.centroids.size());
  for (std::size_t j = 0; j < r.pools.size(); ++j) {
    auto& pool = r.pools[j];
    pool.centroid = fit.centroids[j];
    pool.color_space = cfg.color_space;
    pool.members = BinaryMask(frame.width(), frame.height(), 0);
    pool.count = fit.counts[j];
    pool.inertia_contribution = fit.cluster_inertia[j];
  }
  // Label pixels through the sorted palette; consecutive pixels usually share
  // a color, so the previous lookup is reused.
  std::uint32_t last_color = 0;
  std::uint32_t last_label = 0;
  bool have_last = false;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    const std::uint32_t c = px[i].packed();
    if (!have_last || c != last_color) {
      const auto it = std::lower_bound(palette.begin(), palette.end(), c);
      last_label = fit.labels[static_cast<std::size_t>(it - palette.begin())];
      last_color = c;
      have_last = true;
    }
    r.pools[last_label].members[i] = 1;
  }
  return r;
}

/// Color statistics of one pool: working-space mean, per-channel population
/// variance, and the pool's share of the frame.
struct ColorStats {
  Vec3 mean{};
  Vec3 variance{};
  double fraction = 0.0;
  std::uint64_t count = 0;
};

inline ColorStats pool_stats(const ColorPool& pool, const Frame& frame) {
  require_same_shape(frame.pixels, pool.members, "pool_stats");
  const auto px = frame.pixels.pixels();
  const auto bits = pool.members.pixels();
  ColorStats s;
  Vec3 sum{0, 0, 0};
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    const Vec3 v = to_working(px[i], pool.color_space);
    for (int c = 0; c < 3; ++c) sum[c] += v[c];
    ++s.count;
  }
  if (s.count == 0) throw DataError("pool_stats: pool has no member pixels");
  const double n = static_cast<double>(s.count);
  for (int c = 0; c < 3; ++c) s.mean[c] = sum[c] / n;
  Vec3 sq{0, 0, 0};
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    const Vec3 v = to_working(px[i], pool.color_space);
    for (int c = 0; c < 3; ++c) sq[c] += (v[c] - s.mean[c]) * (v[c] - s.mean[c]);
  }
  for (int c = 0; c < 3; ++c) s.variance[c] = sq[c] / n;
  s.fraction = n / static_cast<double>(px.size());
  return s;
}

}  // namespace offseg

#endif  // OFFSEG_KMEANS_HPP_
