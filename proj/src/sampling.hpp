// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"

namespace patchroute::detail {

inline constexpr double kEdgeTolerance = 1e-6;

// Sample positions are snapped to 1/65536 px, so positions that differ only
// by floating-point noise (e.g. a shifted quad) pick identical taps and weights.
inline constexpr double kSubpixelSteps = 65536.0;

inline bool tap_valid(const RasterImage& src, const BinaryMask& valid, int x, int y) {
  if (!valid.at(x, y)) return false;
  return src.channels() != 4 || src.at(x, y, 3) != 0;
}

// Samples `src` at (sx, sy) and writes one RGBA pixel to `out`. Returns
// whether the destination pixel is valid.
inline bool sample_pixel(const RasterImage& src, const BinaryMask& valid, double sx, double sy,
                         std::uint8_t* out) {
  sx = std::nearbyint(sx * kSubpixelSteps) / kSubpixelSteps;
  sy = std::nearbyint(sy * kSubpixelSteps) / kSubpixelSteps;
  const int w = src.width();
  const int h = src.height();
  if (!(sx >= -kEdgeTolerance && sx <= (w - 1) + kEdgeTolerance && sy >= -kEdgeTolerance &&
        sy <= (h - 1) + kEdgeTolerance)) {
    return false;
  }
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = sx - x0;
  const double fy = sy - y0;

  const int xs[4] = {x0, x1, x0, x1};
  const int ys[4] = {y0, y0, y1, y1};
  const double ws[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};

  double total = 0.0;
  double acc[3] = {0.0, 0.0, 0.0};
  const int ch = src.channels();
  for (int t = 0; t < 4; ++t) {
    if (ws[t] == 0.0 || !tap_valid(src, valid, xs[t], ys[t])) continue;
    total += ws[t];
    for (int c = 0; c < 3; ++c) {
      acc[c] += ws[t] * src.at(xs[t], ys[t], ch == 1 ? 0 : c);
    }
  }
  if (!(total >= 0.5)) return false;
  for (int c = 0; c < 3; ++c) {
    const double v = std::floor(acc[c] / total + 0.5);
    out[c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  out[3] = 255;
  return true;
}

// Projective map without the PointAtInfinity throw; returns false instead.
inline bool map_point(const Homography::Matrix& m, double x, double y, double& ox, double& oy) {
  const double w = m[6] * x + m[7] * y + m[8];
  if (!(std::abs(w) > 1e-12)) return false;
  ox = (m[0] * x + m[1] * y + m[2]) / w;
  oy = (m[3] * x + m[4] * y + m[5]) / w;
  return true;
}

}  // namespace patchroute::detail
