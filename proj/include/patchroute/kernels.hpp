// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel pixel and feature kernels. Every kernel has an OpenMP
// implementation in `kernels` and a plain serial twin in
// `kernels::reference`; tests require the two to agree bit-for-bit and the
// benchmark target times them against each other.

#pragma once

#include <span>

#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"

namespace patchroute::kernels {

/// Half-open pixel rectangle.
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};

/// Backward-mapping bilinear warp. Each destination pixel inside `roi` is
/// mapped through `dst_to_src`; source taps are weighted by `src_valid`
/// (and by source alpha when present). A destination pixel is valid when
/// the sample lies inside the source and at least half of the bilinear
/// weight falls on valid taps; its colour is the valid-weighted average.
/// `dst` must be RGBA; invalid pixels are written as all-zero.
void warp_bilinear(const RasterImage& src, const BinaryMask& src_valid,
                   const Homography& dst_to_src, PixelRect roi, RasterImage& dst,
                   BinaryMask& dst_valid);

/// Painter's algorithm: later layers overwrite earlier ones where valid.
/// `out` is RGBA; `coverage` is the union of layer validity.
struct Layer {
  const RasterImage* rgba;
  const BinaryMask* valid;
};
void composite(std::span<const Layer> layers, RasterImage& out, BinaryMask& coverage);

void mask_and(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);
void mask_and_not(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);
void mask_or(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);

/// Per-channel mean of `f` over pixels where `region` is set (double
/// accumulation). `means` has one entry per channel.
void masked_channel_means(const FeatureMap& f, const BinaryMask& region,
                          std::span<double> means);

/// out = f * region_keep, with `fill[c]` written where `region_fill` is set
/// and zero elsewhere.
void masked_fill(const FeatureMap& f, const BinaryMask& keep, const BinaryMask& fill_region,
                 std::span<const double> fill, FeatureMap& out);

/// Per-channel population mean and standard deviation.
void channel_stats(const FeatureMap& h, std::span<double> mean, std::span<double> stddev);

/// out = gamma * (h - mean_c) / (std_c + eps) + beta.
void modulate(const FeatureMap& h, const FeatureMap& gamma, const FeatureMap& beta,
              std::span<const double> mean, std::span<const double> stddev, double eps,
              FeatureMap& out);

namespace reference {

void warp_bilinear(const RasterImage& src, const BinaryMask& src_valid,
                   const Homography& dst_to_src, RasterImage& dst, BinaryMask& dst_valid);
void composite(std::span<const Layer> layers, RasterImage& out, BinaryMask& coverage);
void mask_and(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);
void mask_and_not(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);
void mask_or(const BinaryMask& a, const BinaryMask& b, BinaryMask& out);
void masked_channel_means(const FeatureMap& f, const BinaryMask& region,
                          std::span<double> means);
void masked_fill(const FeatureMap& f, const BinaryMask& keep, const BinaryMask& fill_region,
                 std::span<const double> fill, FeatureMap& out);
void channel_stats(const FeatureMap& h, std::span<double> mean, std::span<double> stddev);
void modulate(const FeatureMap& h, const FeatureMap& gamma, const FeatureMap& beta,
              std::span<const double> mean, std::span<const double> stddev, double eps,
              FeatureMap& out);

}  // namespace reference

}  // namespace patchroute::kernels
