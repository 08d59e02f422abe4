// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/image.hpp"

#include <algorithm>
#include <string>

#include "patchroute/error.hpp"

namespace patchroute {

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3 && channels != 4)) {
    throw Error(ErrorCode::InvalidArgument, "invalid raster image geometry");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3 && channels != 4)) {
    throw Error(ErrorCode::InvalidArgument, "invalid raster image geometry");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer length " + std::to_string(pixels_.size()) +
                    " does not match " + std::to_string(width) + "x" +
                    std::to_string(height) + "x" + std::to_string(channels));
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative mask size");
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

FeatureMap::FeatureMap(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative feature map shape");
  }
  values_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

}  // namespace patchroute
