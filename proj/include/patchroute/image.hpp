// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace patchroute {

struct Size {
  int width = 0;
  int height = 0;

  std::size_t area() const { return static_cast<std::size_t>(width) * height; }
  friend bool operator==(const Size&, const Size&) = default;
};

/// Default canvas for person images and warped garments.
inline constexpr Size kDefaultCanvas{320, 512};

/// Interleaved row-major 8-bit image with 1, 3 or 4 channels.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  Size size() const { return {width_, height_}; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t& at(int x, int y, int c) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<std::uint8_t> data() { return pixels_; }
  std::span<const std::uint8_t> data() const { return pixels_; }
  const std::vector<std::uint8_t>& bytes() const { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// One byte per pixel, each 0 or 1.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  Size size() const { return {width_, height_}; }

  std::uint8_t& at(int x, int y) { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<std::uint8_t> data() { return bits_; }
  std::span<const std::uint8_t> data() const { return bits_; }

  std::size_t count() const;
  bool any() const { return count() != 0; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Channel-major C x H x W grid of floats.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, float fill = 0.0f);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(height_) * width_; }

  float& at(int c, int y, int x) {
    return values_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }
  float at(int c, int y, int x) const {
    return values_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<float> plane(int c) { return {values_.data() + c * plane_size(), plane_size()}; }
  std::span<const float> plane(int c) const {
    return {values_.data() + c * plane_size(), plane_size()};
  }

  std::span<float> data() { return values_; }
  std::span<const float> data() const { return values_; }

  bool same_shape(const FeatureMap& o) const {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> values_;
};

}  // namespace patchroute
