// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "patchroute/error.hpp"
#include "sampling.hpp"

namespace patchroute::kernels {

namespace {

void require_rgba_target(const RasterImage& dst, const BinaryMask& dst_valid) {
  if (dst.channels() != 4 || dst.size() != dst_valid.size()) {
    throw Error(ErrorCode::DimensionMismatch, "warp target must be RGBA with a matching mask");
  }
}

void require_same(const BinaryMask& a, const BinaryMask& b, const BinaryMask& out) {
  if (a.size() != b.size() || a.size() != out.size()) {
    throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
  }
}

void require_layers(std::span<const Layer> layers, const RasterImage& out,
                    const BinaryMask& coverage) {
  if (out.channels() != 4 || out.size() != coverage.size()) {
    throw Error(ErrorCode::CanvasMismatch, "composite target must be RGBA with a matching mask");
  }
  for (const Layer& l : layers) {
    if (l.rgba->size() != out.size() || l.valid->size() != out.size() || l.rgba->channels() != 4) {
      throw Error(ErrorCode::CanvasMismatch, "layer does not match the canvas");
    }
  }
}

void require_plane_mask(const FeatureMap& f, const BinaryMask& m) {
  if (m.width() != f.width() || m.height() != f.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask does not match feature map plane");
  }
}

}  // namespace

void warp_bilinear(const RasterImage& src, const BinaryMask& src_valid,
                   const Homography& dst_to_src, PixelRect roi, RasterImage& dst,
                   BinaryMask& dst_valid) {
  require_rgba_target(dst, dst_valid);
  if (src.size() != src_valid.size()) {
    throw Error(ErrorCode::DimensionMismatch, "source validity mask does not match source");
  }
  roi.x0 = std::max(roi.x0, 0);
  roi.y0 = std::max(roi.y0, 0);
  roi.x1 = std::min(roi.x1, dst.width());
  roi.y1 = std::min(roi.y1, dst.height());
  const Homography::Matrix m = dst_to_src.matrix();
  const int width = dst.width();
  std::uint8_t* out = dst.data().data();
  std::uint8_t* valid = dst_valid.data().data();

#pragma omp parallel for schedule(static)
  for (int y = roi.y0; y < roi.y1; ++y) {
    for (int x = roi.x0; x < roi.x1; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * width + x;
      std::uint8_t* px = out + idx * 4;
      double sx, sy;
      const bool ok = detail::map_point(m, x, y, sx, sy) &&
                      detail::sample_pixel(src, src_valid, sx, sy, px);
      if (!ok) std::memset(px, 0, 4);
      valid[idx] = ok ? 1 : 0;
    }
  }
}

void composite(std::span<const Layer> layers, RasterImage& out, BinaryMask& coverage) {
  require_layers(layers, out, coverage);
  const long n = static_cast<long>(out.size().area());
  std::uint8_t* dst = out.data().data();
  std::uint8_t* cov = coverage.data().data();

#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    int winner = -1;
    for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
      if (layers[l].valid->data()[i]) {
        winner = l;
        break;
      }
    }
    if (winner < 0) {
      std::memset(dst + i * 4, 0, 4);
      cov[i] = 0;
    } else {
      std::memcpy(dst + i * 4, layers[winner].rgba->data().data() + i * 4, 4);
      cov[i] = 1;
    }
  }
}

void mask_and(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  const long n = static_cast<long>(a.size().area());
  const auto* pa = a.data().data();
  const auto* pb = b.data().data();
  auto* po = out.data().data();
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) po[i] = pa[i] & pb[i];
}

void mask_and_not(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  const long n = static_cast<long>(a.size().area());
  const auto* pa = a.data().data();
  const auto* pb = b.data().data();
  auto* po = out.data().data();
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) po[i] = pa[i] & (pb[i] ^ 1);
}

void mask_or(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  const long n = static_cast<long>(a.size().area());
  const auto* pa = a.data().data();
  const auto* pb = b.data().data();
  auto* po = out.data().data();
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) po[i] = pa[i] | pb[i];
}

void masked_channel_means(const FeatureMap& f, const BinaryMask& region,
                          std::span<double> means) {
  require_plane_mask(f, region);
  const int channels = f.channels();
  const std::size_t plane = f.plane_size();
  const auto* bits = region.data().data();
  std::size_t count = region.count();

#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    const float* v = f.plane(c).data();
    double sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      if (bits[i]) sum += v[i];
    }
    means[c] = count ? sum / static_cast<double>(count) : 0.0;
  }
}

void masked_fill(const FeatureMap& f, const BinaryMask& keep, const BinaryMask& fill_region,
                 std::span<const double> fill, FeatureMap& out) {
  require_plane_mask(f, keep);
  require_plane_mask(f, fill_region);
  const int channels = f.channels();
  const long plane = static_cast<long>(f.plane_size());
  const auto* k = keep.data().data();
  const auto* r = fill_region.data().data();
  const float* src = f.data().data();
  float* dst = out.data().data();

#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < channels; ++c) {
    for (long i = 0; i < plane; ++i) {
      const long idx = c * plane + i;
      dst[idx] = r[i] ? static_cast<float>(fill[c]) : (k[i] ? src[idx] : 0.0f);
    }
  }
}

void channel_stats(const FeatureMap& h, std::span<double> mean, std::span<double> stddev) {
  const int channels = h.channels();
  const std::size_t plane = h.plane_size();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    const float* v = h.plane(c).data();
    double sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) sum += v[i];
    const double mu = plane ? sum / static_cast<double>(plane) : 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      const double d = v[i] - mu;
      sq += d * d;
    }
    mean[c] = mu;
    stddev[c] = plane ? std::sqrt(sq / static_cast<double>(plane)) : 0.0;
  }
}

void modulate(const FeatureMap& h, const FeatureMap& gamma, const FeatureMap& beta,
              std::span<const double> mean, std::span<const double> stddev, double eps,
              FeatureMap& out) {
  const int channels = h.channels();
  const long plane = static_cast<long>(h.plane_size());
  const float* ph = h.data().data();
  const float* pg = gamma.data().data();
  const float* pb = beta.data().data();
  float* po = out.data().data();

#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < channels; ++c) {
    for (long i = 0; i < plane; ++i) {
      const long idx = c * plane + i;
      const double z = (ph[idx] - mean[c]) / (stddev[c] + eps);
      po[idx] = static_cast<float>(pg[idx] * z + pb[idx]);
    }
  }
}

// ---------------------------------------------------------------------------

namespace reference {

void warp_bilinear(const RasterImage& src, const BinaryMask& src_valid,
                   const Homography& dst_to_src, RasterImage& dst, BinaryMask& dst_valid) {
  require_rgba_target(dst, dst_valid);
  for (int y = 0; y < dst.height(); ++y) {
    for (int x = 0; x < dst.width(); ++x) {
      std::uint8_t px[4] = {0, 0, 0, 0};
      bool ok = false;
      try {
        const Point2 s = apply_homography(dst_to_src, {double(x), double(y)});
        ok = detail::sample_pixel(src, src_valid, s.x, s.y, px);
      } catch (const Error&) {
        ok = false;
      }
      for (int c = 0; c < 4; ++c) dst.at(x, y, c) = ok ? px[c] : 0;
      dst_valid.at(x, y) = ok ? 1 : 0;
    }
  }
}

void composite(std::span<const Layer> layers, RasterImage& out, BinaryMask& coverage) {
  require_layers(layers, out, coverage);
  std::fill(out.data().begin(), out.data().end(), 0);
  std::fill(coverage.data().begin(), coverage.data().end(), 0);
  for (const Layer& layer : layers) {
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        if (!layer.valid->at(x, y)) continue;
        for (int c = 0; c < 4; ++c) out.at(x, y, c) = layer.rgba->at(x, y, c);
        coverage.at(x, y) = 1;
      }
    }
  }
}

void mask_and(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.at(x, y) = (a.at(x, y) && b.at(x, y)) ? 1 : 0;
}

void mask_and_not(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.at(x, y) = (a.at(x, y) && !b.at(x, y)) ? 1 : 0;
}

void mask_or(const BinaryMask& a, const BinaryMask& b, BinaryMask& out) {
  require_same(a, b, out);
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.at(x, y) = (a.at(x, y) || b.at(x, y)) ? 1 : 0;
}

void masked_channel_means(const FeatureMap& f, const BinaryMask& region,
                          std::span<double> means) {
  require_plane_mask(f, region);
  for (int c = 0; c < f.channels(); ++c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        if (!region.at(x, y)) continue;
        sum += f.at(c, y, x);
        ++count;
      }
    }
    means[c] = count ? sum / static_cast<double>(count) : 0.0;
  }
}

void masked_fill(const FeatureMap& f, const BinaryMask& keep, const BinaryMask& fill_region,
                 std::span<const double> fill, FeatureMap& out) {
  require_plane_mask(f, keep);
  require_plane_mask(f, fill_region);
  for (int c = 0; c < f.channels(); ++c) {
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        float v = 0.0f;
        if (fill_region.at(x, y)) {
          v = static_cast<float>(fill[c]);
        } else if (keep.at(x, y)) {
          v = f.at(c, y, x);
        }
        out.at(c, y, x) = v;
      }
    }
  }
}

void channel_stats(const FeatureMap& h, std::span<double> mean, std::span<double> stddev) {
  const double n = static_cast<double>(h.plane_size());
  for (int c = 0; c < h.channels(); ++c) {
    double sum = 0.0;
    for (int y = 0; y < h.height(); ++y)
      for (int x = 0; x < h.width(); ++x) sum += h.at(c, y, x);
    const double mu = n > 0 ? sum / n : 0.0;
    double sq = 0.0;
    for (int y = 0; y < h.height(); ++y) {
      for (int x = 0; x < h.width(); ++x) {
        const double d = h.at(c, y, x) - mu;
        sq += d * d;
      }
    }
    mean[c] = mu;
    stddev[c] = n > 0 ? std::sqrt(sq / n) : 0.0;
  }
}

void modulate(const FeatureMap& h, const FeatureMap& gamma, const FeatureMap& beta,
              std::span<const double> mean, std::span<const double> stddev, double eps,
              FeatureMap& out) {
  for (int c = 0; c < h.channels(); ++c) {
    for (int y = 0; y < h.height(); ++y) {
      for (int x = 0; x < h.width(); ++x) {
        const double z = (h.at(c, y, x) - mean[c]) / (stddev[c] + eps);
        out.at(c, y, x) = static_cast<float>(gamma.at(c, y, x) * z + beta.at(c, y, x));
      }
    }
  }
}

}  // namespace reference

}  // namespace patchroute::kernels
