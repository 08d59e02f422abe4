// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "patchroute/error.hpp"
#include "patchroute/kernels.hpp"

namespace patchroute {

namespace {

constexpr double kCornerTolerance = 1e-6;

kernels::PixelRect quad_bounds(const Quadrilateral& q, Size canvas) {
  double x0 = q.corners[0].x, x1 = x0, y0 = q.corners[0].y, y1 = y0;
  for (const auto& p : q.corners) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  kernels::PixelRect r;
  r.x0 = std::clamp(static_cast<int>(std::floor(x0)) - 1, 0, canvas.width);
  r.y0 = std::clamp(static_cast<int>(std::floor(y0)) - 1, 0, canvas.height);
  r.x1 = std::clamp(static_cast<int>(std::ceil(x1)) + 2, 0, canvas.width);
  r.y1 = std::clamp(static_cast<int>(std::ceil(y1)) + 2, 0, canvas.height);
  return r;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

class StrokePainter {
 public:
  StrokePainter(const BinaryMask& allowed, std::size_t max_pixels)
      : allowed_(allowed), erased_(allowed.width(), allowed.height()), max_(max_pixels) {}

  // Paints a disc clipped to the allowed region. If the full disc would
  // overshoot the pixel budget it is shrunk; returns false once the budget
  // is exhausted.
  bool disc(double cx, double cy, int radius) {
    if (count_ >= max_) return false;
    for (int r = radius; r >= 0; --r) {
      if (count_ + fresh_in_disc(cx, cy, r) <= max_) {
        fill_disc(cx, cy, r);
        return count_ < max_;
      }
    }
    return count_ < max_;
  }

  bool erased(int x, int y) const { return erased_.at(x, y) != 0; }
  void mark(int x, int y) {
    if (allowed_.at(x, y) && !erased_.at(x, y)) {
      erased_.at(x, y) = 1;
      ++count_;
    }
  }
  std::size_t count() const { return count_; }
  const BinaryMask& mask() const { return erased_; }

 private:
  template <typename F>
  void for_disc(double cx, double cy, int r, F&& f) const {
    const int icx = static_cast<int>(std::lround(cx));
    const int icy = static_cast<int>(std::lround(cy));
    const int y0 = std::max(icy - r, 0), y1 = std::min(icy + r, allowed_.height() - 1);
    const int x0 = std::max(icx - r, 0), x1 = std::min(icx + r, allowed_.width() - 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const int dx = x - icx, dy = y - icy;
        if (dx * dx + dy * dy <= r * r) f(x, y);
      }
    }
  }

  std::size_t fresh_in_disc(double cx, double cy, int r) const {
    std::size_t n = 0;
    for_disc(cx, cy, r, [&](int x, int y) {
      if (allowed_.at(x, y) && !erased_.at(x, y)) ++n;
    });
    return n;
  }

  void fill_disc(double cx, double cy, int r) {
    for_disc(cx, cy, r, [&](int x, int y) { mark(x, y); });
  }

  const BinaryMask& allowed_;
  BinaryMask erased_;
  std::size_t max_;
  std::size_t count_ = 0;
};

// One random-walk brush stroke; returns false once the budget is spent.
bool paint_stroke(std::mt19937_64& rng, const EraseParams& p,
                  const std::vector<std::size_t>& candidates, Size canvas,
                  StrokePainter& painter) {
  const int width = uniform_int(rng, p.min_width, p.max_width);
  const int steps = uniform_int(rng, p.min_steps, p.max_steps);
  const std::size_t start = candidates[rng() % candidates.size()];
  double x = static_cast<double>(start % canvas.width);
  double y = static_cast<double>(start / canvas.width);
  double angle = uniform01(rng) * 2.0 * std::numbers::pi;
  const int radius = width / 2;
  for (int s = 0; s < steps; ++s) {
    if (!painter.disc(x, y, radius)) return false;
    angle += (uniform01(rng) - 0.5) * (std::numbers::pi / 2.0);
    const double step = radius * (0.5 + 0.5 * uniform01(rng));
    x = std::clamp(x + step * std::cos(angle), 0.0, canvas.width - 1.0);
    y = std::clamp(y + step * std::sin(angle), 0.0, canvas.height - 1.0);
  }
  return true;
}

}  // namespace

const std::array<Point2, 4>& template_corners() {
  static const std::array<Point2, 4> corners{
      Point2{0.0, 0.0}, Point2{kPatchSize - 1.0, 0.0}, Point2{kPatchSize - 1.0, kPatchSize - 1.0},
      Point2{0.0, kPatchSize - 1.0}};
  return corners;
}

const ZOrder& default_z_order() {
  static const ZOrder order{PatchSlot::Torso,         PatchSlot::LeftUpperLeg,
                            PatchSlot::RightUpperLeg, PatchSlot::LeftLowerLeg,
                            PatchSlot::RightLowerLeg, PatchSlot::LeftUpperArm,
                            PatchSlot::RightUpperArm, PatchSlot::LeftLowerArm,
                            PatchSlot::RightLowerArm, PatchSlot::Neck};
  return order;
}

void validate_patchset(const PatchSet& set) {
  for (const auto& [slot, patch] : set.patches) {
    if (!slot_in_category(slot, set.category)) {
      throw Error(ErrorCode::CategoryMismatch, std::string("slot ") + std::string(to_string(slot)) +
                                                   " is not part of category " +
                                                   std::string(to_string(set.category)));
    }
    if (patch.slot != slot || patch.image.width() != kPatchSize ||
        patch.image.height() != kPatchSize || patch.image.channels() != 4 ||
        patch.valid_mask.size() != Size{kPatchSize, kPatchSize}) {
      throw Error(ErrorCode::CorruptArchive, "malformed normalized patch");
    }
  }
}

NormalizedPatch normalize_patch(const RasterImage& source, const Quadrilateral& quad,
                                PatchSlot slot, const BinaryMask& garment_mask) {
  if (source.size() != garment_mask.size()) {
    throw Error(ErrorCode::DimensionMismatch, "garment mask does not match source image");
  }
  validate_quad(quad);
  NormalizedPatch patch;
  patch.slot = slot;
  patch.source_quad = quad;
  patch.h_source_to_norm = estimate_homography_dlt(quad.corners, template_corners());
  patch.image = RasterImage(kPatchSize, kPatchSize, 4);
  patch.valid_mask = BinaryMask(kPatchSize, kPatchSize);
  kernels::warp_bilinear(source, garment_mask, invert(patch.h_source_to_norm),
                         {0, 0, kPatchSize, kPatchSize}, patch.image, patch.valid_mask);
  return patch;
}

RenderedPatch retarget_patch(const NormalizedPatch& patch, const Quadrilateral& target_quad,
                             Size canvas) {
  validate_quad(target_quad);
  RenderedPatch out;
  out.slot = patch.slot;
  out.h_norm_to_target = estimate_homography_dlt(template_corners(), target_quad.corners);
  out.image = RasterImage(canvas.width, canvas.height, 4);
  out.valid = BinaryMask(canvas.width, canvas.height);
  kernels::warp_bilinear(patch.image, patch.valid_mask, invert(out.h_norm_to_target),
                         quad_bounds(target_quad, canvas), out.image, out.valid);
  return out;
}

WarpedGarment stitch(const std::vector<RenderedPatch>& rendered, Size canvas,
                     const ZOrder& z_order) {
  auto rank = [&](PatchSlot s) {
    const auto it = std::find(z_order.begin(), z_order.end(), s);
    return it == z_order.end() ? -1 : static_cast<int>(it - z_order.begin());
  };
  std::vector<const RenderedPatch*> ordered;
  for (const auto& r : rendered) {
    if (r.image.size() != canvas || r.valid.size() != canvas || r.image.channels() != 4) {
      throw Error(ErrorCode::CanvasMismatch, "rendered patch does not match the canvas");
    }
    ordered.push_back(&r);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const RenderedPatch* a, const RenderedPatch* b) {
                     return rank(a->slot) < rank(b->slot);
                   });
  std::vector<kernels::Layer> layers;
  for (const auto* r : ordered) layers.push_back({&r->image, &r->valid});

  WarpedGarment g{RasterImage(canvas.width, canvas.height, 4),
                  BinaryMask(canvas.width, canvas.height)};
  kernels::composite(layers, g.image, g.mask);
  return g;
}

RenderResult render_patchset(const PatchSet& set, const PoseSkeleton& target_pose,
                             const LayoutParams& params, const ZOrder& z_order) {
  const PatchLayout target = build_layout(target_pose, set.category, params);
  RenderResult result;
  std::vector<RenderedPatch> rendered;
  for (const auto& [slot, patch] : set.patches) {
    const auto it = target.quads.find(slot);
    if (it == target.quads.end()) continue;
    rendered.push_back(retarget_patch(patch, it->second, target_pose.canvas));
    result.h_norm_to_target.emplace(slot, rendered.back().h_norm_to_target);
    result.target_quads.emplace(slot, it->second);
  }
  if (rendered.empty()) {
    throw Error(ErrorCode::NoCommonSlots, "patch set and target layout share no present slot");
  }
  result.garment = stitch(rendered, target_pose.canvas, z_order);
  return result;
}

PatchSet decompose_garment(const RasterImage& source_image, const ParsingMap& source_parsing,
                           const PoseSkeleton& source_pose, GarmentCategory category,
                           const LayoutParams& params) {
  if (source_image.size() != source_parsing.size() || source_image.size() != source_pose.canvas) {
    throw Error(ErrorCode::DimensionMismatch, "image, parsing and pose canvas sizes differ");
  }
  const BinaryMask mask = garment_mask(source_parsing, category);
  const PatchLayout layout = build_layout(source_pose, category, params);
  PatchSet set;
  set.category = category;
  set.source_pose = source_pose;
  for (const auto& [slot, quad] : layout.quads) {
    set.patches.emplace(slot, normalize_patch(source_image, quad, slot, mask));
  }
  return set;
}

WarpOutput warp_garment(const RasterImage& source_image, const ParsingMap& source_parsing,
                        const PoseSkeleton& source_pose, const PoseSkeleton& target_pose,
                        GarmentCategory category, const LayoutParams& params,
                        const ZOrder& z_order) {
  if (source_image.size() != source_parsing.size() || source_image.size() != source_pose.canvas) {
    throw Error(ErrorCode::DimensionMismatch, "image, parsing and pose canvas sizes differ");
  }
  const PatchLayout source_layout = build_layout(source_pose, category, params);
  const PatchLayout target_layout = build_layout(target_pose, category, params);
  const BinaryMask mask = garment_mask(source_parsing, category);

  WarpOutput out;
  out.patches.category = category;
  out.patches.source_pose = source_pose;
  for (const auto& [slot, quad] : source_layout.quads) {
    if (!target_layout.present(slot)) continue;
    out.patches.patches.emplace(slot, normalize_patch(source_image, quad, slot, mask));
  }
  if (out.patches.patches.empty()) {
    throw Error(ErrorCode::NoCommonSlots, "source and target layouts share no present slot");
  }
  RenderResult r = render_patchset(out.patches, target_pose, params, z_order);
  out.garment = std::move(r.garment);
  out.h_norm_to_target = std::move(r.h_norm_to_target);
  return out;
}

void validate_erase_params(const EraseParams& p) {
  if (p.min_strokes < 1 || p.max_strokes < p.min_strokes || p.min_width < 1 ||
      p.max_width < p.min_width || p.min_steps < 1 || p.max_steps < p.min_steps ||
      !(p.min_fraction >= 0.0) || !(p.max_fraction <= 1.0) || p.min_fraction > p.max_fraction) {
    throw Error(ErrorCode::InvalidArgument, "inconsistent erase parameters");
  }
}

EraseResult random_erase_report(const WarpedGarment& g, std::uint64_t seed, double alpha,
                                const EraseParams& params) {
  validate_erase_params(params);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "erase probability must lie in [0,1]");
  }
  EraseResult result{g, false, 0};
  std::mt19937_64 rng(seed);
  if (!(uniform01(rng) < alpha)) return result;
  result.applied = true;

  const Size canvas = g.mask.size();
  std::vector<std::size_t> candidates;
  const auto bits = g.mask.data();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) candidates.push_back(i);
  }
  const std::size_t total = candidates.size();
  if (total == 0) return result;

  const auto max_px = static_cast<std::size_t>(std::floor(params.max_fraction * total));
  const auto min_px =
      std::min(max_px, static_cast<std::size_t>(std::ceil(params.min_fraction * total)));

  StrokePainter painter(g.mask, max_px);
  const int strokes = uniform_int(rng, params.min_strokes, params.max_strokes);
  bool open = true;
  for (int s = 0; s < strokes && open; ++s) {
    open = paint_stroke(rng, params, candidates, canvas, painter);
  }
  for (int extra = 0; extra < 64 && open && painter.count() < min_px; ++extra) {
    open = paint_stroke(rng, params, candidates, canvas, painter);
  }
  if (painter.count() < min_px) {
    // Top up along the mask scan order from a random offset.
    const std::size_t offset = rng() % total;
    for (std::size_t k = 0; k < total && painter.count() < min_px; ++k) {
      const std::size_t idx = candidates[(offset + k) % total];
      painter.mark(static_cast<int>(idx % canvas.width), static_cast<int>(idx / canvas.width));
    }
  }

  const auto erased = painter.mask().data();
  auto px = result.garment.image.data();
  auto mask = result.garment.mask.data();
  const int ch = result.garment.image.channels();
  for (std::size_t i = 0; i < erased.size(); ++i) {
    if (!erased[i]) continue;
    mask[i] = 0;
    std::fill_n(px.begin() + static_cast<long>(i * ch), ch, std::uint8_t{0});
  }
  result.erased_pixels = painter.count();
  return result;
}

WarpedGarment random_erase(const WarpedGarment& g, std::uint64_t seed, double alpha,
                           const EraseParams& params) {
  return random_erase_report(g, seed, alpha, params).garment;
}

}  // namespace patchroute
