// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"
#include "patchroute/masks_features.hpp"
#include "patchroute/patch_layout.hpp"

namespace patchroute {

inline constexpr int kPatchSize = 128;

/// Template corners paired with a quad's semantic corner order.
const std::array<Point2, 4>& template_corners();

struct NormalizedPatch {
  PatchSlot slot = PatchSlot::Torso;
  RasterImage image;      // 128 x 128 RGBA
  Quadrilateral source_quad;
  Homography h_source_to_norm;
  BinaryMask valid_mask;  // 128 x 128

  friend bool operator==(const NormalizedPatch&, const NormalizedPatch&) = default;
};

struct PatchSet {
  GarmentCategory category = GarmentCategory::Upper;
  std::map<PatchSlot, NormalizedPatch> patches;
  PoseSkeleton source_pose;

  friend bool operator==(const PatchSet&, const PatchSet&) = default;
};

/// Throws CategoryMismatch if a patch slot is outside the category or a
/// patch is malformed.
void validate_patchset(const PatchSet& set);

struct WarpedGarment {
  RasterImage image;  // canvas-size RGBA, alpha = 255 * mask
  BinaryMask mask;    // M_t

  friend bool operator==(const WarpedGarment&, const WarpedGarment&) = default;
};

struct RenderedPatch {
  PatchSlot slot = PatchSlot::Torso;
  RasterImage image;  // canvas-size RGBA
  BinaryMask valid;
  Homography h_norm_to_target;
};

/// Bottom-to-top drawing order used by `stitch`.
using ZOrder = std::vector<PatchSlot>;
const ZOrder& default_z_order();

NormalizedPatch normalize_patch(const RasterImage& source, const Quadrilateral& quad,
                                PatchSlot slot, const BinaryMask& garment_mask);

RenderedPatch retarget_patch(const NormalizedPatch& patch, const Quadrilateral& target_quad,
                             Size canvas);

/// Composites rendered patches in z-order (later overwrites earlier).
/// Slots missing from `z_order` are drawn first in input order.
WarpedGarment stitch(const std::vector<RenderedPatch>& rendered, Size canvas,
                     const ZOrder& z_order = default_z_order());

/// Retargets every patch of `set` that also has a quad in the target layout
/// and stitches the results.
struct RenderResult {
  WarpedGarment garment;
  std::map<PatchSlot, Homography> h_norm_to_target;
  std::map<PatchSlot, Quadrilateral> target_quads;
};
RenderResult render_patchset(const PatchSet& set, const PoseSkeleton& target_pose,
                             const LayoutParams& params = {},
                             const ZOrder& z_order = default_z_order());

struct WarpOutput {
  PatchSet patches;
  WarpedGarment garment;
  std::map<PatchSlot, Homography> h_norm_to_target;
};

/// Source layout -> normalize -> target layout -> retarget -> stitch, over
/// the slots present in both layouts.
WarpOutput warp_garment(const RasterImage& source_image, const ParsingMap& source_parsing,
                        const PoseSkeleton& source_pose, const PoseSkeleton& target_pose,
                        GarmentCategory category, const LayoutParams& params = {},
                        const ZOrder& z_order = default_z_order());

/// Normalizes every present slot of the source layout (no target needed).
PatchSet decompose_garment(const RasterImage& source_image, const ParsingMap& source_parsing,
                           const PoseSkeleton& source_pose, GarmentCategory category,
                           const LayoutParams& params = {});

struct EraseParams {
  int min_strokes = 1;
  int max_strokes = 4;
  int min_width = 8;
  int max_width = 24;
  int min_steps = 20;
  int max_steps = 60;
  double min_fraction = 0.05;
  double max_fraction = 0.25;
};

inline constexpr double kDefaultEraseProbability = 0.9;

void validate_erase_params(const EraseParams& params);

struct EraseResult {
  WarpedGarment garment;
  bool applied = false;
  std::size_t erased_pixels = 0;
};

/// With probability `alpha` erases free-form brush strokes inside M_t.
/// Deterministic in (input, seed, alpha, params).
EraseResult random_erase_report(const WarpedGarment& g, std::uint64_t seed, double alpha,
                                const EraseParams& params = {});
WarpedGarment random_erase(const WarpedGarment& g, std::uint64_t seed, double alpha,
                           const EraseParams& params = {});

}  // namespace patchroute
