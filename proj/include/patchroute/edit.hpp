// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Patch-level garment editing. All edits act on normalized template-space
// validity masks, so an edit made once holds for any target pose.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "patchroute/person.hpp"
#include "patchroute/warp.hpp"

namespace patchroute {

enum class DressingOrder { TuckIn, TuckOut };
enum class AxisEnd { Proximal, Distal };
enum class LayerId { Upper, Lower };

std::string_view to_string(DressingOrder order);
std::optional<DressingOrder> parse_dressing_order(std::string_view name);

struct GarmentLayer {
  PatchSet patches;
  WarpedGarment warped;

  friend bool operator==(const GarmentLayer&, const GarmentLayer&) = default;
};

struct TryOnBundle {
  std::optional<GarmentLayer> upper;
  std::optional<GarmentLayer> lower;
  DressingOrder dressing_order = DressingOrder::TuckIn;
  PoseSkeleton target_pose;
  LayoutParams params;
  // Torso masks as they were before any dressing-order edit; set once an
  // order has been applied so that switching orders never compounds.
  std::optional<BinaryMask> upper_torso_base;
  std::optional<BinaryMask> lower_torso_base;

  friend bool operator==(const TryOnBundle&, const TryOnBundle&) = default;
};

/// Renders both layers onto the target pose; order stays TuckIn and no
/// torso masks are touched.
TryOnBundle make_bundle(std::optional<PatchSet> upper, std::optional<PatchSet> lower,
                        const PoseSkeleton& target_pose, const LayoutParams& params = {});

/// Final garment image: the lower layer is drawn over the upper one for
/// TuckIn and under it for TuckOut.
WarpedGarment composite_bundle(const TryOnBundle& bundle);

TryOnBundle set_dressing_order(const TryOnBundle& bundle, DressingOrder order);

struct SetDressingOrder {
  DressingOrder order = DressingOrder::TuckIn;
};
struct TrimPatch {
  LayerId layer = LayerId::Upper;
  PatchSlot slot = PatchSlot::Torso;
  double fraction = 1.0;
  AxisEnd end = AxisEnd::Proximal;
};
struct DropPatch {
  LayerId layer = LayerId::Upper;
  PatchSlot slot = PatchSlot::Torso;
};
struct ReplacePatch {
  LayerId layer = LayerId::Upper;
  PatchSlot slot = PatchSlot::Torso;
  PatchSet donor;
};

using EditCommand = std::variant<SetDressingOrder, TrimPatch, DropPatch, ReplacePatch>;
using EditScript = std::vector<EditCommand>;

/// TrimPatch keeps the first `fraction` of template rows counted from the
/// given end of the limb axis; DropPatch removes the slot.
PatchSet local_shape_edit(const PatchSet& patches, const TrimPatch& cmd);
PatchSet local_shape_edit(const PatchSet& patches, const DropPatch& cmd);
PatchSet replace_patch(const PatchSet& patches, const ReplacePatch& cmd);

/// Applies commands in order, re-rendering touched layers.
TryOnBundle apply_edit_script(const TryOnBundle& bundle, const EditScript& script);

struct TransferResult {
  PatchSet shape_patches;
  WarpedGarment texture_warp;
};

/// Shape guidance from `shape_source`, texture guidance from
/// `texture_source` retargeted to `target_pose`.
TransferResult transfer_pairing(const PatchSet& shape_source, const PatchSet& texture_source,
                                const PoseSkeleton& target_pose,
                                const LayoutParams& params = {});

/// Warps the upper source's upper garment (or dress) and the lower source's
/// lower garment onto the target and tucks in.
TryOnBundle outfit_compose(const PersonRecord& upper_source, const PersonRecord& lower_source,
                           const PersonRecord& target, const LayoutParams& params = {});

}  // namespace patchroute
