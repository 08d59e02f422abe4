// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/edit.hpp"

#include <cmath>
#include <string>

#include "patchroute/error.hpp"
#include "patchroute/kernels.hpp"

namespace patchroute {

namespace {

GarmentLayer& layer_ref(TryOnBundle& b, LayerId id) {
  auto& layer = id == LayerId::Upper ? b.upper : b.lower;
  if (!layer) {
    throw Error(ErrorCode::MissingLayer,
                std::string(id == LayerId::Upper ? "upper" : "lower") + " layer is absent");
  }
  return *layer;
}

std::optional<BinaryMask>& torso_base(TryOnBundle& b, LayerId id) {
  return id == LayerId::Upper ? b.upper_torso_base : b.lower_torso_base;
}

void rerender(GarmentLayer& layer, const TryOnBundle& b) {
  layer.warped = render_patchset(layer.patches, b.target_pose, b.params).garment;
}

NormalizedPatch* torso_of(std::optional<GarmentLayer>& layer) {
  if (!layer) return nullptr;
  auto it = layer->patches.patches.find(PatchSlot::Torso);
  return it == layer->patches.patches.end() ? nullptr : &it->second;
}

double cross(Point2 a, Point2 b, Point2 p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

void trim_mask(BinaryMask& mask, double fraction, AxisEnd end) {
  const int keep = static_cast<int>(std::lround(fraction * mask.height()));
  for (int y = 0; y < mask.height(); ++y) {
    const bool kept = end == AxisEnd::Proximal ? y < keep : y >= mask.height() - keep;
    if (kept) continue;
    for (int x = 0; x < mask.width(); ++x) mask.at(x, y) = 0;
  }
}

// Clears template pixels of the upper torso that land below the lower
// garment's waistline.
void clip_below_waist(NormalizedPatch& upper_torso, const Quadrilateral& upper_quad,
                      const Quadrilateral& lower_quad) {
  const Point2 a = lower_quad.corners[0];
  const Point2 b = lower_quad.corners[1];
  const Point2 hem = 0.5 * (lower_quad.corners[2] + lower_quad.corners[3]);
  const double below = cross(a, b, hem) > 0 ? 1.0 : -1.0;
  const Homography h = estimate_homography_dlt(template_corners(), upper_quad.corners);
  for (int y = 0; y < kPatchSize; ++y) {
    for (int x = 0; x < kPatchSize; ++x) {
      if (!upper_torso.valid_mask.at(x, y)) continue;
      const Point2 p = apply_homography(h, {double(x), double(y)});
      if (below * cross(a, b, p) > 0) upper_torso.valid_mask.at(x, y) = 0;
    }
  }
}

// Clears template pixels of the lower torso hidden under the upper layer.
void occlude_by(NormalizedPatch& lower_torso, const Quadrilateral& lower_quad,
                const BinaryMask& upper_coverage) {
  const Homography h = estimate_homography_dlt(template_corners(), lower_quad.corners);
  for (int y = 0; y < kPatchSize; ++y) {
    for (int x = 0; x < kPatchSize; ++x) {
      if (!lower_torso.valid_mask.at(x, y)) continue;
      const Point2 p = apply_homography(h, {double(x), double(y)});
      const long px = std::lround(p.x), py = std::lround(p.y);
      if (px < 0 || py < 0 || px >= upper_coverage.width() || py >= upper_coverage.height()) {
        continue;
      }
      if (upper_coverage.at(static_cast<int>(px), static_cast<int>(py))) {
        lower_torso.valid_mask.at(x, y) = 0;
      }
    }
  }
}

}  // namespace

std::string_view to_string(DressingOrder order) {
  return order == DressingOrder::TuckIn ? "tuck_in" : "tuck_out";
}

std::optional<DressingOrder> parse_dressing_order(std::string_view name) {
  if (name == "tuck_in") return DressingOrder::TuckIn;
  if (name == "tuck_out") return DressingOrder::TuckOut;
  return std::nullopt;
}

TryOnBundle make_bundle(std::optional<PatchSet> upper, std::optional<PatchSet> lower,
                        const PoseSkeleton& target_pose, const LayoutParams& params) {
  if (!upper && !lower) throw Error(ErrorCode::MissingLayer, "bundle needs at least one layer");
  if (upper && upper->category == GarmentCategory::Lower) {
    throw Error(ErrorCode::CategoryMismatch, "upper layer holds a lower-garment patch set");
  }
  if (lower && lower->category != GarmentCategory::Lower) {
    throw Error(ErrorCode::CategoryMismatch, "lower layer must hold a lower-garment patch set");
  }
  TryOnBundle b;
  b.target_pose = target_pose;
  b.params = params;
  if (upper) {
    b.upper = GarmentLayer{std::move(*upper), {}};
    rerender(*b.upper, b);
  }
  if (lower) {
    b.lower = GarmentLayer{std::move(*lower), {}};
    rerender(*b.lower, b);
  }
  return b;
}

WarpedGarment composite_bundle(const TryOnBundle& bundle) {
  std::vector<kernels::Layer> layers;
  const GarmentLayer* first = bundle.upper ? &*bundle.upper : nullptr;
  const GarmentLayer* second = bundle.lower ? &*bundle.lower : nullptr;
  if (bundle.dressing_order == DressingOrder::TuckOut) std::swap(first, second);
  for (const GarmentLayer* l : {first, second}) {
    if (l) layers.push_back({&l->warped.image, &l->warped.mask});
  }
  if (layers.empty()) throw Error(ErrorCode::MissingLayer, "bundle has no layers");
  const Size canvas = layers.front().rgba->size();
  WarpedGarment out{RasterImage(canvas.width, canvas.height, 4),
                    BinaryMask(canvas.width, canvas.height)};
  kernels::composite(layers, out.image, out.mask);
  return out;
}

TryOnBundle set_dressing_order(const TryOnBundle& bundle, DressingOrder order) {
  if (!bundle.upper || !bundle.lower) {
    throw Error(ErrorCode::MissingLayer, "dressing order needs both upper and lower layers");
  }
  TryOnBundle out = bundle;
  out.dressing_order = order;
  NormalizedPatch* upper_torso = torso_of(out.upper);
  NormalizedPatch* lower_torso = torso_of(out.lower);
  if (upper_torso) {
    if (!out.upper_torso_base) out.upper_torso_base = upper_torso->valid_mask;
    upper_torso->valid_mask = *out.upper_torso_base;
  }
  if (lower_torso) {
    if (!out.lower_torso_base) out.lower_torso_base = lower_torso->valid_mask;
    lower_torso->valid_mask = *out.lower_torso_base;
  }

  if (upper_torso && lower_torso) {
    const PatchLayout upper_layout =
        build_layout(out.target_pose, out.upper->patches.category, out.params);
    const PatchLayout lower_layout =
        build_layout(out.target_pose, out.lower->patches.category, out.params);
    const Quadrilateral& upper_quad = upper_layout.quads.at(PatchSlot::Torso);
    const Quadrilateral& lower_quad = lower_layout.quads.at(PatchSlot::Torso);
    if (order == DressingOrder::TuckIn) {
      clip_below_waist(*upper_torso, upper_quad, lower_quad);
    } else {
      rerender(*out.upper, out);
      occlude_by(*lower_torso, lower_quad, out.upper->warped.mask);
    }
  }
  rerender(*out.upper, out);
  rerender(*out.lower, out);
  return out;
}

PatchSet local_shape_edit(const PatchSet& patches, const TrimPatch& cmd) {
  if (!(cmd.fraction >= 0.0 && cmd.fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "trim fraction must lie in [0,1]");
  }
  auto it = patches.patches.find(cmd.slot);
  if (it == patches.patches.end()) {
    throw Error(ErrorCode::SlotAbsent, std::string("slot ") + std::string(to_string(cmd.slot)) +
                                           " is not present");
  }
  PatchSet out = patches;
  trim_mask(out.patches.at(cmd.slot).valid_mask, cmd.fraction, cmd.end);
  return out;
}

PatchSet local_shape_edit(const PatchSet& patches, const DropPatch& cmd) {
  if (!patches.patches.contains(cmd.slot)) {
    throw Error(ErrorCode::SlotAbsent, std::string("slot ") + std::string(to_string(cmd.slot)) +
                                           " is not present");
  }
  PatchSet out = patches;
  out.patches.erase(cmd.slot);
  return out;
}

PatchSet replace_patch(const PatchSet& patches, const ReplacePatch& cmd) {
  if (!slot_in_category(cmd.slot, patches.category)) {
    throw Error(ErrorCode::CategoryMismatch, std::string("slot ") +
                                                 std::string(to_string(cmd.slot)) +
                                                 " does not belong to the target category");
  }
  auto it = cmd.donor.patches.find(cmd.slot);
  if (it == cmd.donor.patches.end()) {
    throw Error(ErrorCode::SlotAbsent, std::string("donor lacks slot ") +
                                           std::string(to_string(cmd.slot)));
  }
  PatchSet out = patches;
  out.patches.insert_or_assign(cmd.slot, it->second);
  return out;
}

TryOnBundle apply_edit_script(const TryOnBundle& bundle, const EditScript& script) {
  TryOnBundle b = bundle;
  for (const EditCommand& command : script) {
    if (const auto* order = std::get_if<SetDressingOrder>(&command)) {
      b = set_dressing_order(b, order->order);
      continue;
    }
    LayerId id = LayerId::Upper;
    PatchSlot slot = PatchSlot::Torso;
    std::visit(
        [&](const auto& cmd) {
          using T = std::decay_t<decltype(cmd)>;
          if constexpr (!std::is_same_v<T, SetDressingOrder>) {
            id = cmd.layer;
            slot = cmd.slot;
            GarmentLayer& layer = layer_ref(b, id);
            auto& base = torso_base(b, id);
            if constexpr (std::is_same_v<T, TrimPatch>) {
              layer.patches = local_shape_edit(layer.patches, cmd);
              if (slot == PatchSlot::Torso && base) trim_mask(*base, cmd.fraction, cmd.end);
            } else if constexpr (std::is_same_v<T, DropPatch>) {
              layer.patches = local_shape_edit(layer.patches, cmd);
              if (slot == PatchSlot::Torso) base.reset();
            } else {
              layer.patches = replace_patch(layer.patches, cmd);
              if (slot == PatchSlot::Torso && base) {
                base = layer.patches.patches.at(PatchSlot::Torso).valid_mask;
              }
            }
          }
        },
        command);
    const bool ordered = b.upper_torso_base || b.lower_torso_base;
    if (slot == PatchSlot::Torso && ordered && b.upper && b.lower) {
      b = set_dressing_order(b, b.dressing_order);
    } else {
      rerender(layer_ref(b, id), b);
    }
  }
  return b;
}

TransferResult transfer_pairing(const PatchSet& shape_source, const PatchSet& texture_source,
                                const PoseSkeleton& target_pose, const LayoutParams& params) {
  if (shape_source.category != texture_source.category) {
    throw Error(ErrorCode::CategoryMismatch, "shape and texture sources differ in category");
  }
  bool shared = false;
  for (const auto& [slot, patch] : shape_source.patches) {
    shared |= texture_source.patches.contains(slot);
  }
  if (!shared) throw Error(ErrorCode::NoCommonSlots, "sources share no present slot");
  return {shape_source, render_patchset(texture_source, target_pose, params).garment};
}

TryOnBundle outfit_compose(const PersonRecord& upper_source, const PersonRecord& lower_source,
                           const PersonRecord& target, const LayoutParams& params) {
  validate_person(upper_source);
  validate_person(lower_source);
  validate_person(target);

  GarmentCategory upper_category = GarmentCategory::Upper;
  switch (infer_category(upper_source.parsing)) {
    case InferredCategory::Dress: upper_category = GarmentCategory::Dress; break;
    case InferredCategory::Upper:
    case InferredCategory::UpperAndLower: upper_category = GarmentCategory::Upper; break;
    case InferredCategory::Lower:
      throw Error(ErrorCode::CategoryMismatch, "upper source wears no upper garment");
  }
  const InferredCategory lower_kind = infer_category(lower_source.parsing);
  if (lower_kind != InferredCategory::Lower && lower_kind != InferredCategory::UpperAndLower) {
    throw Error(ErrorCode::CategoryMismatch, "lower source wears no lower garment");
  }

  WarpOutput upper = warp_garment(upper_source.image, upper_source.parsing, upper_source.pose,
                                  target.pose, upper_category, params);
  WarpOutput lower = warp_garment(lower_source.image, lower_source.parsing, lower_source.pose,
                                  target.pose, GarmentCategory::Lower, params);
  TryOnBundle b;
  b.target_pose = target.pose;
  b.params = params;
  b.upper = GarmentLayer{std::move(upper.patches), std::move(upper.garment)};
  b.lower = GarmentLayer{std::move(lower.patches), std::move(lower.garment)};
  return set_dressing_order(b, DressingOrder::TuckIn);
}

}  // namespace patchroute
