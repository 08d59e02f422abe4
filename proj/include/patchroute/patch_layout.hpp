// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"

namespace patchroute {

/// COCO-18 joint order as emitted by OpenPose.
enum class Joint : int {
  Nose = 0,
  Neck,
  RShoulder,
  RElbow,
  RWrist,
  LShoulder,
  LElbow,
  LWrist,
  RHip,
  RKnee,
  RAnkle,
  LHip,
  LKnee,
  LAnkle,
  REye,
  LEye,
  REar,
  LEar,
};

inline constexpr int kNumJoints = 18;

struct Keypoint {
  Point2 position;
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct PoseSkeleton {
  std::array<Keypoint, kNumJoints> joints{};
  Size canvas = kDefaultCanvas;

  const Keypoint& operator[](Joint j) const { return joints[static_cast<int>(j)]; }
  Keypoint& operator[](Joint j) { return joints[static_cast<int>(j)]; }

  friend bool operator==(const PoseSkeleton&, const PoseSkeleton&) = default;
};

/// Throws InvalidPose on non-finite values, confidences outside [0, 1], or
/// joints further than a quarter canvas outside the frame.
void validate_pose(const PoseSkeleton& pose);

/// Mirror of the joint across the body (RShoulder <-> LShoulder, ...).
Joint mirror_joint(Joint j);

enum class PatchSlot : int {
  Neck = 0,
  Torso,
  LeftUpperArm,
  LeftLowerArm,
  RightUpperArm,
  RightLowerArm,
  LeftUpperLeg,
  LeftLowerLeg,
  RightUpperLeg,
  RightLowerLeg,
};

enum class GarmentCategory { Upper, Lower, Dress };

std::string_view to_string(PatchSlot slot);
std::optional<PatchSlot> parse_slot(std::string_view name);
std::string_view to_string(GarmentCategory category);
std::optional<GarmentCategory> parse_category(std::string_view name);

/// Slots a category decomposes into: 10 for Upper/Dress, 5 for Lower.
std::span<const PatchSlot> slots_for(GarmentCategory category);
bool slot_in_category(PatchSlot slot, GarmentCategory category);

/// Slot with left and right exchanged.
PatchSlot mirror_slot(PatchSlot slot);

struct LayoutParams {
  double arm_width_ratio = 0.45;
  double leg_width_ratio = 0.50;
  double neck_height_ratio = 0.35;
  double torso_margin_ratio = 0.15;
  double min_confidence = 0.2;
  /// Lower-garment torso patch spans from the hips up to this fraction of
  /// the hip-to-shoulder segment.
  double waist_ratio = 0.35;

  friend bool operator==(const LayoutParams&, const LayoutParams&) = default;
};

void validate_layout_params(const LayoutParams& params);

struct PatchLayout {
  GarmentCategory category = GarmentCategory::Upper;
  std::map<PatchSlot, Quadrilateral> quads;  // present slots only

  bool present(PatchSlot slot) const { return quads.contains(slot); }
  std::size_t present_count() const { return quads.size(); }
  std::vector<PatchSlot> absent_slots() const;
};

PatchLayout build_layout(const PoseSkeleton& pose, GarmentCategory category,
                         const LayoutParams& params = {});

/// Oriented rectangle around the limb axis. With d the unit axis and
/// n = (d.y, -d.x), the corners are proximal + w/2 n, proximal - w/2 n,
/// distal - w/2 n, distal + w/2 n.
Quadrilateral limb_quad(Point2 proximal, Point2 distal, double width);

}  // namespace patchroute
