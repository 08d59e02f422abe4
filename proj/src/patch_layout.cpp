// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/patch_layout.hpp"

#include <cmath>
#include <string>

#include "patchroute/error.hpp"

namespace patchroute {

namespace {

constexpr std::array<PatchSlot, 10> kUpperSlots{
    PatchSlot::Neck,          PatchSlot::Torso,         PatchSlot::LeftUpperArm,
    PatchSlot::LeftLowerArm,  PatchSlot::RightUpperArm, PatchSlot::RightLowerArm,
    PatchSlot::LeftUpperLeg,  PatchSlot::LeftLowerLeg,  PatchSlot::RightUpperLeg,
    PatchSlot::RightLowerLeg};

constexpr std::array<PatchSlot, 5> kLowerSlots{PatchSlot::Torso, PatchSlot::LeftUpperLeg,
                                               PatchSlot::LeftLowerLeg, PatchSlot::RightUpperLeg,
                                               PatchSlot::RightLowerLeg};

constexpr std::array<std::string_view, 10> kSlotNames{
    "Neck",         "Torso",         "LeftUpperArm", "LeftLowerArm",  "RightUpperArm",
    "RightLowerArm", "LeftUpperLeg", "LeftLowerLeg", "RightUpperLeg", "RightLowerLeg"};

struct LimbChain {
  PatchSlot upper;
  PatchSlot lower;
  Joint root;
  Joint mid;
  Joint end;
  bool is_arm;
};

constexpr std::array<LimbChain, 4> kLimbs{{
    {PatchSlot::LeftUpperArm, PatchSlot::LeftLowerArm, Joint::LShoulder, Joint::LElbow,
     Joint::LWrist, true},
    {PatchSlot::RightUpperArm, PatchSlot::RightLowerArm, Joint::RShoulder, Joint::RElbow,
     Joint::RWrist, true},
    {PatchSlot::LeftUpperLeg, PatchSlot::LeftLowerLeg, Joint::LHip, Joint::LKnee,
     Joint::LAnkle, false},
    {PatchSlot::RightUpperLeg, PatchSlot::RightLowerLeg, Joint::RHip, Joint::RKnee,
     Joint::RAnkle, false},
}};

Point2 unit(Point2 v) {
  const double n = std::hypot(v.x, v.y);
  return {v.x / n, v.y / n};
}

Point2 midpoint(Point2 a, Point2 b) { return 0.5 * (a + b); }

Quadrilateral push_outward(Quadrilateral q, double margin) {
  Point2 c{0, 0};
  for (const auto& p : q.corners) c = c + p;
  c = 0.25 * c;
  for (auto& p : q.corners) p = p + margin * unit(p - c);
  return q;
}

}  // namespace

void validate_pose(const PoseSkeleton& pose) {
  if (pose.canvas.width <= 0 || pose.canvas.height <= 0) {
    throw Error(ErrorCode::InvalidPose, "pose canvas must be positive");
  }
  const double w = pose.canvas.width;
  const double h = pose.canvas.height;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& k = pose.joints[i];
    if (!std::isfinite(k.position.x) || !std::isfinite(k.position.y) ||
        !std::isfinite(k.confidence)) {
      throw Error(ErrorCode::InvalidPose, "joint " + std::to_string(i) + " is not finite");
    }
    if (k.confidence < 0.0 || k.confidence > 1.0) {
      throw Error(ErrorCode::InvalidPose,
                  "joint " + std::to_string(i) + " confidence outside [0,1]");
    }
    if (k.position.x < -0.25 * w || k.position.x > 1.25 * w || k.position.y < -0.25 * h ||
        k.position.y > 1.25 * h) {
      throw Error(ErrorCode::InvalidPose, "joint " + std::to_string(i) + " is far outside the canvas");
    }
  }
}

Joint mirror_joint(Joint j) {
  switch (j) {
    case Joint::RShoulder: return Joint::LShoulder;
    case Joint::RElbow: return Joint::LElbow;
    case Joint::RWrist: return Joint::LWrist;
    case Joint::LShoulder: return Joint::RShoulder;
    case Joint::LElbow: return Joint::RElbow;
    case Joint::LWrist: return Joint::RWrist;
    case Joint::RHip: return Joint::LHip;
    case Joint::RKnee: return Joint::LKnee;
    case Joint::RAnkle: return Joint::LAnkle;
    case Joint::LHip: return Joint::RHip;
    case Joint::LKnee: return Joint::RKnee;
    case Joint::LAnkle: return Joint::RAnkle;
    case Joint::REye: return Joint::LEye;
    case Joint::LEye: return Joint::REye;
    case Joint::REar: return Joint::LEar;
    case Joint::LEar: return Joint::REar;
    default: return j;
  }
}

std::string_view to_string(PatchSlot slot) { return kSlotNames[static_cast<int>(slot)]; }

std::optional<PatchSlot> parse_slot(std::string_view name) {
  for (std::size_t i = 0; i < kSlotNames.size(); ++i) {
    if (kSlotNames[i] == name) return static_cast<PatchSlot>(i);
  }
  return std::nullopt;
}

std::string_view to_string(GarmentCategory category) {
  switch (category) {
    case GarmentCategory::Upper: return "upper";
    case GarmentCategory::Lower: return "lower";
    case GarmentCategory::Dress: return "dress";
  }
  return "upper";
}

std::optional<GarmentCategory> parse_category(std::string_view name) {
  if (name == "upper") return GarmentCategory::Upper;
  if (name == "lower") return GarmentCategory::Lower;
  if (name == "dress") return GarmentCategory::Dress;
  return std::nullopt;
}

std::span<const PatchSlot> slots_for(GarmentCategory category) {
  if (category == GarmentCategory::Lower) return kLowerSlots;
  return kUpperSlots;
}

bool slot_in_category(PatchSlot slot, GarmentCategory category) {
  for (PatchSlot s : slots_for(category)) {
    if (s == slot) return true;
  }
  return false;
}

PatchSlot mirror_slot(PatchSlot slot) {
  switch (slot) {
    case PatchSlot::LeftUpperArm: return PatchSlot::RightUpperArm;
    case PatchSlot::LeftLowerArm: return PatchSlot::RightLowerArm;
    case PatchSlot::RightUpperArm: return PatchSlot::LeftUpperArm;
    case PatchSlot::RightLowerArm: return PatchSlot::LeftLowerArm;
    case PatchSlot::LeftUpperLeg: return PatchSlot::RightUpperLeg;
    case PatchSlot::LeftLowerLeg: return PatchSlot::RightLowerLeg;
    case PatchSlot::RightUpperLeg: return PatchSlot::LeftUpperLeg;
    case PatchSlot::RightLowerLeg: return PatchSlot::LeftLowerLeg;
    default: return slot;
  }
}

void validate_layout_params(const LayoutParams& p) {
  if (!(p.arm_width_ratio > 0) || !(p.leg_width_ratio > 0) || !(p.neck_height_ratio > 0) ||
      !(p.torso_margin_ratio > 0) || !(p.waist_ratio > 0) || !(p.waist_ratio <= 1)) {
    throw Error(ErrorCode::InvalidArgument, "layout ratios must be positive");
  }
  if (!(p.min_confidence >= 0.0 && p.min_confidence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_confidence must lie in [0,1]");
  }
}

std::vector<PatchSlot> PatchLayout::absent_slots() const {
  std::vector<PatchSlot> out;
  for (PatchSlot s : slots_for(category)) {
    if (!present(s)) out.push_back(s);
  }
  return out;
}

Quadrilateral limb_quad(Point2 proximal, Point2 distal, double width) {
  const Point2 axis = distal - proximal;
  const double len = std::hypot(axis.x, axis.y);
  if (!(len > 2.0)) throw Error(ErrorCode::DegenerateQuad, "limb shorter than 2 px");
  const Point2 d{axis.x / len, axis.y / len};
  const Point2 half = (0.5 * width) * Point2{d.y, -d.x};
  return Quadrilateral{{proximal + half, proximal - half, distal - half, distal + half}};
}

PatchLayout build_layout(const PoseSkeleton& pose, GarmentCategory category,
                         const LayoutParams& params) {
  validate_pose(pose);
  validate_layout_params(params);

  auto confident = [&](Joint j) { return pose[j].confidence >= params.min_confidence; };
  auto at = [&](Joint j) { return pose[j].position; };

  for (Joint j : {Joint::LShoulder, Joint::RShoulder, Joint::LHip, Joint::RHip}) {
    if (!confident(j)) {
      throw Error(ErrorCode::MissingCoreJoints,
                  "torso joint " + std::to_string(static_cast<int>(j)) +
                      " below confidence threshold");
    }
  }

  PatchLayout layout;
  layout.category = category;

  const Point2 ls = at(Joint::LShoulder), rs = at(Joint::RShoulder);
  const Point2 lh = at(Joint::LHip), rh = at(Joint::RHip);
  const double torso_len = distance(midpoint(ls, rs), midpoint(lh, rh));
  const double margin = params.torso_margin_ratio * torso_len;

  Quadrilateral torso;
  if (category == GarmentCategory::Lower) {
    const Point2 lw = lh + params.waist_ratio * (ls - lh);
    const Point2 rw = rh + params.waist_ratio * (rs - rh);
    torso = push_outward(Quadrilateral{{lw, rw, rh, lh}}, margin);
  } else {
    torso = push_outward(Quadrilateral{{ls, rs, rh, lh}}, margin);
  }
  if (!is_valid_quad(torso)) {
    throw Error(ErrorCode::DegenerateQuad, "torso joints do not span a valid quadrilateral");
  }
  layout.quads[PatchSlot::Torso] = torso;

  if (category != GarmentCategory::Lower && confident(Joint::Neck)) {
    const Point2 neck = at(Joint::Neck);
    const double shoulder_width = distance(ls, rs);
    if (shoulder_width > 0.0) {
      const Point2 u = unit(ls - rs);
      const Point2 up{u.y, -u.x};
      const double al = (ls.x - neck.x) * u.x + (ls.y - neck.y) * u.y;
      const double ar = (rs.x - neck.x) * u.x + (rs.y - neck.y) * u.y;
      const double h = params.neck_height_ratio * shoulder_width;
      auto corner = [&](double a, double b) { return neck + a * u + b * up; };
      const Quadrilateral q{{corner(al, h), corner(ar, h), corner(ar, 0.0), corner(al, 0.0)}};
      if (is_valid_quad(q)) layout.quads[PatchSlot::Neck] = q;
    }
  }

  for (const LimbChain& limb : kLimbs) {
    if (limb.is_arm && category == GarmentCategory::Lower) continue;
    if (!confident(limb.root) || !confident(limb.mid)) continue;
    const double ratio = limb.is_arm ? params.arm_width_ratio : params.leg_width_ratio;
    const Point2 root = at(limb.root), mid = at(limb.mid);
    if (!(distance(root, mid) > 2.0)) continue;
    const Quadrilateral upper = limb_quad(root, mid, ratio * distance(root, mid));
    if (!is_valid_quad(upper)) continue;
    layout.quads[limb.upper] = upper;

    if (!confident(limb.end)) continue;
    const Point2 end = at(limb.end);
    if (!(distance(mid, end) > 2.0)) continue;
    // The lower patch reuses the upper patch's distal edge so the two meet
    // without a gap.
    const Quadrilateral tip = limb_quad(mid, end, ratio * distance(mid, end));
    const Quadrilateral lower{{upper.corners[3], upper.corners[2], tip.corners[2], tip.corners[3]}};
    if (is_valid_quad(lower)) layout.quads[limb.lower] = lower;
  }
  return layout;
}

}  // namespace patchroute
