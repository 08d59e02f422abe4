// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "patchroute/image.hpp"
#include "patchroute/masks_features.hpp"
#include "patchroute/patch_layout.hpp"

namespace patchroute {

/// Image, pose and parsing of one person, with agreeing canvas sizes.
struct PersonRecord {
  std::string id;
  RasterImage image;
  PoseSkeleton pose;
  ParsingMap parsing;
};

/// Throws DimensionMismatch / UnknownLabel / InvalidPose on violations.
void validate_person(const PersonRecord& person);

enum class InferredCategory { Upper, Lower, Dress, UpperAndLower };

std::string_view to_string(InferredCategory c);

/// Dress pixels dominate; upper plus lower garment pixels give UpperAndLower.
InferredCategory infer_category(const ParsingMap& parsing);

}  // namespace patchroute
