// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/error.hpp"

namespace patchroute {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::MissingCoreJoints: return "MissingCoreJoints";
    case ErrorCode::InvalidPose: return "InvalidPose";
    case ErrorCode::CanvasMismatch: return "CanvasMismatch";
    case ErrorCode::NoCommonSlots: return "NoCommonSlots";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidMasks: return "InvalidMasks";
    case ErrorCode::EmptyAlignedRegion: return "EmptyAlignedRegion";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NoSkinPixels: return "NoSkinPixels";
    case ErrorCode::MissingLayer: return "MissingLayer";
    case ErrorCode::SlotAbsent: return "SlotAbsent";
    case ErrorCode::CategoryMismatch: return "CategoryMismatch";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::NoGarmentPixels: return "NoGarmentPixels";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace patchroute
