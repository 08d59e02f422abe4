// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patchroute {

enum class ErrorCode {
  DegenerateQuad,
  SingularSystem,
  PointAtInfinity,
  MissingCoreJoints,
  InvalidPose,
  CanvasMismatch,
  NoCommonSlots,
  UnknownLabel,
  DimensionMismatch,
  InvalidMasks,
  EmptyAlignedRegion,
  ShapeMismatch,
  NoSkinPixels,
  MissingLayer,
  SlotAbsent,
  CategoryMismatch,
  MissingFile,
  MalformedJson,
  NoGarmentPixels,
  IoError,
  CorruptArchive,
  CorruptFile,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as an Error carrying a typed code.
/// The CLI maps the code onto its JSON diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace patchroute
