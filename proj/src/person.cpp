// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/person.hpp"

#include <array>

#include "patchroute/error.hpp"

namespace patchroute {

void validate_person(const PersonRecord& person) {
  validate_parsing(person.parsing);
  validate_pose(person.pose);
  if (person.image.size() != person.parsing.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "parsing is " + std::to_string(person.parsing.width) + "x" +
                    std::to_string(person.parsing.height) + " but image is " +
                    std::to_string(person.image.width()) + "x" +
                    std::to_string(person.image.height()));
  }
  if (person.image.size() != person.pose.canvas) {
    throw Error(ErrorCode::DimensionMismatch, "pose canvas does not match the image");
  }
}

std::string_view to_string(InferredCategory c) {
  switch (c) {
    case InferredCategory::Upper: return "upper";
    case InferredCategory::Lower: return "lower";
    case InferredCategory::Dress: return "dress";
    case InferredCategory::UpperAndLower: return "upper_and_lower";
  }
  return "upper";
}

InferredCategory infer_category(const ParsingMap& parsing) {
  validate_parsing(parsing);
  std::array<std::size_t, 256> histogram{};
  for (std::uint8_t l : parsing.labels) ++histogram[l];
  bool upper = false, lower = false, dress = false;
  for (const auto& [label, entry] : parsing.table) {
    if (histogram[label] == 0) continue;
    upper |= entry.semantic == SemanticClass::UpperGarment;
    lower |= entry.semantic == SemanticClass::LowerGarment;
    dress |= entry.semantic == SemanticClass::Dress;
  }
  if (dress) return InferredCategory::Dress;
  if (upper && lower) return InferredCategory::UpperAndLower;
  if (upper) return InferredCategory::Upper;
  if (lower) return InferredCategory::Lower;
  throw Error(ErrorCode::NoGarmentPixels, "parsing contains no garment pixels");
}

}  // namespace patchroute
