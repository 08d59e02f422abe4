// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patchroute/image.hpp"
#include "patchroute/patch_layout.hpp"

namespace patchroute {

enum class SemanticClass {
  Background,
  Hat,
  Hair,
  Sunglasses,
  Face,
  UpperGarment,
  LowerGarment,
  Dress,
  Arm,
  Leg,
  Hand,
  Foot,
  Accessory,
};

std::string_view to_string(SemanticClass c);
std::optional<SemanticClass> parse_semantic_class(std::string_view name);

struct LabelEntry {
  std::string name;
  SemanticClass semantic = SemanticClass::Background;

  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

using LabelTable = std::map<std::uint8_t, LabelEntry>;

/// 20-class LIP-style table: 0 Background, 1 Hat, 2 Hair, 3 Glove,
/// 4 Sunglasses, 5 UpperClothes, 6 Dress, 7 Coat, 8 Socks, 9 Pants,
/// 10 Jumpsuits, 11 Scarf, 12 Skirt, 13 Face, 14 Left-arm, 15 Right-arm,
/// 16 Left-leg, 17 Right-leg, 18 Left-shoe, 19 Right-shoe.
const LabelTable& default_label_table();

struct ParsingMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;
  LabelTable table;

  Size size() const { return {width, height}; }
  std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const ParsingMap&, const ParsingMap&) = default;
};

/// Throws UnknownLabel if any pixel carries a label missing from the table,
/// DimensionMismatch if the buffer does not match width x height.
void validate_parsing(const ParsingMap& parsing);

/// Pixels whose semantic class is in `classes`.
BinaryMask class_mask(const ParsingMap& parsing, std::initializer_list<SemanticClass> classes);

BinaryMask garment_mask(const ParsingMap& parsing, GarmentCategory category);

struct MisalignmentMasks {
  BinaryMask align;
  BinaryMask misalign;
};

/// align = m_g AND m_t; misalign = m_g AND NOT align.
MisalignmentMasks misalignment_masks(const BinaryMask& m_g, const BinaryMask& m_t);

/// Zeroes `f` outside m_g, keeps it on m_align and fills m_misalign with the
/// per-channel mean of `f` over m_align.
FeatureMap inpaint_features(const FeatureMap& f, const BinaryMask& m_g,
                            const BinaryMask& m_align, const BinaryMask& m_misalign);

inline constexpr double kDefaultModulationEps = 1e-5;

/// gamma * (h - mu_c) / (sigma_c + eps) + beta with population statistics
/// per channel.
FeatureMap spatially_adaptive_modulate(const FeatureMap& h, const FeatureMap& gamma,
                                       const FeatureMap& beta,
                                       double eps = kDefaultModulationEps);

/// Canvas-size image filled with the per-channel (lower) median over skin
/// pixels (face, arms, legs).
RasterImage median_skin_color(const RasterImage& image, const ParsingMap& parsing);

/// `image` restricted to head, hand and foot classes; zero elsewhere.
RasterImage preserved_region(const RasterImage& image, const ParsingMap& parsing);

}  // namespace patchroute
