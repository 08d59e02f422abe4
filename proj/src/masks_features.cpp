// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/masks_features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>

#include "patchroute/error.hpp"
#include "patchroute/kernels.hpp"

namespace patchroute {

namespace {

constexpr std::array<std::pair<SemanticClass, std::string_view>, 13> kClassNames{{
    {SemanticClass::Background, "background"},
    {SemanticClass::Hat, "hat"},
    {SemanticClass::Hair, "hair"},
    {SemanticClass::Sunglasses, "sunglasses"},
    {SemanticClass::Face, "face"},
    {SemanticClass::UpperGarment, "upper_garment"},
    {SemanticClass::LowerGarment, "lower_garment"},
    {SemanticClass::Dress, "dress"},
    {SemanticClass::Arm, "arm"},
    {SemanticClass::Leg, "leg"},
    {SemanticClass::Hand, "hand"},
    {SemanticClass::Foot, "foot"},
    {SemanticClass::Accessory, "accessory"},
}};

// Per-label membership lookup; throws UnknownLabel on a pixel missing from
// the table.
BinaryMask mask_where(const ParsingMap& parsing, std::initializer_list<SemanticClass> classes) {
  validate_parsing(parsing);
  std::array<std::uint8_t, 256> member{};
  for (const auto& [label, entry] : parsing.table) {
    member[label] = std::find(classes.begin(), classes.end(), entry.semantic) != classes.end();
  }
  BinaryMask out(parsing.width, parsing.height);
  auto bits = out.data();
  for (std::size_t i = 0; i < parsing.labels.size(); ++i) bits[i] = member[parsing.labels[i]];
  return out;
}

void require_same_size(const BinaryMask& a, const BinaryMask& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
}

}  // namespace

std::string_view to_string(SemanticClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "background";
}

std::optional<SemanticClass> parse_semantic_class(std::string_view name) {
  for (const auto& [cls, n] : kClassNames) {
    if (n == name) return cls;
  }
  return std::nullopt;
}

const LabelTable& default_label_table() {
  static const LabelTable table{
      {0, {"Background", SemanticClass::Background}},
      {1, {"Hat", SemanticClass::Hat}},
      {2, {"Hair", SemanticClass::Hair}},
      {3, {"Glove", SemanticClass::Hand}},
      {4, {"Sunglasses", SemanticClass::Sunglasses}},
      {5, {"UpperClothes", SemanticClass::UpperGarment}},
      {6, {"Dress", SemanticClass::Dress}},
      {7, {"Coat", SemanticClass::UpperGarment}},
      {8, {"Socks", SemanticClass::Foot}},
      {9, {"Pants", SemanticClass::LowerGarment}},
      {10, {"Jumpsuits", SemanticClass::Dress}},
      {11, {"Scarf", SemanticClass::Accessory}},
      {12, {"Skirt", SemanticClass::LowerGarment}},
      {13, {"Face", SemanticClass::Face}},
      {14, {"Left-arm", SemanticClass::Arm}},
      {15, {"Right-arm", SemanticClass::Arm}},
      {16, {"Left-leg", SemanticClass::Leg}},
      {17, {"Right-leg", SemanticClass::Leg}},
      {18, {"Left-shoe", SemanticClass::Foot}},
      {19, {"Right-shoe", SemanticClass::Foot}},
  };
  return table;
}

void validate_parsing(const ParsingMap& parsing) {
  if (parsing.width < 0 || parsing.height < 0 ||
      parsing.labels.size() != static_cast<std::size_t>(parsing.width) * parsing.height) {
    throw Error(ErrorCode::DimensionMismatch, "parsing buffer does not match its dimensions");
  }
  std::array<bool, 256> known{};
  for (const auto& [label, entry] : parsing.table) known[label] = true;
  for (std::uint8_t l : parsing.labels) {
    if (!known[l]) {
      throw Error(ErrorCode::UnknownLabel,
                  "parsing label " + std::to_string(l) + " missing from label table");
    }
  }
}

BinaryMask class_mask(const ParsingMap& parsing, std::initializer_list<SemanticClass> classes) {
  return mask_where(parsing, classes);
}

BinaryMask garment_mask(const ParsingMap& parsing, GarmentCategory category) {
  switch (category) {
    case GarmentCategory::Upper: return mask_where(parsing, {SemanticClass::UpperGarment});
    case GarmentCategory::Lower: return mask_where(parsing, {SemanticClass::LowerGarment});
    case GarmentCategory::Dress: return mask_where(parsing, {SemanticClass::Dress});
  }
  return mask_where(parsing, {});
}

MisalignmentMasks misalignment_masks(const BinaryMask& m_g, const BinaryMask& m_t) {
  require_same_size(m_g, m_t);
  MisalignmentMasks out{BinaryMask(m_g.width(), m_g.height()),
                        BinaryMask(m_g.width(), m_g.height())};
  kernels::mask_and(m_g, m_t, out.align);
  kernels::mask_and_not(m_g, out.align, out.misalign);
  return out;
}

FeatureMap inpaint_features(const FeatureMap& f, const BinaryMask& m_g,
                            const BinaryMask& m_align, const BinaryMask& m_misalign) {
  require_same_size(m_g, m_align);
  require_same_size(m_g, m_misalign);
  if (m_g.width() != f.width() || m_g.height() != f.height()) {
    throw Error(ErrorCode::DimensionMismatch, "masks must be resized to the feature map plane");
  }
  const auto g = m_g.data();
  const auto a = m_align.data();
  const auto m = m_misalign.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if ((a[i] & m[i]) || ((a[i] | m[i]) != g[i])) {
      throw Error(ErrorCode::InvalidMasks, "aligned/misaligned masks do not partition m_g");
    }
  }
  const bool has_misaligned = m_misalign.any();
  if (has_misaligned && !m_align.any()) {
    throw Error(ErrorCode::EmptyAlignedRegion, "no aligned pixels to average over");
  }
  std::vector<double> means(f.channels(), 0.0);
  if (has_misaligned) kernels::masked_channel_means(f, m_align, means);
  FeatureMap out(f.channels(), f.height(), f.width());
  kernels::masked_fill(f, m_g, m_misalign, means, out);
  return out;
}

FeatureMap spatially_adaptive_modulate(const FeatureMap& h, const FeatureMap& gamma,
                                       const FeatureMap& beta, double eps) {
  if (!h.same_shape(gamma) || !h.same_shape(beta)) {
    throw Error(ErrorCode::ShapeMismatch, "h, gamma and beta must share C x H x W");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  std::vector<double> mean(h.channels()), stddev(h.channels());
  kernels::channel_stats(h, mean, stddev);
  FeatureMap out(h.channels(), h.height(), h.width());
  kernels::modulate(h, gamma, beta, mean, stddev, eps, out);
  return out;
}

RasterImage median_skin_color(const RasterImage& image, const ParsingMap& parsing) {
  if (image.size() != parsing.size()) {
    throw Error(ErrorCode::DimensionMismatch, "image and parsing sizes differ");
  }
  const BinaryMask skin =
      mask_where(parsing, {SemanticClass::Face, SemanticClass::Arm, SemanticClass::Leg});
  const std::size_t n = skin.count();
  if (n == 0) throw Error(ErrorCode::NoSkinPixels, "parsing has no skin pixels");

  RasterImage out(image.width(), image.height(), image.channels());
  std::vector<std::uint8_t> values;
  values.reserve(n);
  for (int c = 0; c < image.channels(); ++c) {
    values.clear();
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        if (skin.at(x, y)) values.push_back(image.at(x, y, c));
      }
    }
    // Lower median for even counts.
    const std::size_t k = (n - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(k), values.end());
    const std::uint8_t med = values[k];
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x) out.at(x, y, c) = med;
  }
  return out;
}

RasterImage preserved_region(const RasterImage& image, const ParsingMap& parsing) {
  if (image.size() != parsing.size()) {
    throw Error(ErrorCode::DimensionMismatch, "image and parsing sizes differ");
  }
  const BinaryMask keep =
      mask_where(parsing, {SemanticClass::Face, SemanticClass::Hair, SemanticClass::Hat,
                           SemanticClass::Sunglasses, SemanticClass::Hand, SemanticClass::Foot});
  RasterImage out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!keep.at(x, y)) continue;
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(x, y, c);
    }
  }
  return out;
}

}  // namespace patchroute
