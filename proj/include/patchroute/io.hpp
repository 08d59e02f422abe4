// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Readers and writers for every on-disk artifact. Byte layouts are
// documented in docs/FORMATS.md. Loaders validate and never repair: any
// violation surfaces as a typed Error.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchroute/edit.hpp"
#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"
#include "patchroute/masks_features.hpp"
#include "patchroute/person.hpp"
#include "patchroute/warp.hpp"

namespace patchroute::io {

namespace fs = std::filesystem;

inline constexpr int kFormatVersion = 1;

// --- raw files ------------------------------------------------------------

std::vector<std::uint8_t> read_file(const fs::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const fs::path& path, const std::string& text);
nlohmann::json read_json(const fs::path& path);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

// --- PNG -------------------------------------------------------------------

std::vector<std::uint8_t> encode_png(const RasterImage& image);
RasterImage decode_png(std::span<const std::uint8_t> bytes);
RasterImage load_png(const fs::path& path);
void save_png(const RasterImage& image, const fs::path& path);

/// Masks are 8-bit grayscale PNGs holding only 0 and 255.
void save_mask(const BinaryMask& mask, const fs::path& path);
BinaryMask load_mask(const fs::path& path);
RasterImage mask_to_image(const BinaryMask& mask);
BinaryMask image_to_mask(const RasterImage& image);

// --- pose, labels, parsing -------------------------------------------------

nlohmann::json pose_to_json(const PoseSkeleton& pose);
PoseSkeleton pose_from_json(const nlohmann::json& j);
PoseSkeleton load_pose(const fs::path& path);
void save_pose(const PoseSkeleton& pose, const fs::path& path);

nlohmann::json label_table_to_json(const LabelTable& table);
LabelTable label_table_from_json(const nlohmann::json& j);

/// Sidecar label table next to a parsing PNG: same stem, ".json".
fs::path label_sidecar(const fs::path& parsing_png);

/// Indexed (palette) 8-bit PNG; plain 8-bit grayscale is also accepted.
ParsingMap load_parsing(const fs::path& parsing_png);
void save_parsing(const ParsingMap& parsing, const fs::path& parsing_png);

// --- person -----------------------------------------------------------------

/// `path` is either a directory holding image.png, pose.json, parsing.png
/// and parsing.json, or a JSON manifest naming those files.
PersonRecord load_person(const fs::path& path);
void save_person(const PersonRecord& person, const fs::path& dir);

// --- homographies, quads -----------------------------------------------------

nlohmann::json homography_to_json(const Homography& h);
Homography homography_from_json(const nlohmann::json& j);
nlohmann::json quad_to_json(const Quadrilateral& q);
Quadrilateral quad_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const PatchLayout& layout);

// --- patch-set archives ------------------------------------------------------

void save_patchset(const PatchSet& set, const fs::path& dir);
PatchSet load_patchset(const fs::path& dir);

// --- warped garments, feature maps ------------------------------------------

void save_warped_garment(const WarpedGarment& g, const fs::path& image_png,
                         const fs::path& mask_png);
WarpedGarment load_warped_garment(const fs::path& image_png, const fs::path& mask_png);

inline constexpr std::uint32_t kFeatureMagic = 0x314d4650;  // "PFM1" on disk

std::vector<std::uint8_t> encode_feature_map(const FeatureMap& f);
FeatureMap decode_feature_map(std::span<const std::uint8_t> bytes);
void save_feature_map(const FeatureMap& f, const fs::path& path);
FeatureMap load_feature_map(const fs::path& path);

// --- edit scripts -------------------------------------------------------------

/// JSON array of command objects; `donor` paths resolve against `base_dir`.
EditScript parse_edit_script(const nlohmann::json& j, const fs::path& base_dir);
EditScript load_edit_script(const fs::path& path);

}  // namespace patchroute::io
