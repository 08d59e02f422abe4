// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic people, poses and textures shared by the test binaries.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "patchroute/geometry.hpp"
#include "patchroute/image.hpp"
#include "patchroute/masks_features.hpp"
#include "patchroute/patch_layout.hpp"
#include "patchroute/person.hpp"

namespace fixtures {

using namespace patchroute;
namespace fs = std::filesystem;

// LIP-style ids from the default label table.
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kHair = 2;
inline constexpr std::uint8_t kUpperClothes = 5;
inline constexpr std::uint8_t kDress = 6;
inline constexpr std::uint8_t kPants = 9;
inline constexpr std::uint8_t kFace = 13;
inline constexpr std::uint8_t kLeftArm = 14;
inline constexpr std::uint8_t kRightArm = 15;
inline constexpr std::uint8_t kLeftShoe = 18;
inline constexpr std::uint8_t kRightShoe = 19;

/// Frontal standing pose, arms slightly out, all confidences 1.
PoseSkeleton standing_pose(Size canvas = kDefaultCanvas);

/// Standing pose with every joint jittered by up to `jitter` px.
PoseSkeleton random_pose(std::mt19937_64& rng, Size canvas = kDefaultCanvas, double jitter = 12.0);

PoseSkeleton map_pose(const PoseSkeleton& pose, const std::function<Point2(Point2)>& f);
/// Reflects across x = axis_x and swaps left/right joints.
PoseSkeleton mirror_pose(const PoseSkeleton& pose, double axis_x);

// TuckedIn: like UpperAndLower, but the trousers cover the shirt below the
// waistline.
enum class Outfit { UpperAndLower, UpperOnly, LowerOnly, Dress, TuckedIn };

struct GarmentColors {
  // Uniform colours replace the band-limited textures when set.
  std::optional<std::array<std::uint8_t, 3>> upper;
  std::optional<std::array<std::uint8_t, 3>> lower;
};

/// Person whose garment regions are the layout quads of `pose`, textured
/// with band-limited sinusoids drawn from `texture_seed`.
PersonRecord make_person(const PoseSkeleton& pose, Outfit outfit, std::uint64_t texture_seed,
                         const GarmentColors& colors = {});

/// Smooth RGB pattern with wavelengths between 45 and 90 px.
std::array<std::uint8_t, 3> smooth_texel(std::uint64_t seed, double x, double y);

bool inside_quad(const Quadrilateral& q, Point2 p);
void fill_quad(ParsingMap& parsing, const Quadrilateral& q, std::uint8_t label);
void fill_disc(ParsingMap& parsing, Point2 centre, double radius, std::uint8_t label);

/// Random quad with corners in [0,w]x[0,h] that passes validate_quad.
Quadrilateral random_quad(std::mt19937_64& rng, double w, double h);

/// Random valid quad that is convex with the template's winding, i.e. the
/// image of a square under an orientation-preserving homography.
Quadrilateral random_convex_quad(std::mt19937_64& rng, double w, double h);

/// Random pair of valid quads whose correspondence is orientation
/// consistent, i.e. a non-degenerate four-point homography sample.
std::pair<Quadrilateral, Quadrilateral> random_quad_pair(std::mt19937_64& rng, double w, double h);

BinaryMask erode(const BinaryMask& m, int radius);

/// Removes itself on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Byte-level equality of every regular file under two roots, with
/// matching relative paths. Returns the first difference, or "" if none.
std::string diff_trees(const fs::path& a, const fs::path& b);

}  // namespace fixtures
