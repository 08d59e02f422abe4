// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>

namespace fixtures {

namespace {

struct Wave {
  double fx, fy, phase, amp;
};

// Deterministic band-limited waves per channel.
std::array<std::array<Wave, 2>, 3> waves_for(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 17);
  std::uniform_real_distribution<double> freq(1.0 / 90.0, 1.0 / 45.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> sign(0, 1);
  std::array<std::array<Wave, 2>, 3> out{};
  for (auto& channel : out) {
    for (std::size_t k = 0; k < channel.size(); ++k) {
      const double fx = freq(rng) * (sign(rng) ? 1 : -1);
      const double fy = freq(rng) * (sign(rng) ? 1 : -1);
      channel[k] = {fx, fy, phase(rng), k == 0 ? 45.0 : 25.0};
    }
  }
  return out;
}

}  // namespace

PoseSkeleton standing_pose(Size canvas) {
  // Laid out on a 320x512 frame and scaled to the requested canvas.
  static constexpr std::array<std::array<double, 2>, kNumJoints> kBase = {{
      {160, 70},   // Nose
      {160, 112},  // Neck
      {112, 118},  // RShoulder
      {92, 196},   // RElbow
      {80, 268},   // RWrist
      {208, 118},  // LShoulder
      {228, 196},  // LElbow
      {240, 268},  // LWrist
      {132, 272},  // RHip
      {128, 372},  // RKnee
      {126, 468},  // RAnkle
      {188, 272},  // LHip
      {192, 372},  // LKnee
      {194, 468},  // LAnkle
      {150, 60},   // REye
      {170, 60},   // LEye
      {140, 66},   // REar
      {180, 66},   // LEar
  }};
  PoseSkeleton pose;
  pose.canvas = canvas;
  const double sx = canvas.width / 320.0;
  const double sy = canvas.height / 512.0;
  for (int i = 0; i < kNumJoints; ++i) {
    pose.joints[i] = {{kBase[i][0] * sx, kBase[i][1] * sy}, 1.0};
  }
  return pose;
}

PoseSkeleton random_pose(std::mt19937_64& rng, Size canvas, double jitter) {
  PoseSkeleton pose = standing_pose(canvas);
  std::uniform_real_distribution<double> d(-jitter, jitter);
  for (auto& k : pose.joints) {
    k.position.x += d(rng);
    k.position.y += d(rng);
  }
  return pose;
}

PoseSkeleton map_pose(const PoseSkeleton& pose, const std::function<Point2(Point2)>& f) {
  PoseSkeleton out = pose;
  for (auto& k : out.joints) k.position = f(k.position);
  return out;
}

PoseSkeleton mirror_pose(const PoseSkeleton& pose, double axis_x) {
  PoseSkeleton out = pose;
  for (int i = 0; i < kNumJoints; ++i) {
    const Keypoint& src = pose.joints[static_cast<int>(mirror_joint(static_cast<Joint>(i)))];
    out.joints[i] = {{2.0 * axis_x - src.position.x, src.position.y}, src.confidence};
  }
  return out;
}

std::array<std::uint8_t, 3> smooth_texel(std::uint64_t seed, double x, double y) {
  const auto waves = waves_for(seed);
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double v = 128.0;
    for (const Wave& w : waves[c]) {
      v += w.amp * std::sin(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
    }
    out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

bool inside_quad(const Quadrilateral& q, Point2 p) {
  // Even-odd rule; quads from layouts are convex but this does not rely on it.
  bool in = false;
  for (int i = 0, j = 3; i < 4; j = i++) {
    const Point2 a = q.corners[i], b = q.corners[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

void fill_quad(ParsingMap& parsing, const Quadrilateral& q, std::uint8_t label) {
  for (int y = 0; y < parsing.height; ++y) {
    for (int x = 0; x < parsing.width; ++x) {
      if (inside_quad(q, {static_cast<double>(x), static_cast<double>(y)})) {
        parsing.labels[static_cast<std::size_t>(y) * parsing.width + x] = label;
      }
    }
  }
}

void fill_disc(ParsingMap& parsing, Point2 centre, double radius, std::uint8_t label) {
  for (int y = 0; y < parsing.height; ++y) {
    for (int x = 0; x < parsing.width; ++x) {
      if (std::hypot(x - centre.x, y - centre.y) <= radius) {
        parsing.labels[static_cast<std::size_t>(y) * parsing.width + x] = label;
      }
    }
  }
}

PersonRecord make_person(const PoseSkeleton& pose, Outfit outfit, std::uint64_t texture_seed,
                         const GarmentColors& colors) {
  const Size canvas = pose.canvas;
  ParsingMap parsing{canvas.width, canvas.height,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(canvas.area()), kBackground),
                     default_label_table()};

  const auto joint = [&](Joint j) { return pose[j].position; };
  const double scale = canvas.height / 512.0;
  fill_disc(parsing, joint(Joint::Nose), 26 * scale, kFace);
  fill_disc(parsing, joint(Joint::Nose) + Point2{0, -22 * scale}, 18 * scale, kHair);
  fill_disc(parsing, joint(Joint::LWrist), 14 * scale, kLeftArm);
  fill_disc(parsing, joint(Joint::RWrist), 14 * scale, kRightArm);
  fill_disc(parsing, joint(Joint::LAnkle), 14 * scale, kLeftShoe);
  fill_disc(parsing, joint(Joint::RAnkle), 14 * scale, kRightShoe);

  const bool tucked = outfit == Outfit::TuckedIn;
  const bool has_lower = outfit == Outfit::UpperAndLower || outfit == Outfit::LowerOnly || tucked;
  const bool has_upper = outfit == Outfit::UpperAndLower || outfit == Outfit::UpperOnly || tucked;
  if (has_lower) {
    for (const auto& [slot, q] : build_layout(pose, GarmentCategory::Lower).quads) {
      fill_quad(parsing, q, kPants);
    }
  }
  if (has_upper) {
    for (const auto& [slot, q] : build_layout(pose, GarmentCategory::Upper).quads) {
      if (slot_in_category(slot, GarmentCategory::Lower) && slot != PatchSlot::Torso) continue;
      fill_quad(parsing, q, kUpperClothes);
    }
  }
  if (tucked) {
    fill_quad(parsing, build_layout(pose, GarmentCategory::Lower).quads.at(PatchSlot::Torso), kPants);
  }
  if (outfit == Outfit::Dress) {
    for (const auto& [slot, q] : build_layout(pose, GarmentCategory::Dress).quads) {
      fill_quad(parsing, q, kDress);
    }
  }

  RasterImage image(canvas.width, canvas.height, 3, 0);
  for (int y = 0; y < canvas.height; ++y) {
    for (int x = 0; x < canvas.width; ++x) {
      const auto label = parsing.at(x, y);
      std::array<std::uint8_t, 3> rgb{200, 200, 205};
      switch (label) {
        case kFace:
        case kLeftArm:
        case kRightArm: rgb = {224, 172, 140}; break;
        case kHair: rgb = {40, 30, 25}; break;
        case kLeftShoe:
        case kRightShoe: rgb = {30, 30, 60}; break;
        case kUpperClothes:
        case kDress:
          rgb = colors.upper ? *colors.upper : smooth_texel(texture_seed, x, y);
          break;
        case kPants:
          rgb = colors.lower ? *colors.lower : smooth_texel(texture_seed + 7919, x, y);
          break;
        default: break;
      }
      for (int c = 0; c < 3; ++c) image.at(x, y, c) = rgb[c];
    }
  }
  return PersonRecord{"fixture-" + std::to_string(texture_seed), std::move(image), pose,
                      std::move(parsing)};
}

Quadrilateral random_quad(std::mt19937_64& rng, double w, double h) {
  std::uniform_real_distribution<double> dx(0.0, w), dy(0.0, h);
  for (;;) {
    Quadrilateral q;
    for (auto& c : q.corners) c = {dx(rng), dy(rng)};
    if (is_valid_quad(q)) return q;
  }
}

Quadrilateral random_convex_quad(std::mt19937_64& rng, double w, double h) {
  static const std::array<Point2, 4> square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  for (;;) {
    Quadrilateral q = random_quad(rng, w, h);
    if (orientation_consistent(square, q.corners) && signed_area(q) > 0) return q;
  }
}

std::pair<Quadrilateral, Quadrilateral> random_quad_pair(std::mt19937_64& rng, double w, double h) {
  for (;;) {
    Quadrilateral a = random_quad(rng, w, h);
    Quadrilateral b = random_quad(rng, w, h);
    if (orientation_consistent(a.corners, b.corners)) return {a, b};
  }
}

BinaryMask erode(const BinaryMask& m, int radius) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool keep = true;
      for (int dy = -radius; dy <= radius && keep; ++dy) {
        for (int dx = -radius; dx <= radius && keep; ++dx) {
          const int xx = x + dx, yy = y + dy;
          keep = xx >= 0 && yy >= 0 && xx < m.width() && yy < m.height() && m.at(xx, yy);
        }
      }
      out.at(x, y) = keep;
    }
  }
  return out;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("patchroute_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string diff_trees(const fs::path& a, const fs::path& b) {
  auto listing = [](const fs::path& root) {
    std::set<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file()) files.insert(fs::relative(e.path(), root));
    }
    return files;
  };
  const auto fa = listing(a), fb = listing(b);
  if (fa != fb) return "file sets differ";
  for (const fs::path& rel : fa) {
    std::ifstream ia(a / rel, std::ios::binary), ib(b / rel, std::ios::binary);
    const std::string sa{std::istreambuf_iterator<char>(ia), {}};
    const std::string sb{std::istreambuf_iterator<char>(ib), {}};
    if (sa != sb) return "content differs: " + rel.string();
  }
  return "";
}

}  // namespace fixtures
