// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Each criterion prints one PASS/FAIL line with its
// measurements; a criterion passes only if its numbers and its time budget
// both hold. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "patchroute/cli.hpp"
#include "patchroute/edit.hpp"
#include "patchroute/error.hpp"
#include "patchroute/io.hpp"

using namespace patchroute;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int run_criterion(int index, const char* name, double budget_s,
                  const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < budget_s;
  const bool pass = o.ok && in_time;
  std::printf("%s  %2d  %-28s %7.3f s (budget %g s)  %s%s\n", pass ? "PASS" : "FAIL", index, name, s,
              budget_s, o.detail.str().c_str(), in_time ? "" : " [over time budget]");
  std::fflush(stdout);
  return pass ? 0 : 1;
}

BinaryMask bits_to_mask(unsigned bits) {
  BinaryMask m(3, 3);
  for (int i = 0; i < 9; ++i) m.data()[i] = (bits >> i) & 1u;
  return m;
}

BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double p) {
  BinaryMask m(w, h);
  std::bernoulli_distribution on(p);
  for (auto& b : m.data()) b = on(rng);
  return m;
}

FeatureMap random_features(std::mt19937_64& rng, int c, int h, int w) {
  FeatureMap f(c, h, w);
  std::uniform_real_distribution<float> v(-10.0f, 10.0f);
  for (auto& x : f.data()) x = v(rng);
  return f;
}

BinaryMask quad_union(const std::map<PatchSlot, Quadrilateral>& quads, Size canvas) {
  BinaryMask m(canvas.width, canvas.height);
  for (int y = 0; y < canvas.height; ++y) {
    for (int x = 0; x < canvas.width; ++x) {
      for (const auto& [slot, q] : quads) {
        if (fixtures::inside_quad(q, {x + 0.0, y + 0.0})) {
          m.at(x, y) = true;
          break;
        }
      }
    }
  }
  return m;
}

// --- 1 ----------------------------------------------------------------------

void homography_exactness(Outcome& o) {
  std::mt19937_64 rng(20260101);
  double worst = 0.0;
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto [src, dst] = fixtures::random_quad_pair(rng, kDefaultCanvas.width, kDefaultCanvas.height);
    try {
      const Homography h = estimate_homography_dlt(src.corners, dst.corners);
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, distance(apply_homography(h, src.corners[i]), dst.corners[i]));
      }
    } catch (const Error& e) {
      ++failures;
    }
  }
  o.detail << "max corner error " << worst << " px over 1000 pairs";
  o.require(failures == 0, std::to_string(failures) + " pairs rejected");
  o.require(worst < 1e-9, "max corner error < 1e-9");
}

// --- 2 ----------------------------------------------------------------------

double forward_rms(const Homography& h, const std::vector<Correspondence>& corr) {
  double sum = 0.0;
  for (const auto& c : corr) {
    const Point2 p = apply_homography(h, c.src);
    sum += (p.x - c.dst.x) * (p.x - c.dst.x) + (p.y - c.dst.y) * (p.y - c.dst.y);
  }
  return std::sqrt(sum / corr.size());
}

void lm_improvement(Outcome& o) {
  std::mt19937_64 rng(20260202);
  const double w = kDefaultCanvas.width, h = kDefaultCanvas.height;
  std::uniform_real_distribution<double> jitter(-40.0, 40.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  int improved = 0;
  double init_sum = 0.0, refined_sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    // Ground truth: the canvas corners pushed around by up to 40 px.
    const std::array<Point2, 4> canvas{Point2{0, 0}, Point2{w, 0}, Point2{w, h}, Point2{0, h}};
    std::array<Point2, 4> moved = canvas;
    for (auto& p : moved) p = p + Point2{jitter(rng), jitter(rng)};
    const Homography truth = estimate_homography_dlt(canvas, moved);

    // The four initialization points are one per canvas quadrant.
    std::vector<Correspondence> corr;
    for (int i = 0; i < 12; ++i) {
      const int qx = i < 4 ? (i == 1 || i == 2) : -1;
      const int qy = i < 4 ? (i >= 2) : -1;
      std::uniform_real_distribution<double> ux(qx < 0 ? 0.0 : qx * w / 2, qx < 0 ? w : (qx + 1) * w / 2);
      std::uniform_real_distribution<double> uy(qy < 0 ? 0.0 : qy * h / 2, qy < 0 ? h : (qy + 1) * h / 2);
      const Point2 s{ux(rng), uy(rng)};
      corr.push_back({s, apply_homography(truth, s) + Point2{noise(rng), noise(rng)}});
    }
    const Homography init = estimate_homography_dlt({corr[0].src, corr[1].src, corr[2].src, corr[3].src},
                                                    {corr[0].dst, corr[1].dst, corr[2].dst, corr[3].dst});
    const Homography refined = refine_homography_lm(init, corr);
    const double e0 = forward_rms(init, corr), e1 = forward_rms(refined, corr);
    improved += e1 <= e0;
    init_sum += e0;
    refined_sum += e1;
  }
  const double reduction = 1.0 - refined_sum / init_sum;
  o.detail << improved << "/100 trials improved; mean RMS " << init_sum / 100 << " -> "
           << refined_sum / 100 << " px (" << 100 * reduction << "% lower)";
  o.require(improved >= 95, ">= 95 trials improved");
  o.require(reduction >= 0.20, "mean error reduced by >= 20%");
}

// --- 3 ----------------------------------------------------------------------

void patch_round_trip(Outcome& o) {
  using fixtures::Outfit;
  const std::array<std::pair<Outfit, GarmentCategory>, 5> kinds{{
      {Outfit::UpperOnly, GarmentCategory::Upper},
      {Outfit::LowerOnly, GarmentCategory::Lower},
      {Outfit::Dress, GarmentCategory::Dress},
      {Outfit::UpperAndLower, GarmentCategory::Upper},
      {Outfit::TuckedIn, GarmentCategory::Lower},
  }};
  std::mt19937_64 rng(20260303);
  double worst_mae = 0.0, worst_iou = 1.0;
  for (int i = 0; i < 10; ++i) {
    const auto [outfit, category] = kinds[i % kinds.size()];
    const PoseSkeleton pose = fixtures::random_pose(rng);
    const PersonRecord person = fixtures::make_person(pose, outfit, 300 + i);
    const WarpOutput out = warp_garment(person.image, person.parsing, pose, pose, category);

    const BinaryMask m_g = garment_mask(person.parsing, category);
    const BinaryMask quads = quad_union(build_layout(pose, category).quads, pose.canvas);
    BinaryMask reference(pose.canvas.width, pose.canvas.height);
    for (std::size_t k = 0; k < reference.data().size(); ++k) {
      reference.data()[k] = quads.data()[k] && m_g.data()[k];
    }
    const BinaryMask interior = fixtures::erode(reference, 1);

    double sum = 0.0;
    std::size_t n = 0, inter = 0, uni = 0;
    for (int y = 0; y < pose.canvas.height; ++y) {
      for (int x = 0; x < pose.canvas.width; ++x) {
        const bool a = out.garment.mask.at(x, y), b = reference.at(x, y);
        inter += a && b;
        uni += a || b;
        if (!interior.at(x, y)) continue;
        for (int c = 0; c < 3; ++c) sum += std::abs(out.garment.image.at(x, y, c) - person.image.at(x, y, c));
        n += 3;
      }
    }
    worst_mae = std::max(worst_mae, sum / n);
    worst_iou = std::min(worst_iou, static_cast<double>(inter) / uni);
  }
  o.detail << "worst interior MAE " << worst_mae << "/255, worst IoU " << worst_iou
           << " over 10 fixtures";
  o.require(worst_mae <= 2.0, "interior MAE <= 2/255");
  o.require(worst_iou >= 0.95, "IoU >= 0.95");
}

// --- 4 ----------------------------------------------------------------------

void mask_algebra(Outcome& o) {
  std::size_t violations = 0;
  for (unsigned g = 0; g < 512; ++g) {
    const BinaryMask m_g = bits_to_mask(g);
    for (unsigned t = 0; t < 512; ++t) {
      const MisalignmentMasks mm = misalignment_masks(m_g, bits_to_mask(t));
      for (int i = 0; i < 9; ++i) {
        const bool in_g = (g >> i) & 1u, in_t = (t >> i) & 1u;
        const bool a = mm.align.data()[i], m = mm.misalign.data()[i];
        violations += a != (in_g && in_t);
        violations += m != (in_g && !in_t);
        violations += (a || m) != in_g;
        violations += a && m;
      }
    }
  }
  o.detail << "262144 pairs, " << violations << " identity violations";
  o.require(violations == 0, "partition identities exact");
}

// --- 5 ----------------------------------------------------------------------

void inpainting(Outcome& o) {
  std::mt19937_64 rng(20260505);
  std::uniform_int_distribution<int> channels(1, 4), side(1, 16);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  double worst = 0.0;
  int empty_align = 0, wrong_errors = 0;
  for (int t = 0; t < 1000; ++t) {
    const int c = channels(rng), h = side(rng), w = side(rng);
    const FeatureMap f = random_features(rng, c, h, w);
    const BinaryMask m_g = random_mask(rng, w, h, density(rng));
    const BinaryMask m_t = random_mask(rng, w, h, density(rng));
    const MisalignmentMasks mm = misalignment_masks(m_g, m_t);
    if (!mm.align.any() && mm.misalign.any()) {
      ++empty_align;
      try {
        inpaint_features(f, m_g, mm.align, mm.misalign);
        ++wrong_errors;
      } catch (const Error& e) {
        wrong_errors += e.code() != ErrorCode::EmptyAlignedRegion;
      }
      continue;
    }
    const FeatureMap g = inpaint_features(f, m_g, mm.align, mm.misalign);
    const FeatureMap again = inpaint_features(g, m_g, mm.align, mm.misalign);
    for (int k = 0; k < c; ++k) {
      double mean = 0.0;
      std::size_t n = 0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (mm.align.at(x, y)) {
            mean += f.at(k, y, x);
            ++n;
          }
        }
      }
      if (n) mean /= n;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          double expected = 0.0;  // outside M_g
          if (mm.align.at(x, y)) expected = f.at(k, y, x);
          if (mm.misalign.at(x, y)) expected = mean;
          worst = std::max(worst, std::abs(g.at(k, y, x) - expected));
          worst = std::max(worst, static_cast<double>(std::abs(again.at(k, y, x) - g.at(k, y, x))));
        }
      }
    }
  }
  o.detail << "max deviation " << worst << " over 1000 maps (" << empty_align
           << " with empty aligned region)";
  o.require(worst <= 1e-6, "locality, mean fill, idempotence and zero fill within 1e-6");
  o.require(wrong_errors == 0, "empty aligned region raises EmptyAlignedRegion");
}

// --- 6 ----------------------------------------------------------------------

void modulation(Outcome& o) {
  std::mt19937_64 rng(20260606);
  std::uniform_int_distribution<int> channels(1, 4), side(1, 16);
  double worst_mean = 0.0;
  int non_finite = 0, argmax_moved = 0, constant_channels = 0;
  for (int t = 0; t < 1000; ++t) {
    const int c = channels(rng), h = side(rng), w = side(rng);
    FeatureMap f = random_features(rng, c, h, w);
    if (t % 4 == 0) {
      const int k = static_cast<int>(rng() % c);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f.at(k, y, x) = 3.25f;
      }
    }
    const FeatureMap out = spatially_adaptive_modulate(f, FeatureMap(c, h, w, 1.0f), FeatureMap(c, h, w, 0.0f));
    for (int k = 0; k < c; ++k) {
      double mean = 0.0;
      std::size_t in_arg = 0, out_arg = 0, idx = 0;
      float in_best = -std::numeric_limits<float>::infinity(), out_best = in_best;
      bool constant = true;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x, ++idx) {
          const float v = out.at(k, y, x);
          non_finite += !std::isfinite(v);
          mean += v;
          constant = constant && f.at(k, y, x) == f.at(k, 0, 0);
          if (f.at(k, y, x) > in_best) in_best = f.at(k, y, x), in_arg = idx;
          if (v > out_best) out_best = v, out_arg = idx;
        }
      }
      worst_mean = std::max(worst_mean, std::abs(mean / (h * w)));
      constant_channels += constant;
      argmax_moved += in_arg != out_arg;
    }
  }
  o.detail << "max |channel mean| " << worst_mean << ", " << constant_channels
           << " constant channels, " << non_finite << " non-finite, " << argmax_moved
           << " argmax moves";
  o.require(worst_mean < 1e-6, "per-channel mean < 1e-6");
  o.require(non_finite == 0, "finite outputs");
  o.require(argmax_moved == 0, "argmax preserved");
}

// --- 7 ----------------------------------------------------------------------

void erase_statistics(Outcome& o) {
  // A disc-shaped garment on a small canvas keeps 10k draws cheap.
  constexpr int kSide = 96;
  WarpedGarment g{RasterImage(kSide, kSide, 4, 0), BinaryMask(kSide, kSide)};
  for (int y = 0; y < kSide; ++y) {
    for (int x = 0; x < kSide; ++x) {
      if ((x - 48) * (x - 48) + (y - 48) * (y - 48) <= 40 * 40) {
        g.mask.at(x, y) = true;
        for (int c = 0; c < 3; ++c) g.image.at(x, y, c) = static_cast<std::uint8_t>(40 * c + x);
        g.image.at(x, y, 3) = 255;
      }
    }
  }
  const double total = static_cast<double>(g.mask.count());
  const EraseParams params;
  constexpr double kAlpha = 0.9;
  int applied = 0, out_of_range = 0, nondeterministic = 0, skipped_but_changed = 0;
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const EraseResult r = random_erase_report(g, seed, kAlpha, params);
    const EraseResult again = random_erase_report(g, seed, kAlpha, params);
    nondeterministic += !(r.garment == again.garment) || r.applied != again.applied;
    if (!r.applied) {
      skipped_but_changed += !(r.garment == g);
      continue;
    }
    ++applied;
    const double fraction = (total - static_cast<double>(r.garment.mask.count())) / total;
    lo = std::min(lo, fraction);
    hi = std::max(hi, fraction);
    out_of_range += fraction < params.min_fraction || fraction > params.max_fraction;
  }
  const double rate = applied / 10000.0;
  o.detail << "application rate " << rate << ", erased fraction in [" << lo << ", " << hi << "]";
  o.require(std::abs(rate - kAlpha) <= 0.009, "rate within 0.9 +- 0.009");
  o.require(out_of_range == 0, "erased fraction within [0.05, 0.25]");
  o.require(nondeterministic == 0, "deterministic per seed");
  o.require(skipped_but_changed == 0, "skipped draws leave the garment untouched");
}

// --- 8 ----------------------------------------------------------------------

void layout_covariance(Outcome& o) {
  std::mt19937_64 rng(20260808);
  std::uniform_real_distribution<double> shift(-40.0, 40.0), angle(-0.4, 0.4), scale(0.7, 1.0);
  double worst = 0.0;
  int wrong_counts = 0;
  const Point2 centre{kDefaultCanvas.width / 2.0, kDefaultCanvas.height / 2.0};
  constexpr std::array<int, 4> kMirrorPerm{1, 0, 3, 2};
  for (int t = 0; t < 500; ++t) {
    const PoseSkeleton pose = fixtures::random_pose(rng);
    wrong_counts += build_layout(pose, GarmentCategory::Upper).present_count() != 10;
    wrong_counts += build_layout(pose, GarmentCategory::Dress).present_count() != 10;
    wrong_counts += build_layout(pose, GarmentCategory::Lower).present_count() != 5;

    const Point2 d{shift(rng), shift(rng)};
    const double a = angle(rng), k = scale(rng), ca = std::cos(a), sa = std::sin(a);
    const std::function<Point2(Point2)> maps[] = {
        [&](Point2 p) { return p + d; },
        [&](Point2 p) {
          const Point2 v = p - centre;
          return centre + d + k * Point2{ca * v.x - sa * v.y, sa * v.x + ca * v.y};
        },
    };
    for (GarmentCategory cat : {GarmentCategory::Upper, GarmentCategory::Lower}) {
      const PatchLayout base = build_layout(pose, cat);
      for (const auto& f : maps) {
        const PatchLayout moved = build_layout(fixtures::map_pose(pose, f), cat);
        if (moved.present_count() != base.present_count()) {
          ++wrong_counts;
          continue;
        }
        for (const auto& [slot, q] : base.quads) {
          for (int i = 0; i < 4; ++i) worst = std::max(worst, distance(f(q.corners[i]), moved.quads.at(slot).corners[i]));
        }
      }
      const double axis = centre.x;
      const PatchLayout mirrored = build_layout(fixtures::mirror_pose(pose, axis), cat);
      for (const auto& [slot, q] : base.quads) {
        const auto& m = mirrored.quads.at(mirror_slot(slot)).corners;
        for (int i = 0; i < 4; ++i) {
          worst = std::max(worst, distance({2.0 * axis - q.corners[i].x, q.corners[i].y}, m[kMirrorPerm[i]]));
        }
      }
    }
  }
  o.detail << "max corner deviation " << worst << " px over 500 skeletons";
  o.require(worst <= 1e-9, "translation, similarity and mirror covariance within 1e-9");
  o.require(wrong_counts == 0, "10 upper, 10 dress and 5 lower patches");
}

// --- 9 ----------------------------------------------------------------------

std::size_t changed_slots(const PatchSet& a, const PatchSet& b, PatchSlot named) {
  std::size_t n = 0;
  for (const auto& [slot, patch] : a.patches) {
    if (slot == named) continue;
    const auto it = b.patches.find(slot);
    n += it == b.patches.end() || !(it->second == patch);
  }
  return n;
}

void edit_locality(Outcome& o) {
  const PoseSkeleton pose = fixtures::standing_pose();
  const PersonRecord top = fixtures::make_person(pose, fixtures::Outfit::UpperOnly, 901);
  const PersonRecord bottom = fixtures::make_person(pose, fixtures::Outfit::LowerOnly, 902);
  const PersonRecord other = fixtures::make_person(pose, fixtures::Outfit::UpperOnly, 903);
  const PatchSet upper = decompose_garment(top.image, top.parsing, pose, GarmentCategory::Upper);
  const PatchSet lower = decompose_garment(bottom.image, bottom.parsing, pose, GarmentCategory::Lower);
  const PatchSet donor = decompose_garment(other.image, other.parsing, pose, GarmentCategory::Upper);

  std::mt19937_64 rng(20260909);
  std::size_t locality = 0, involution = 0, omission = 0, scripts = 0;
  for (int t = 0; t < 3; ++t) {
    const PoseSkeleton target = fixtures::random_pose(rng);
    const TryOnBundle b = make_bundle(upper, lower, target);

    // Single-command scripts naming one slot of one layer.
    for (PatchSlot slot : slots_for(GarmentCategory::Upper)) {
      const std::vector<EditCommand> commands{
          TrimPatch{LayerId::Upper, slot, 0.5, AxisEnd::Distal},
          DropPatch{LayerId::Upper, slot},
          ReplacePatch{LayerId::Upper, slot, donor},
      };
      for (const EditCommand& cmd : commands) {
        const TryOnBundle e = apply_edit_script(b, {cmd});
        locality += changed_slots(b.upper->patches, e.upper->patches, slot);
        locality += !(e.lower == b.lower);
        ++scripts;
      }
    }
    for (PatchSlot slot : slots_for(GarmentCategory::Lower)) {
      const TryOnBundle e = apply_edit_script(b, {DropPatch{LayerId::Lower, slot}});
      locality += changed_slots(b.lower->patches, e.lower->patches, slot);
      locality += !(e.upper == b.upper);
      ++scripts;

      // Dropping equals never having had the slot.
      PatchSet without = lower;
      without.patches.erase(slot);
      const TryOnBundle omitted = make_bundle(upper, without, target);
      omission += !(e == omitted);
      omission += !(composite_bundle(e) == composite_bundle(omitted));
    }

    const TryOnBundle in = set_dressing_order(b, DressingOrder::TuckIn);
    const TryOnBundle out = set_dressing_order(b, DressingOrder::TuckOut);
    const TryOnBundle back = set_dressing_order(out, DressingOrder::TuckIn);
    const TryOnBundle forth = set_dressing_order(back, DressingOrder::TuckOut);
    involution += !(back == in);
    involution += !(forth == out);
    involution += !(composite_bundle(back) == composite_bundle(in));
    involution += changed_slots(b.upper->patches, out.upper->patches, PatchSlot::Torso);
    involution += changed_slots(b.lower->patches, out.lower->patches, PatchSlot::Torso);
  }
  o.detail << scripts << " scripts; " << locality << " locality, " << involution
           << " involution, " << omission << " omission mismatches";
  o.require(locality == 0, "non-named patches bit-identical");
  o.require(involution == 0, "TuckIn/TuckOut involution exact");
  o.require(omission == 0, "DropPatch equals omission");
}

// --- 10 ---------------------------------------------------------------------

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run_cli(args, out, err);
}

void end_to_end(Outcome& o) {
  fixtures::TempDir dir("acceptance_batch");
  std::mt19937_64 rng(20261010);
  using fixtures::Outfit;
  const std::array<Outfit, 4> outfits{Outfit::UpperOnly, Outfit::LowerOnly, Outfit::Dress,
                                      Outfit::UpperAndLower};
  for (int i = 0; i < 4; ++i) {
    io::save_person(fixtures::make_person(fixtures::random_pose(rng), outfits[i], 1000 + i),
                    dir / "people" / ("p" + std::to_string(i)));
  }
  std::string manifest;
  for (int j = 0; j < 20; ++j) {
    const std::string src = "people/p" + std::to_string(j % 4);
    const std::string dst = "people/p" + std::to_string((j + 1 + j / 4) % 4);
    if (j % 5 == 4) {
      manifest += "{\"id\": \"job" + std::to_string(j) + "\", \"op\": \"decompose\", \"source\": \"" + src + "\"}\n";
    } else {
      manifest += "{\"id\": \"job" + std::to_string(j) + "\", \"op\": \"warp\", \"source\": \"" + src +
                  "\", \"target\": \"" + dst + "\"}\n";
    }
  }
  io::write_text_atomic(dir / "jobs.jsonl", manifest);
  const int code1 = cli({"--seed", "42", "--jobs", "1", "batch", (dir / "jobs.jsonl").string(), (dir / "j1").string()});
  const int code4 = cli({"--seed", "42", "--jobs", "4", "batch", (dir / "jobs.jsonl").string(), (dir / "j4").string()});
  const std::string diff = fixtures::diff_trees(dir / "j1", dir / "j4");
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "j1")) files += e.is_regular_file();

  // Round trips of every serialized artifact kind.
  std::size_t round_trip_failures = 0;
  for (int j = 0; j < 20; ++j) {
    const fs::path job = dir / "j1" / ("job" + std::to_string(j));
    if (j % 5 == 4) {
      const PatchSet set = io::load_patchset(job / "archive");
      io::save_patchset(set, dir / "rt" / ("a" + std::to_string(j)));
      round_trip_failures += !fixtures::diff_trees(job / "archive", dir / "rt" / ("a" + std::to_string(j))).empty();
      round_trip_failures += !(io::load_patchset(dir / "rt" / ("a" + std::to_string(j))) == set);
    } else {
      const WarpedGarment g = io::load_warped_garment(job / "gt.png", job / "mt.png");
      io::save_warped_garment(g, dir / "rt" / "g.png", dir / "rt" / "m.png");
      round_trip_failures += !(io::load_warped_garment(dir / "rt" / "g.png", dir / "rt" / "m.png") == g);
      round_trip_failures += io::read_file(job / "gt.png") != io::read_file(dir / "rt" / "g.png");
      const nlohmann::json h = io::read_json(job / "homographies.json");
      for (const auto& [slot, entry] : h["slots"].items()) {
        const Homography hom = io::homography_from_json(entry["h_norm_to_target"]);
        round_trip_failures += !(io::homography_from_json(nlohmann::json::parse(io::homography_to_json(hom).dump())) == hom);
      }
    }
  }
  FeatureMap f = random_features(rng, 4, 16, 16);
  round_trip_failures += !(io::decode_feature_map(io::encode_feature_map(f)) == f);

  o.detail << "batch exit codes " << code1 << "/" << code4 << ", " << files << " files compared, "
           << round_trip_failures << " round-trip failures";
  o.require(code1 == 0 && code4 == 0, "all 20 jobs succeed");
  o.require(diff.empty(), "parallelism 1 and 4 trees identical" + (diff.empty() ? "" : ": " + diff));
  o.require(round_trip_failures == 0, "serialization round trips bit-exact");
}

}  // namespace

int main() {
  int failed = 0;
  failed += run_criterion(1, "homography exactness", 2.0, homography_exactness);
  failed += run_criterion(2, "LM improvement", 5.0, lm_improvement);
  failed += run_criterion(3, "patch round trip", 10.0, patch_round_trip);
  failed += run_criterion(4, "mask algebra", 5.0, mask_algebra);
  failed += run_criterion(5, "inpainting", 5.0, inpainting);
  failed += run_criterion(6, "modulation", 5.0, modulation);
  failed += run_criterion(7, "erase statistics", 10.0, erase_statistics);
  failed += run_criterion(8, "layout covariance", 2.0, layout_covariance);
  failed += run_criterion(9, "edit locality and involution", 5.0, edit_locality);
  failed += run_criterion(10, "end-to-end determinism", 30.0, end_to_end);
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed;
}
