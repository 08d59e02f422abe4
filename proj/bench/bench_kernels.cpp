// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Wall-clock timings of the OpenMP kernels against their serial twins, plus
// the full warp pipeline. Usage: bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "patchroute/kernels.hpp"
#include "patchroute/warp.hpp"

using namespace patchroute;
namespace k = patchroute::kernels;

namespace {

double best_ms(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double omp_ms, double ref_ms) {
  std::printf("%-24s  omp %9.3f ms   serial %9.3f ms   speedup %5.2fx\n", name, omp_ms, ref_ms,
              ref_ms / omp_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  std::printf("threads: %d, repeats: %d (best of)\n", omp_get_max_threads(), repeats);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  const int w = kDefaultCanvas.width, h = kDefaultCanvas.height;

  RasterImage src(w, h, 4);
  for (auto& b : src.data()) b = static_cast<std::uint8_t>(byte(rng));
  const BinaryMask valid(w, h, true);
  const auto [qa, qb] = fixtures::random_quad_pair(rng, w, h);
  const Homography dst_to_src = estimate_homography_dlt(qb.corners, qa.corners);
  RasterImage dst(w, h, 4);
  BinaryMask dst_valid(w, h);
  report("warp_bilinear",
         best_ms(repeats, [&] { k::warp_bilinear(src, valid, dst_to_src, {0, 0, w, h}, dst, dst_valid); }),
         best_ms(repeats, [&] { k::reference::warp_bilinear(src, valid, dst_to_src, dst, dst_valid); }));

  std::vector<RasterImage> imgs(10, src);
  std::vector<BinaryMask> masks;
  std::bernoulli_distribution on(0.3);
  for (int i = 0; i < 10; ++i) {
    BinaryMask m(w, h);
    for (auto& b : m.data()) b = on(rng);
    masks.push_back(std::move(m));
  }
  std::vector<k::Layer> layers;
  for (int i = 0; i < 10; ++i) layers.push_back({&imgs[i], &masks[i]});
  RasterImage out(w, h, 4);
  BinaryMask coverage(w, h);
  report("composite (10 layers)", best_ms(repeats, [&] { k::composite(layers, out, coverage); }),
         best_ms(repeats, [&] { k::reference::composite(layers, out, coverage); }));

  FeatureMap f(64, 64, 40);
  std::normal_distribution<float> v(0.0f, 1.0f);
  for (auto& x : f.data()) x = v(rng);
  const FeatureMap gamma(64, 64, 40, 1.0f), beta(64, 64, 40, 0.0f);
  std::vector<double> mean(64), stddev(64);
  FeatureMap fo(64, 64, 40);
  report("channel_stats", best_ms(repeats, [&] { k::channel_stats(f, mean, stddev); }),
         best_ms(repeats, [&] { k::reference::channel_stats(f, mean, stddev); }));
  report("modulate", best_ms(repeats, [&] { k::modulate(f, gamma, beta, mean, stddev, 1e-5, fo); }),
         best_ms(repeats, [&] { k::reference::modulate(f, gamma, beta, mean, stddev, 1e-5, fo); }));

  const PoseSkeleton pose = fixtures::standing_pose();
  const PersonRecord person = fixtures::make_person(pose, fixtures::Outfit::UpperOnly, 3);
  const PoseSkeleton target = fixtures::random_pose(rng);
  const double pipeline = best_ms(repeats, [&] {
    warp_garment(person.image, person.parsing, pose, target, GarmentCategory::Upper);
  });
  std::printf("%-24s  %9.3f ms\n", "warp_garment (10 slots)", pipeline);
  return 0;
}
