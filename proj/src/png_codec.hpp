// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace patchroute::io {

struct IndexedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> indices;
};

std::vector<std::uint8_t> encode_indexed_png(int width, int height,
                                             std::span<const std::uint8_t> indices);
IndexedImage decode_indexed_png(std::span<const std::uint8_t> bytes);

}  // namespace patchroute::io
