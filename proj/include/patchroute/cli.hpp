// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line surface. `run_cli` is the whole program minus process
// plumbing so tests can drive it in-process.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patchroute/image.hpp"
#include "patchroute/patch_layout.hpp"
#include "patchroute/warp.hpp"

namespace patchroute::cli {

struct RunConfig {
  LayoutParams layout;
  EraseParams erase;
  double alpha = kDefaultEraseProbability;
  // Canvas the inputs must match; unset means "whatever the inputs use".
  std::optional<Size> canvas;
  ZOrder z_order = default_z_order();
  std::uint64_t seed = 0;
  int jobs = 1;
};

void validate_run_config(const RunConfig& config);

/// Applies `key = value` lines on top of `config`. Grammar in docs/FORMATS.md.
void apply_config_text(RunConfig& config, const std::string& text);

/// "WxH", both positive.
Size parse_canvas(const std::string& text);

/// Exit codes: 0 success, 1 batch with failed jobs, 2 validation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patchroute::cli
