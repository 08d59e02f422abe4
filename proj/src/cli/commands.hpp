// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "patchroute/cli.hpp"
#include "patchroute/error.hpp"

namespace patchroute::cli {

namespace fs = std::filesystem;

struct Context {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;
};

/// One JSON object per line on the error stream.
void emit_diagnostic(std::ostream& err, const nlohmann::json& diagnostic);
nlohmann::json error_diagnostic(ErrorCode code, const std::string& message);

/// "auto" resolves from the parsing map; an upper+lower person resolves to
/// upper and a warning is appended to `warnings`.
GarmentCategory resolve_category(const std::string& requested, const ParsingMap& parsing,
                                 nlohmann::json* warnings);

/// Library-level job bodies shared by single commands and batch jobs.
/// Warnings are appended to `warnings` as diagnostic objects.
PatchSet decompose_job(const RunConfig& config, const fs::path& person, const fs::path& out_archive,
                       const std::string& category, nlohmann::json* warnings);
void warp_job(const RunConfig& config, const fs::path& source, const fs::path& target,
              const std::string& category, std::optional<std::uint64_t> erase_seed,
              const fs::path& out_dir, nlohmann::json* warnings);

nlohmann::json homographies_json(const std::map<PatchSlot, Homography>& h,
                                 const std::map<PatchSlot, Quadrilateral>& quads);

int cmd_decompose(const Context& ctx, const fs::path& person, const fs::path& out_archive,
                  const std::string& category);
int cmd_retarget(const Context& ctx, const fs::path& archive, const fs::path& target,
                 const fs::path& out_dir, std::optional<std::uint64_t> erase_seed);
int cmd_masks(const Context& ctx, const fs::path& g_t, const fs::path& m_t,
              const fs::path& parsing, const fs::path& out_dir, const std::string& category,
              const std::optional<fs::path>& features);
int cmd_edit(const Context& ctx, const std::optional<fs::path>& upper,
             const std::optional<fs::path>& lower, const fs::path& target, const fs::path& script,
             const fs::path& out_dir);
int cmd_batch(const Context& ctx, const fs::path& manifest, const fs::path& out_root);
int cmd_inspect(const Context& ctx, const fs::path& path);

}  // namespace patchroute::cli
