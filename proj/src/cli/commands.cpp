// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <ostream>

#include "patchroute/edit.hpp"
#include "patchroute/io.hpp"
#include "patchroute/person.hpp"

namespace patchroute::cli {

using nlohmann::json;

namespace {

void check_canvas(const RunConfig& config, Size actual, const std::string& what) {
  if (config.canvas && *config.canvas != actual) {
    throw Error(ErrorCode::CanvasMismatch,
                what + " is " + std::to_string(actual.width) + "x" + std::to_string(actual.height) +
                    ", configured canvas is " + std::to_string(config.canvas->width) + "x" +
                    std::to_string(config.canvas->height));
  }
}

void flush_warnings(std::ostream& err, const json& warnings) {
  for (const json& w : warnings) emit_diagnostic(err, w);
}

std::string size_text(Size s) { return std::to_string(s.width) + "x" + std::to_string(s.height); }

}  // namespace

void emit_diagnostic(std::ostream& err, const json& diagnostic) {
  err << diagnostic.dump() << '\n';
}

json error_diagnostic(ErrorCode code, const std::string& message) {
  return {{"level", "error"}, {"code", to_string(code)}, {"message", message}};
}

GarmentCategory resolve_category(const std::string& requested, const ParsingMap& parsing,
                                 json* warnings) {
  if (requested != "auto") {
    const auto c = parse_category(requested);
    if (!c) throw Error(ErrorCode::InvalidArgument, "unknown category '" + requested + "'");
    return *c;
  }
  switch (infer_category(parsing)) {
    case InferredCategory::Upper: return GarmentCategory::Upper;
    case InferredCategory::Lower: return GarmentCategory::Lower;
    case InferredCategory::Dress: return GarmentCategory::Dress;
    case InferredCategory::UpperAndLower:
      if (warnings) {
        warnings->push_back({{"level", "warning"},
                             {"code", "AmbiguousCategory"},
                             {"message", "person wears upper and lower garments; using upper"}});
      }
      return GarmentCategory::Upper;
  }
  return GarmentCategory::Upper;
}

PatchSet decompose_job(const RunConfig& config, const fs::path& person_path,
                       const fs::path& out_archive, const std::string& category, json* warnings) {
  const PersonRecord person = io::load_person(person_path);
  check_canvas(config, person.image.size(), "person canvas");
  const GarmentCategory cat = resolve_category(category, person.parsing, warnings);
  PatchSet set = decompose_garment(person.image, person.parsing, person.pose, cat, config.layout);
  if (warnings) {
    for (PatchSlot slot : slots_for(cat)) {
      if (set.patches.contains(slot)) continue;
      warnings->push_back({{"level", "warning"},
                           {"code", "SlotDropped"},
                           {"slot", to_string(slot)},
                           {"message", "slot has missing joints or a degenerate quad"}});
    }
  }
  io::save_patchset(set, out_archive);
  return set;
}

json homographies_json(const std::map<PatchSlot, Homography>& h,
                       const std::map<PatchSlot, Quadrilateral>& quads) {
  json slots = json::object();
  for (const auto& [slot, hom] : h) {
    json entry{{"h_norm_to_target", io::homography_to_json(hom)}};
    if (const auto it = quads.find(slot); it != quads.end()) {
      entry["target_quad"] = io::quad_to_json(it->second);
    }
    slots[std::string(to_string(slot))] = entry;
  }
  return {{"format_version", io::kFormatVersion}, {"slots", slots}};
}

void warp_job(const RunConfig& config, const fs::path& source_path, const fs::path& target_path,
              const std::string& category, std::optional<std::uint64_t> erase_seed,
              const fs::path& out_dir, json* warnings) {
  const PersonRecord source = io::load_person(source_path);
  const PersonRecord target = io::load_person(target_path);
  check_canvas(config, source.image.size(), "source canvas");
  check_canvas(config, target.image.size(), "target canvas");
  const GarmentCategory cat = resolve_category(category, source.parsing, warnings);
  const PatchSet set =
      decompose_garment(source.image, source.parsing, source.pose, cat, config.layout);
  RenderResult r = render_patchset(set, target.pose, config.layout, config.z_order);
  if (erase_seed) r.garment = random_erase(r.garment, *erase_seed, config.alpha, config.erase);
  fs::create_directories(out_dir);
  io::save_warped_garment(r.garment, out_dir / "gt.png", out_dir / "mt.png");
  io::write_text_atomic(out_dir / "homographies.json",
                        homographies_json(r.h_norm_to_target, r.target_quads).dump(2) + "\n");
}

int cmd_decompose(const Context& ctx, const fs::path& person, const fs::path& out_archive,
                  const std::string& category) {
  json warnings = json::array();
  const PatchSet set = decompose_job(ctx.config, person, out_archive, category, &warnings);
  flush_warnings(ctx.err, warnings);
  ctx.out << "wrote " << set.patches.size() << " " << to_string(set.category) << " patches to "
          << out_archive.string() << "\n";
  return 0;
}

int cmd_retarget(const Context& ctx, const fs::path& archive, const fs::path& target_path,
                 const fs::path& out_dir, std::optional<std::uint64_t> erase_seed) {
  const PatchSet set = io::load_patchset(archive);
  const PersonRecord target = io::load_person(target_path);
  check_canvas(ctx.config, target.image.size(), "target canvas");
  RenderResult r = render_patchset(set, target.pose, ctx.config.layout, ctx.config.z_order);
  std::size_t erased = 0;
  bool applied = false;
  if (erase_seed) {
    EraseResult e = random_erase_report(r.garment, *erase_seed, ctx.config.alpha, ctx.config.erase);
    r.garment = std::move(e.garment);
    erased = e.erased_pixels;
    applied = e.applied;
  }
  fs::create_directories(out_dir);
  io::save_warped_garment(r.garment, out_dir / "gt.png", out_dir / "mt.png");
  io::write_text_atomic(out_dir / "homographies.json",
                        homographies_json(r.h_norm_to_target, r.target_quads).dump(2) + "\n");
  ctx.out << "retargeted " << r.h_norm_to_target.size() << " patches; mask covers "
          << r.garment.mask.count() << " pixels";
  if (erase_seed) ctx.out << "; erase " << (applied ? "applied" : "skipped") << ", " << erased << " pixels";
  ctx.out << "\n";
  return 0;
}

int cmd_masks(const Context& ctx, const fs::path& g_t, const fs::path& m_t_path,
              const fs::path& parsing_path, const fs::path& out_dir, const std::string& category,
              const std::optional<fs::path>& features) {
  const WarpedGarment garment = io::load_warped_garment(g_t, m_t_path);
  const ParsingMap parsing = io::load_parsing(parsing_path);
  if (parsing.size() != garment.mask.size()) {
    throw Error(ErrorCode::DimensionMismatch, "parsing is " + size_text(parsing.size()) +
                                                  ", warped garment is " +
                                                  size_text(garment.mask.size()));
  }
  check_canvas(ctx.config, parsing.size(), "parsing canvas");
  const GarmentCategory cat = resolve_category(category, parsing, nullptr);
  const BinaryMask m_g = garment_mask(parsing, cat);
  const MisalignmentMasks mm = misalignment_masks(m_g, garment.mask);
  std::optional<FeatureMap> inpainted;
  if (features) inpainted = inpaint_features(io::load_feature_map(*features), m_g, mm.align, mm.misalign);

  fs::create_directories(out_dir);
  io::save_mask(m_g, out_dir / "mg.png");
  io::save_mask(mm.align, out_dir / "malign.png");
  io::save_mask(mm.misalign, out_dir / "mmisalign.png");
  if (inpainted) io::save_feature_map(*inpainted, out_dir / "features_inpainted.bin");
  ctx.out << "M_g " << m_g.count() << " px, M_align " << mm.align.count() << " px, M_misalign "
          << mm.misalign.count() << " px\n";
  return 0;
}

int cmd_edit(const Context& ctx, const std::optional<fs::path>& upper_path,
             const std::optional<fs::path>& lower_path, const fs::path& target_path,
             const fs::path& script_path, const fs::path& out_dir) {
  std::optional<PatchSet> upper, lower;
  if (upper_path) upper = io::load_patchset(*upper_path);
  if (lower_path) lower = io::load_patchset(*lower_path);
  const PersonRecord target = io::load_person(target_path);
  check_canvas(ctx.config, target.image.size(), "target canvas");
  const EditScript script = io::load_edit_script(script_path);

  TryOnBundle bundle = make_bundle(std::move(upper), std::move(lower), target.pose, ctx.config.layout);
  bundle = apply_edit_script(bundle, script);

  fs::create_directories(out_dir);
  if (bundle.upper) io::save_patchset(bundle.upper->patches, out_dir / "upper");
  if (bundle.lower) io::save_patchset(bundle.lower->patches, out_dir / "lower");
  const WarpedGarment preview = composite_bundle(bundle);
  io::save_png(preview.image, out_dir / "preview.png");
  ctx.out << "applied " << script.size() << " edit commands; preview covers "
          << preview.mask.count() << " pixels\n";
  return 0;
}

int cmd_inspect(const Context& ctx, const fs::path& path) {
  std::ostream& out = ctx.out;
  if (fs::is_directory(path) && fs::is_regular_file(path / "manifest.json")) {
    const PatchSet set = io::load_patchset(path);
    out << "patch-set archive " << path.string() << "\n"
        << "  category: " << to_string(set.category) << "\n"
        << "  source canvas: " << size_text(set.source_pose.canvas) << "\n"
        << "  patches: " << set.patches.size() << " of " << slots_for(set.category).size() << "\n";
    for (const auto& [slot, patch] : set.patches) {
      const auto& c = patch.source_quad.corners;
      out << "    " << to_string(slot) << ": valid " << patch.valid_mask.count() << " px, quad";
      for (const auto& p : c) out << " (" << p.x << ", " << p.y << ")";
      out << "\n";
    }
    return 0;
  }
  const std::string ext = path.extension().string();
  if (fs::is_directory(path) || ext == ".json") {
    const PersonRecord person = io::load_person(path);
    int confident = 0;
    for (const auto& k : person.pose.joints) confident += k.confidence >= ctx.config.layout.min_confidence;
    out << "person " << person.id << "\n"
        << "  canvas: " << size_text(person.image.size()) << "\n"
        << "  joints above confidence threshold: " << confident << " of " << kNumJoints << "\n";
    try {
      out << "  garment category: " << to_string(infer_category(person.parsing)) << "\n";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoGarmentPixels) throw;
      out << "  garment category: none\n";
    }
    return 0;
  }
  if (ext == ".bin") {
    const FeatureMap f = io::load_feature_map(path);
    out << "feature map " << path.string() << ": " << f.channels() << " x " << f.height() << " x "
        << f.width() << "\n";
    return 0;
  }
  if (ext == ".png") {
    const RasterImage img = io::load_png(path);
    out << "image " << path.string() << ": " << size_text(img.size()) << ", " << img.channels()
        << " channels\n";
    return 0;
  }
  if (!fs::exists(path)) throw Error(ErrorCode::MissingFile, "missing file " + path.string());
  throw Error(ErrorCode::InvalidArgument, "cannot inspect " + path.string());
}

}  // namespace patchroute::cli
