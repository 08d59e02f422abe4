// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "patchroute/error.hpp"
#include "png_codec.hpp"

namespace patchroute::io {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedJson, what);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  return j.get<double>();
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_member(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::MissingFile, "missing file " + path.string());
  }
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xff));
}

std::string mask_member(PatchSlot slot) { return std::string(to_string(slot)) + ".mask.png"; }
std::string image_member(PatchSlot slot) { return std::string(to_string(slot)) + ".png"; }

}  // namespace

// --- raw files ------------------------------------------------------------

std::vector<std::uint8_t> read_file(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

json read_json(const fs::path& path) {
  const auto bytes = read_file(path);
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) malformed("invalid JSON in " + path.string());
  return j;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

// --- PNG -------------------------------------------------------------------

RasterImage load_png(const fs::path& path) {
  const auto bytes = read_file(path);
  return decode_png(bytes);
}

void save_png(const RasterImage& image, const fs::path& path) {
  write_file_atomic(path, encode_png(image));
}

RasterImage mask_to_image(const BinaryMask& mask) {
  RasterImage img(mask.width(), mask.height(), 1);
  auto px = img.data();
  const auto bits = mask.data();
  for (std::size_t i = 0; i < bits.size(); ++i) px[i] = bits[i] ? 255 : 0;
  return img;
}

BinaryMask image_to_mask(const RasterImage& image) {
  if (image.channels() != 1) throw Error(ErrorCode::CorruptFile, "mask PNG must be grayscale");
  BinaryMask mask(image.width(), image.height());
  auto bits = mask.data();
  const auto px = image.data();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] != 0 && px[i] != 255) {
      throw Error(ErrorCode::CorruptFile, "mask PNG holds values other than 0 and 255");
    }
    bits[i] = px[i] ? 1 : 0;
  }
  return mask;
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
  save_png(mask_to_image(mask), path);
}

BinaryMask load_mask(const fs::path& path) { return image_to_mask(load_png(path)); }

// --- pose, labels, parsing -------------------------------------------------

json pose_to_json(const PoseSkeleton& pose) {
  json joints = json::array();
  for (const auto& k : pose.joints) {
    joints.push_back({k.position.x, k.position.y, k.confidence});
  }
  return {{"canvas", {pose.canvas.width, pose.canvas.height}}, {"joints", joints}};
}

PoseSkeleton pose_from_json(const json& j) {
  const json& canvas = member(j, "canvas");
  if (!canvas.is_array() || canvas.size() != 2 || !canvas[0].is_number_integer() ||
      !canvas[1].is_number_integer()) {
    malformed("pose canvas must be [width, height]");
  }
  const json& joints = member(j, "joints");
  if (!joints.is_array() || joints.size() != kNumJoints) {
    malformed("pose must list exactly 18 joints, got " +
              std::to_string(joints.is_array() ? joints.size() : 0));
  }
  PoseSkeleton pose;
  pose.canvas = {canvas[0].get<int>(), canvas[1].get<int>()};
  for (int i = 0; i < kNumJoints; ++i) {
    const json& jt = joints[i];
    if (!jt.is_array() || jt.size() != 3) malformed("joint must be [x, y, confidence]");
    pose.joints[i] = {{number(jt[0], "x"), number(jt[1], "y")}, number(jt[2], "confidence")};
  }
  validate_pose(pose);
  return pose;
}

PoseSkeleton load_pose(const fs::path& path) { return pose_from_json(read_json(path)); }

void save_pose(const PoseSkeleton& pose, const fs::path& path) {
  write_text_atomic(path, pose_to_json(pose).dump(2) + "\n");
}

json label_table_to_json(const LabelTable& table) {
  json labels = json::array();
  for (const auto& [id, entry] : table) {
    labels.push_back({{"id", id}, {"name", entry.name}, {"class", to_string(entry.semantic)}});
  }
  return {{"format_version", kFormatVersion}, {"labels", labels}};
}

LabelTable label_table_from_json(const json& j) {
  const json& labels = member(j, "labels");
  if (!labels.is_array()) malformed("labels must be an array");
  LabelTable table;
  for (const json& e : labels) {
    const json& id = member(e, "id");
    if (!id.is_number_integer() || id.get<int>() < 0 || id.get<int>() > 255) {
      malformed("label id must be an integer in [0,255]");
    }
    const auto cls = parse_semantic_class(string_member(e, "class"));
    if (!cls) malformed("unknown semantic class '" + string_member(e, "class") + "'");
    const auto key = static_cast<std::uint8_t>(id.get<int>());
    if (table.contains(key)) malformed("duplicate label id " + std::to_string(key));
    table[key] = {string_member(e, "name"), *cls};
  }
  return table;
}

fs::path label_sidecar(const fs::path& parsing_png) {
  fs::path p = parsing_png;
  p.replace_extension(".json");
  return p;
}

ParsingMap load_parsing(const fs::path& parsing_png) {
  const fs::path sidecar = label_sidecar(parsing_png);
  require_file(parsing_png);
  require_file(sidecar);
  IndexedImage idx = decode_indexed_png(read_file(parsing_png));
  ParsingMap parsing{idx.width, idx.height, std::move(idx.indices),
                     label_table_from_json(read_json(sidecar))};
  validate_parsing(parsing);
  return parsing;
}

void save_parsing(const ParsingMap& parsing, const fs::path& parsing_png) {
  validate_parsing(parsing);
  write_file_atomic(parsing_png, encode_indexed_png(parsing.width, parsing.height, parsing.labels));
  write_text_atomic(label_sidecar(parsing_png), label_table_to_json(parsing.table).dump(2) + "\n");
}

// --- person -----------------------------------------------------------------

PersonRecord load_person(const fs::path& path) {
  fs::path image, pose, parsing;
  std::string id;
  if (fs::is_directory(path)) {
    image = path / "image.png";
    pose = path / "pose.json";
    parsing = path / "parsing.png";
    id = path.filename().string();
    if (id.empty()) id = path.parent_path().filename().string();
  } else {
    require_file(path);
    const json m = read_json(path);
    const fs::path base = path.parent_path();
    image = base / string_member(m, "image");
    pose = base / string_member(m, "pose");
    parsing = base / string_member(m, "parsing");
    id = m.contains("id") ? string_member(m, "id") : path.stem().string();
  }
  require_file(image);
  require_file(pose);
  require_file(parsing);
  require_file(label_sidecar(parsing));

  PersonRecord person;
  person.id = id;
  person.pose = load_pose(pose);
  person.parsing = load_parsing(parsing);
  person.image = load_png(image);
  validate_person(person);
  return person;
}

void save_person(const PersonRecord& person, const fs::path& dir) {
  fs::create_directories(dir);
  save_png(person.image, dir / "image.png");
  save_pose(person.pose, dir / "pose.json");
  save_parsing(person.parsing, dir / "parsing.png");
}

// --- homographies, quads -----------------------------------------------------

json homography_to_json(const Homography& h) {
  json arr = json::array();
  for (double v : h.matrix()) arr.push_back(v);
  return arr;
}

Homography homography_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9) malformed("homography must be a 9-element array");
  Homography::Matrix m;
  for (int i = 0; i < 9; ++i) m[i] = number(j[i], "homography entry");
  return Homography::from_normalized(m);
}

json quad_to_json(const Quadrilateral& q) {
  json arr = json::array();
  for (const auto& p : q.corners) arr.push_back({p.x, p.y});
  return arr;
}

Quadrilateral quad_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) malformed("quad must list 4 corners");
  Quadrilateral q;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) malformed("corner must be [x, y]");
    q.corners[i] = {number(j[i][0], "x"), number(j[i][1], "y")};
  }
  return q;
}

json layout_to_json(const PatchLayout& layout) {
  json out = json::object();
  for (const auto& [slot, quad] : layout.quads) out[std::string(to_string(slot))] = quad_to_json(quad);
  return out;
}

// --- patch-set archives ------------------------------------------------------

void save_patchset(const PatchSet& set, const fs::path& dir) {
  validate_patchset(set);
  fs::create_directories(dir);
  json patches = json::array();
  for (const auto& [slot, patch] : set.patches) {
    const auto image_bytes = encode_png(patch.image);
    const auto mask_bytes = encode_png(mask_to_image(patch.valid_mask));
    write_file_atomic(dir / image_member(slot), image_bytes);
    write_file_atomic(dir / mask_member(slot), mask_bytes);
    patches.push_back({{"slot", to_string(slot)},
                       {"source_quad", quad_to_json(patch.source_quad)},
                       {"h_source_to_norm", homography_to_json(patch.h_source_to_norm)},
                       {"image", image_member(slot)},
                       {"image_sha256", sha256_hex(image_bytes)},
                       {"mask", mask_member(slot)},
                       {"mask_sha256", sha256_hex(mask_bytes)}});
  }
  const json manifest{{"format_version", kFormatVersion},
                      {"category", to_string(set.category)},
                      {"pose", pose_to_json(set.source_pose)},
                      {"patches", patches}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

PatchSet load_patchset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) {
    throw Error(ErrorCode::CorruptArchive, "archive has no manifest: " + dir.string());
  }
  json m;
  try {
    m = read_json(manifest_path);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptArchive, e.what());
  }
  auto corrupt = [&](const std::string& what) {
    throw Error(ErrorCode::CorruptArchive, dir.string() + ": " + what);
  };
  try {
    if (!m.contains("format_version") || m["format_version"] != kFormatVersion) {
      corrupt("unsupported format_version");
    }
    PatchSet set;
    const auto category = parse_category(string_member(m, "category"));
    if (!category) corrupt("unknown category");
    set.category = *category;
    set.source_pose = pose_from_json(member(m, "pose"));
    const json& patches = member(m, "patches");
    if (!patches.is_array()) corrupt("patches must be an array");
    for (const json& p : patches) {
      const auto slot = parse_slot(string_member(p, "slot"));
      if (!slot) corrupt("unknown slot");
      if (set.patches.contains(*slot)) corrupt("duplicate slot");
      auto member_bytes = [&](const char* file_key, const char* digest_key) {
        const fs::path file = dir / string_member(p, file_key);
        if (!fs::is_regular_file(file)) corrupt("missing member " + file.filename().string());
        auto bytes = read_file(file);
        if (sha256_hex(bytes) != string_member(p, digest_key)) {
          corrupt("digest mismatch for " + file.filename().string());
        }
        return bytes;
      };
      NormalizedPatch patch;
      patch.slot = *slot;
      patch.source_quad = quad_from_json(member(p, "source_quad"));
      patch.h_source_to_norm = homography_from_json(member(p, "h_source_to_norm"));
      patch.image = decode_png(member_bytes("image", "image_sha256"));
      patch.valid_mask = image_to_mask(decode_png(member_bytes("mask", "mask_sha256")));
      set.patches.emplace(*slot, std::move(patch));
    }
    validate_patchset(set);
    return set;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptArchive) throw;
    throw Error(ErrorCode::CorruptArchive, dir.string() + ": " + e.what());
  }
}

// --- warped garments, feature maps ------------------------------------------

void save_warped_garment(const WarpedGarment& g, const fs::path& image_png,
                         const fs::path& mask_png) {
  save_png(g.image, image_png);
  save_mask(g.mask, mask_png);
}

WarpedGarment load_warped_garment(const fs::path& image_png, const fs::path& mask_png) {
  WarpedGarment g{load_png(image_png), load_mask(mask_png)};
  if (g.image.size() != g.mask.size()) {
    throw Error(ErrorCode::DimensionMismatch, "warped garment image and mask sizes differ");
  }
  return g;
}

std::vector<std::uint8_t> encode_feature_map(const FeatureMap& f) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 4 * f.data().size());
  put_u32le(out, kFeatureMagic);
  put_u32le(out, static_cast<std::uint32_t>(f.channels()));
  put_u32le(out, static_cast<std::uint32_t>(f.height()));
  put_u32le(out, static_cast<std::uint32_t>(f.width()));
  for (float v : f.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(out, bits);
  }
  return out;
}

FeatureMap decode_feature_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw Error(ErrorCode::CorruptFile, "feature map header truncated");
  if (get_u32le(bytes.data()) != kFeatureMagic) {
    throw Error(ErrorCode::CorruptFile, "feature map magic mismatch");
  }
  const std::uint64_t c = get_u32le(bytes.data() + 4);
  const std::uint64_t h = get_u32le(bytes.data() + 8);
  const std::uint64_t w = get_u32le(bytes.data() + 12);
  if (c > (1u << 20) || h > (1u << 20) || w > (1u << 20) || bytes.size() != 16 + 4 * c * h * w) {
    throw Error(ErrorCode::CorruptFile, "feature map size does not match its header");
  }
  FeatureMap f(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  auto values = f.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = get_u32le(bytes.data() + 16 + 4 * i);
    float v;
    std::memcpy(&v, &bits, 4);
    if (!std::isfinite(v)) throw Error(ErrorCode::CorruptFile, "feature map holds non-finite values");
    values[i] = v;
  }
  return f;
}

void save_feature_map(const FeatureMap& f, const fs::path& path) {
  write_file_atomic(path, encode_feature_map(f));
}

FeatureMap load_feature_map(const fs::path& path) { return decode_feature_map(read_file(path)); }

// --- edit scripts -------------------------------------------------------------

EditScript parse_edit_script(const json& j, const fs::path& base_dir) {
  if (!j.is_array()) malformed("edit script must be a JSON array");
  EditScript script;
  auto layer_of = [](const json& c) {
    if (!c.contains("layer")) return LayerId::Upper;
    const std::string l = string_member(c, "layer");
    if (l == "upper") return LayerId::Upper;
    if (l == "lower") return LayerId::Lower;
    malformed("layer must be 'upper' or 'lower'");
  };
  auto slot_of = [](const json& c) {
    const auto s = parse_slot(string_member(c, "slot"));
    if (!s) malformed("unknown slot '" + string_member(c, "slot") + "'");
    return *s;
  };
  for (const json& c : j) {
    const std::string op = string_member(c, "op");
    if (op == "set_dressing_order") {
      const auto order = parse_dressing_order(string_member(c, "order"));
      if (!order) malformed("order must be 'tuck_in' or 'tuck_out'");
      script.emplace_back(SetDressingOrder{*order});
    } else if (op == "trim") {
      TrimPatch t{layer_of(c), slot_of(c), number(member(c, "fraction"), "fraction"),
                  AxisEnd::Proximal};
      if (c.contains("end")) {
        const std::string end = string_member(c, "end");
        if (end == "distal") {
          t.end = AxisEnd::Distal;
        } else if (end != "proximal") {
          malformed("end must be 'proximal' or 'distal'");
        }
      }
      script.emplace_back(t);
    } else if (op == "drop") {
      script.emplace_back(DropPatch{layer_of(c), slot_of(c)});
    } else if (op == "replace") {
      script.emplace_back(
          ReplacePatch{layer_of(c), slot_of(c), load_patchset(base_dir / string_member(c, "donor"))});
    } else {
      malformed("unknown edit op '" + op + "'");
    }
  }
  return script;
}

EditScript load_edit_script(const fs::path& path) {
  return parse_edit_script(read_json(path), path.parent_path());
}

}  // namespace patchroute::io
