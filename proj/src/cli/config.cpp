// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "patchroute/cli.hpp"
#include "patchroute/error.hpp"

namespace patchroute::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    bad("config key '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    bad("config key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

ZOrder parse_z_order(const std::string& v) {
  ZOrder order;
  std::set<PatchSlot> seen;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto slot = parse_slot(trim(item));
    if (!slot) bad("z_order names unknown slot '" + std::string(trim(item)) + "'");
    if (!seen.insert(*slot).second) bad("z_order lists a slot twice");
    order.push_back(*slot);
  }
  if (order.size() != default_z_order().size()) bad("z_order must list every slot exactly once");
  return order;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha = to_double(k, v); }},
      {"jobs", [](RunConfig& c, const std::string& k, const std::string& v) { c.jobs = to_int<int>(k, v); }},
      {"canvas", [](RunConfig& c, const std::string&, const std::string& v) { c.canvas = parse_canvas(v); }},
      {"z_order", [](RunConfig& c, const std::string&, const std::string& v) { c.z_order = parse_z_order(v); }},
      {"layout.arm_width_ratio", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.arm_width_ratio = to_double(k, v); }},
      {"layout.leg_width_ratio", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.leg_width_ratio = to_double(k, v); }},
      {"layout.neck_height_ratio", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.neck_height_ratio = to_double(k, v); }},
      {"layout.torso_margin_ratio", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.torso_margin_ratio = to_double(k, v); }},
      {"layout.min_confidence", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.min_confidence = to_double(k, v); }},
      {"layout.waist_ratio", [](RunConfig& c, const std::string& k, const std::string& v) { c.layout.waist_ratio = to_double(k, v); }},
      {"erase.min_strokes", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.min_strokes = to_int<int>(k, v); }},
      {"erase.max_strokes", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.max_strokes = to_int<int>(k, v); }},
      {"erase.min_width", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.min_width = to_int<int>(k, v); }},
      {"erase.max_width", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.max_width = to_int<int>(k, v); }},
      {"erase.min_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.min_steps = to_int<int>(k, v); }},
      {"erase.max_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.max_steps = to_int<int>(k, v); }},
      {"erase.min_fraction", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.min_fraction = to_double(k, v); }},
      {"erase.max_fraction", [](RunConfig& c, const std::string& k, const std::string& v) { c.erase.max_fraction = to_double(k, v); }},
  };
  return table;
}

}  // namespace

Size parse_canvas(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) bad("canvas must be WxH, got '" + text + "'");
  const int w = to_int<int>("canvas", text.substr(0, x));
  const int h = to_int<int>("canvas", text.substr(x + 1));
  if (w <= 0 || h <= 0) bad("canvas dimensions must be positive");
  return {w, h};
}

void validate_run_config(const RunConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) bad("alpha must lie in [0,1]");
  if (config.jobs < 1) bad("jobs must be at least 1");
  validate_layout_params(config.layout);
  validate_erase_params(config.erase);
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') bad("config line " + std::to_string(lineno) + ": unterminated section");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) bad("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key(trim(body.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    const std::string value = unquote(trim(body.substr(eq + 1)));
    const auto it = setters().find(key);
    if (it == setters().end()) bad("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(config, key, value);
  }
}

}  // namespace patchroute::cli
