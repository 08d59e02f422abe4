// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// JSON-lines batch runner. Jobs share nothing; each writes into its own
// directory under the output root and records a status.json.

#include <omp.h>

#include <atomic>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include "commands.hpp"
#include "patchroute/io.hpp"

namespace patchroute::cli {

using nlohmann::json;

namespace {

struct Job {
  std::string id;
  json spec;                 // parsed line, or null when the line was unusable
  std::string parse_error;   // set when the line itself is invalid
};

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool safe_id(const std::string& id) {
  if (id.empty() || id == "." || id == ".." || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::vector<Job> read_jobs(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::MissingFile, "missing file " + manifest.string());
  std::vector<Job> jobs;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Job job;
    job.id = "line-" + std::to_string(lineno);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      job.parse_error = "line is not a JSON object";
    } else if (!j.contains("id") || !j["id"].is_string() || !safe_id(j["id"].get<std::string>())) {
      job.parse_error = "job id must be a non-empty string of [A-Za-z0-9._-]";
    } else if (ids.contains(j["id"].get<std::string>())) {
      job.parse_error = "duplicate job id '" + j["id"].get<std::string>() + "'";
    } else {
      job.id = j["id"].get<std::string>();
      job.spec = std::move(j);
    }
    ids.insert(job.id);
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::string string_field(const json& spec, const char* key, const char* fallback = nullptr) {
  if (!spec.contains(key)) {
    if (fallback) return fallback;
    throw Error(ErrorCode::MalformedJson, std::string("job lacks field '") + key + "'");
  }
  if (!spec[key].is_string()) {
    throw Error(ErrorCode::MalformedJson, std::string("job field '") + key + "' must be a string");
  }
  return spec[key].get<std::string>();
}

json run_job(const RunConfig& config, const Job& job, const fs::path& base, const fs::path& out_dir) {
  json status{{"id", job.id}};
  json warnings = json::array();
  try {
    if (!job.parse_error.empty()) throw Error(ErrorCode::MalformedJson, job.parse_error);
    const json& spec = job.spec;
    const std::string op = string_field(spec, "op");
    status["op"] = op;
    std::uint64_t seed = config.seed ^ fnv1a64(job.id);
    if (spec.contains("seed")) {
      if (!spec["seed"].is_number_unsigned()) {
        throw Error(ErrorCode::MalformedJson, "job seed must be a non-negative integer");
      }
      seed = spec["seed"].get<std::uint64_t>();
    }
    const std::string category = string_field(spec, "category", "auto");
    if (op == "decompose") {
      decompose_job(config, base / string_field(spec, "source"), out_dir / "archive", category,
                    &warnings);
    } else if (op == "warp") {
      warp_job(config, base / string_field(spec, "source"), base / string_field(spec, "target"),
               category, seed, out_dir, &warnings);
      status["seed"] = seed;
    } else {
      throw Error(ErrorCode::MalformedJson, "unknown job op '" + op + "'");
    }
    status["status"] = "ok";
  } catch (const Error& e) {
    status["status"] = "failed";
    status["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    status["status"] = "failed";
    status["error"] = {{"code", to_string(ErrorCode::IoError)}, {"message", e.what()}};
  }
  status["warnings"] = warnings;
  return status;
}

}  // namespace

int cmd_batch(const Context& ctx, const fs::path& manifest, const fs::path& out_root) {
  const std::vector<Job> jobs = read_jobs(manifest);
  const fs::path base = manifest.parent_path();
  std::vector<json> statuses(jobs.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(ctx.config.jobs, static_cast<int>(jobs.size())));

  auto worker = [&] {
    if (workers > 1) omp_set_num_threads(1);
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const fs::path out_dir = out_root / jobs[i].id;
      statuses[i] = run_job(ctx.config, jobs[i], base, out_dir);
      try {
        io::write_text_atomic(out_dir / "status.json", statuses[i].dump(2) + "\n");
      } catch (const Error& e) {
        statuses[i]["status"] = "failed";
        statuses[i]["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::size_t failed = 0;
  for (const json& s : statuses) {
    for (const json& w : s["warnings"]) {
      json tagged = w;
      tagged["job"] = s["id"];
      emit_diagnostic(ctx.err, tagged);
    }
    if (s["status"] != "ok") {
      ++failed;
      json d = s["error"];
      d["level"] = "error";
      d["job"] = s["id"];
      emit_diagnostic(ctx.err, d);
    }
  }
  ctx.out << jobs.size() << " jobs, " << jobs.size() - failed << " succeeded, " << failed
          << " failed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace patchroute::cli
