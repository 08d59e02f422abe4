// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "commands.hpp"
#include "patchroute/io.hpp"

namespace patchroute::cli {

namespace {

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::string canvas;
  int jobs = 1;
};

struct Positionals {
  std::string a, b, c, d;
  std::string category = "auto";
  std::uint64_t erase_seed = 0;
  std::string features;
  std::string upper, lower, target, script, out;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pose-guided garment patch decomposition, retargeting and editing.", "patchroute"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  auto* opt_config = app.add_option("--config", flags.config_path, "key = value config file");
  auto* opt_seed = app.add_option("--seed", flags.seed, "base RNG seed");
  auto* opt_alpha = app.add_option("--alpha", flags.alpha, "erase probability in [0,1]");
  auto* opt_canvas = app.add_option("--canvas", flags.canvas, "required canvas, WxH");
  auto* opt_jobs = app.add_option("--jobs", flags.jobs, "batch parallelism");

  Positionals p;
  auto* decompose = app.add_subcommand("decompose", "split a person's garment into normalized patches");
  decompose->add_option("person", p.a, "person directory or manifest")->required();
  decompose->add_option("out_archive", p.b, "output archive directory")->required();
  decompose->add_option("--category", p.category, "auto|upper|lower|dress");

  auto* retarget = app.add_subcommand("retarget", "warp an archive onto a target pose");
  retarget->add_option("archive", p.a)->required();
  retarget->add_option("target", p.b, "target person")->required();
  retarget->add_option("out_dir", p.c)->required();
  auto* opt_erase_seed = retarget->add_option("--erase-seed", p.erase_seed, "apply random erasing");

  auto* masks = app.add_subcommand("masks", "compute garment and misalignment masks");
  masks->add_option("g_t", p.a, "warped garment PNG")->required();
  masks->add_option("m_t", p.b, "warped garment mask PNG")->required();
  masks->add_option("parsing", p.c, "parsing PNG with label sidecar")->required();
  masks->add_option("out_dir", p.d)->required();
  masks->add_option("--category", p.category, "auto|upper|lower|dress");
  auto* opt_features = masks->add_option("--features", p.features, "feature map to inpaint");

  auto* edit = app.add_subcommand("edit", "apply an edit script to a try-on bundle");
  auto* opt_upper = edit->add_option("--upper", p.upper, "upper or dress archive");
  auto* opt_lower = edit->add_option("--lower", p.lower, "lower archive");
  edit->add_option("--target", p.target, "target person")->required();
  edit->add_option("--script", p.script, "edit script JSON")->required();
  edit->add_option("--out", p.out, "output directory")->required();

  auto* batch = app.add_subcommand("batch", "run a JSON-lines job manifest");
  batch->add_option("manifest", p.a)->required();
  batch->add_option("out_root", p.b)->required();

  auto* inspect = app.add_subcommand("inspect", "summarize an artifact");
  inspect->add_option("path", p.a)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    emit_diagnostic(err, error_diagnostic(ErrorCode::InvalidArgument, e.what()));
    return 2;
  }

  try {
    RunConfig config;
    if (*opt_config) {
      const auto bytes = io::read_file(flags.config_path);
      apply_config_text(config, std::string(bytes.begin(), bytes.end()));
    }
    if (*opt_seed) config.seed = flags.seed;
    if (*opt_alpha) config.alpha = flags.alpha;
    if (*opt_canvas) config.canvas = parse_canvas(flags.canvas);
    if (*opt_jobs) config.jobs = flags.jobs;
    validate_run_config(config);

    const Context ctx{config, out, err};
    if (*decompose) return cmd_decompose(ctx, p.a, p.b, p.category);
    if (*retarget) {
      std::optional<std::uint64_t> erase_seed;
      if (*opt_erase_seed) erase_seed = p.erase_seed;
      return cmd_retarget(ctx, p.a, p.b, p.c, erase_seed);
    }
    if (*masks) {
      std::optional<fs::path> features;
      if (*opt_features) features = p.features;
      return cmd_masks(ctx, p.a, p.b, p.c, p.d, p.category, features);
    }
    if (*edit) {
      std::optional<fs::path> upper, lower;
      if (*opt_upper) upper = p.upper;
      if (*opt_lower) lower = p.lower;
      return cmd_edit(ctx, upper, lower, p.target, p.script, p.out);
    }
    if (*batch) return cmd_batch(ctx, p.a, p.b);
    if (*inspect) return cmd_inspect(ctx, p.a);
  } catch (const Error& e) {
    emit_diagnostic(err, error_diagnostic(e.code(), e.what()));
    return 2;
  } catch (const std::exception& e) {
    emit_diagnostic(err, error_diagnostic(ErrorCode::IoError, e.what()));
    return 2;
  }
  return 2;
}

}  // namespace patchroute::cli
