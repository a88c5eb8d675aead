#include "ploco/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "artifacts.hpp"
#include "ploco/error.hpp"
#include "subcommands.hpp"

namespace ploco::cli {
namespace {

std::string json_scalar_to_arg(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Fills options not given on the command line from the config file section
/// named after the subcommand. Keys are the long flag names without dashes.
void apply_config(CLI::App& sub, const std::string& config_path) {
  if (config_path.empty()) return;
  const nlohmann::json doc = read_json_file(config_path);
  if (!doc.is_object()) throw FormatError(config_path + ": expected a JSON object");
  if (!doc.contains(sub.get_name())) return;
  const nlohmann::json& section = doc.at(sub.get_name());
  if (!section.is_object()) throw FormatError(config_path + ": section '" + sub.get_name() + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw ValidationError(key, "unknown key in config section '" + sub.get_name() + "'");
    }
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(json_scalar_to_arg(item));
    } else {
      opt->add_result(json_scalar_to_arg(value));
    }
    opt->run_callback();
  }
}

void require_out(const std::string& out) {
  if (out.empty()) throw ValidationError("out", "an output path is required (--out)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural terrain, gait rewards and belief-encoder distillation toolkit", "ploco"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config with one section per subcommand; flags override it");

  TerrainOptions terrain;
  auto* t = app.add_subcommand("terrain", "Generate a heightfield and write PGM + JSON");
  t->add_option("--mode", terrain.mode, "hills|edges|squares|quantized_hills|stairs|flat")->capture_default_str();
  t->add_option("--seed", terrain.seed)->capture_default_str();
  t->add_option("--ct", terrain.ct, "terrain curriculum factor in [0, 1]")->capture_default_str();
  t->add_option("--size", terrain.size, "raster side in cells")->capture_default_str();
  t->add_option("--res", terrain.res, "cell size in meters")->capture_default_str();
  t->add_option("--out", terrain.out, "output path stem");

  TraceOptions trace;
  auto* r = app.add_subcommand("trace", "Roll a synthetic walk and write reward and exteroception traces");
  r->add_option("--terrain-file", trace.terrain_file, ".pgm or .json heightfield");
  r->add_option("--command", trace.command, "v_x,v_y,omega_z")->capture_default_str();
  r->add_option("--steps", trace.steps)->capture_default_str();
  r->add_option("--noise-mode", trace.noise_mode, "nominal|offset|noisy")->capture_default_str();
  r->add_option("--pattern", trace.pattern, "full (318 points) or desk (66 points)")->capture_default_str();
  r->add_option("--seed", trace.seed)->capture_default_str();
  r->add_option("--ct", trace.ct)->capture_default_str();
  r->add_option("--cr", trace.cr, "reward curriculum factor")->capture_default_str();
  r->add_option("--out", trace.out, "output path stem");

  TrainOptions denoise;
  denoise.kind = "train-denoiser";
  denoise.episodes = 667;
  denoise.noise_mode = "offset";
  TrainOptions distill;
  distill.kind = "distill";
  distill.episodes = 48;
  distill.noise_mode = "nominal";
  auto add_train = [&](TrainOptions& o, const char* help) {
    auto* s = app.add_subcommand(o.kind, help);
    s->add_option("--profile", o.profile, "desk|paper")->capture_default_str();
    s->add_option("--episodes", o.episodes, "training episodes")->capture_default_str();
    s->add_option("--heldout-episodes", o.heldout_episodes)->capture_default_str();
    s->add_option("--episode-length", o.episode_length)->capture_default_str();
    s->add_option("--epochs", o.epochs)->capture_default_str();
    s->add_option("--seed", o.seed)->capture_default_str();
    s->add_option("--noise-mode", o.noise_mode)->capture_default_str();
    s->add_option("--lr", o.lr)->capture_default_str();
    s->add_option("--batch", o.batch, "sequences per batch")->capture_default_str();
    s->add_option("--w-im", o.w_im, "imitation loss weight")->capture_default_str();
    s->add_option("--w-rec", o.w_rec, "reconstruction loss weight")->capture_default_str();
    s->add_option("--grad-clip", o.grad_clip, "global gradient norm clip, 0 = off")->capture_default_str();
    s->add_flag("--freeze-teacher-encoder", o.freeze_teacher_encoder, "reuse the teacher's encoder, frozen");
    s->add_flag("--deterministic", o.deterministic, "pin every seed to --seed (always the case)");
    s->add_option("--out", o.out, "output directory");
    return s;
  };
  auto* dn = add_train(denoise, "Train the student belief encoder/decoder on noisy exteroception");
  auto* ds = add_train(distill, "Distill a frozen synthetic teacher into the student");

  ReportOptions report;
  auto* rp = app.add_subcommand("report", "Plot training metrics and check acceptance thresholds");
  rp->add_option("--metrics", report.metrics, "run directories or metrics.csv files")->expected(1, -1);
  rp->add_option("--out", report.out, "output directory");

  ClocksOptions clocks;
  auto* ck = app.add_subcommand("clocks", "Tabulate the gait clocks over one period");
  ck->add_option("--samples", clocks.samples)->capture_default_str();
  ck->add_option("--stance", clocks.stance, "stance fraction")->capture_default_str();
  ck->add_option("--smoothing", clocks.smoothing)->capture_default_str();
  ck->add_option("--out", clocks.out, "CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) apply_config(*sub, config_path);
    if (*t) {
      require_out(terrain.out);
      return run_terrain(terrain, out);
    }
    if (*r) {
      require_out(trace.out);
      if (trace.terrain_file.empty()) throw ValidationError("terrain-file", "a heightfield is required");
      return run_trace(trace, out);
    }
    if (*dn) {
      require_out(denoise.out);
      return run_train(denoise, out);
    }
    if (*ds) {
      require_out(distill.out);
      return run_train(distill, out);
    }
    if (*rp) {
      require_out(report.out);
      if (report.metrics.empty()) throw ValidationError("metrics", "at least one run is required");
      return run_report(report, out);
    }
    if (*ck) {
      require_out(clocks.out);
      return run_clocks(clocks, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ploco::cli
