#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "artifacts.hpp"
#include "ploco/error.hpp"
#include "ploco/extero.hpp"
#include "ploco/gait.hpp"
#include "ploco/rewards.hpp"
#include "ploco/synthwalker.hpp"
#include "ploco/terrain.hpp"
#include "subcommands.hpp"

namespace ploco::cli {
namespace {

namespace fs = std::filesystem;

fs::path stem_path(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  if (p.extension() == ".pgm" || p.extension() == ".json" || p.extension() == ".csv") p.replace_extension();
  return fs::path(p.string() + suffix);
}

VelocityCommand parse_command(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ValidationError("command", "expected v_x,v_y,omega_z, got '" + text + "'");
    }
  }
  if (v.size() != 3) throw ValidationError("command", "expected three comma-separated values");
  for (double x : v) {
    if (!std::isfinite(x) || std::abs(x) > 1.0) throw ValidationError("command", "components must lie in [-1, 1]");
  }
  return {{v[0], v[1]}, v[2]};
}

/// Plateau changes along the first raster row, in +x order.
std::vector<double> plateau_deltas(const HeightField& f) {
  std::vector<double> deltas;
  for (Eigen::Index c = 1; c < f.heights.cols(); ++c) {
    const double d = f.heights(0, c) - f.heights(0, c - 1);
    if (d != 0.0) deltas.push_back(d);
  }
  return deltas;
}

}  // namespace

nlohmann::json to_config(const TerrainOptions& o) {
  return {{"mode", o.mode}, {"seed", o.seed}, {"ct", o.ct}, {"size", o.size}, {"res", o.res}};
}

nlohmann::json to_config(const TraceOptions& o) {
  return {{"terrain-file", o.terrain_file}, {"command", o.command}, {"steps", o.steps},
          {"noise-mode", o.noise_mode},     {"pattern", o.pattern}, {"seed", o.seed},
          {"ct", o.ct},                     {"cr", o.cr}};
}

nlohmann::json to_config(const ClocksOptions& o) {
  return {{"samples", o.samples}, {"stance", o.stance}, {"smoothing", o.smoothing}};
}

int run_terrain(const TerrainOptions& o, std::ostream& out) {
  if (o.size < 2) throw ValidationError("size", "must be >= 2");
  if (!(o.ct >= 0.0 && o.ct <= 1.0)) throw ValidationError("ct", "must lie in [0, 1]");
  const TerrainMode mode = terrain_mode_from_string(o.mode);
  const TerrainSpec spec = TerrainSpec::random(mode, o.seed);
  const HeightField field = generate(spec, GridSize{o.size, o.size}, o.res, o.ct);

  const fs::path pgm = stem_path(o.out, ".pgm");
  const fs::path json = stem_path(o.out, ".json");
  if (pgm.has_parent_path()) fs::create_directories(pgm.parent_path());
  save_heightfield(field, pgm);
  save_heightfield(field, json);

  std::set<double> levels(field.heights.data(), field.heights.data() + field.heights.size());
  nlohmann::json stats{{"min", field.heights.minCoeff()},
                       {"max", field.heights.maxCoeff()},
                       {"distinct_levels", levels.size()}};
  out << std::setprecision(6) << "mode=" << to_string(mode) << " size=" << o.size << "x" << o.size
      << " res=" << o.res << " ct=" << o.ct << "\n"
      << "min=" << field.heights.minCoeff() << " max=" << field.heights.maxCoeff()
      << " distinct_levels=" << levels.size() << "\n";
  if (mode == TerrainMode::kStairs) {
    const std::vector<double> deltas = plateau_deltas(field);
    std::size_t ascending = 0;
    while (ascending < deltas.size() && deltas[ascending] > 0.0) ++ascending;
    const double rise = spec.stairs.rise * o.ct;
    std::size_t matching = 0;
    for (std::size_t k = 0; k < ascending; ++k) matching += std::abs(deltas[k] - rise) < 1e-9 ? 1 : 0;
    stats["plateau_deltas_first_flight"] = ascending;
    stats["plateau_deltas_equal_to_rise"] = matching;
    stats["rise"] = rise;
    stats["run"] = spec.stairs.run;
    out << "plateau_deltas=" << ascending << " equal_to_rise=" << matching << " rise=" << rise
        << " run=" << spec.stairs.run << "\n";
  }
  write_manifest(stem_path(o.out, ".manifest.json"), "terrain", to_config(o), o.seed, {pgm, json},
                 {{"stats", stats}});
  out << "wrote " << pgm.string() << " and " << json.string() << "\n";
  return 0;
}

int run_trace(const TraceOptions& o, std::ostream& out) {
  if (!fs::exists(o.terrain_file)) throw FormatError("terrain file not found: " + o.terrain_file);
  const HeightField field = load_heightfield(o.terrain_file);
  CurriculumState curriculum;
  curriculum.c_t = o.ct;
  curriculum.c_r = o.cr;
  curriculum.validate();

  WalkSpec walk;
  walk.command = parse_command(o.command);
  walk.duration = o.steps;
  walk.seed = o.seed;
  walk.start_xy = {0.5 * (field.min_x() + field.max_x()), 0.5 * (field.min_y() + field.max_y())};
  walk.validate();
  const Trajectory traj = roll_trajectory(walk, field);

  if (o.pattern != "full" && o.pattern != "desk") throw ValidationError("pattern", "expected full or desk");
  const SamplePattern pattern = build_pattern(o.pattern == "full" ? RingLayout::full() : RingLayout::desk());
  const NoiseProfile noise = NoiseProfile::for_mode(noise_mode_from_string(o.noise_mode), o.seed);
  const std::array<NoiseEpisodeState, 2> noise_state{NoiseEpisodeState::begin(noise, 0, Foot::kLeft),
                                                     NoiseEpisodeState::begin(noise, 0, Foot::kRight)};

  const fs::path csv_path = stem_path(o.out, ".csv");
  const fs::path jsonl_path = stem_path(o.out, ".jsonl");
  std::ostringstream csv;
  std::ostringstream jsonl;
  write_reward_csv_header(csv);
  JsonLineWriter lines(jsonl);

  ActionVector previous;
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    const WalkStep& s = traj.steps[k];
    ActionVector action;
    action.pd_targets = s.proprio.motor_positions;
    if (k == 0) previous = action;
    const RewardBreakdown b = total_reward(s.state, s.command, s.clocks, action, previous, curriculum);
    write_reward_csv_row(csv, static_cast<long>(s.t), b);
    previous = action;

    nlohmann::json extero = nlohmann::json::object();
    for (Foot foot : kFeet) {
      const auto f = static_cast<std::size_t>(foot);
      const Vec3& fp = s.foot_position[f];
      const ExteroSample clean = sample_clean(field, {fp[0], fp[1]}, s.state.pelvis_yaw, pattern, foot);
      const ExteroSample noisy = apply_noise(clean, field, noise, noise_state[f], s.t);
      extero[to_string(foot)] = {{"clean", clean.heights}, {"noisy", noisy.heights}};
    }
    nlohmann::json reward = nlohmann::json::object();
    const auto values = b.values();
    for (std::size_t c = 0; c < values.size(); ++c) reward[std::string(RewardBreakdown::kColumns[c])] = values[c];
    lines.write({{"t", s.t},
                 {"phi", s.phi},
                 {"command", s.command},
                 {"state", s.state},
                 {"proprio", s.proprio},
                 {"action", action},
                 {"clocks", {{"force", s.clocks.force}, {"velocity", s.clocks.velocity}}},
                 {"in_stance", s.in_stance},
                 {"foot_position", s.foot_position},
                 {"pelvis_position", s.pelvis_position},
                 {"extero", extero},
                 {"reward", reward}});
  }
  write_text(csv_path, csv.str());
  write_text(jsonl_path, jsonl.str());
  write_manifest(stem_path(o.out, ".manifest.json"), "trace", to_config(o), o.seed, {csv_path, jsonl_path},
                 {{"steps_written", traj.steps.size()}, {"truncated", traj.truncated}, {"c_r", o.cr}, {"c_t", o.ct}});
  out << "steps=" << traj.steps.size() << (traj.truncated ? " (truncated: left the heightfield)" : "") << "\n"
      << "wrote " << csv_path.string() << " and " << jsonl_path.string() << "\n";
  return 0;
}

int run_clocks(const ClocksOptions& o, std::ostream& out) {
  if (o.samples < 2) throw ValidationError("samples", "must be >= 2");
  ClockShape shape;
  shape.stance_fraction = o.stance;
  shape.smoothing = o.smoothing;
  shape.validate();
  std::ostringstream csv;
  write_clock_csv(csv, shape, o.samples);
  const fs::path path = stem_path(o.out, ".csv");
  write_text(path, csv.str());
  write_manifest(stem_path(o.out, ".manifest.json"), "clocks", to_config(o), 0, {path});
  out << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace ploco::cli
