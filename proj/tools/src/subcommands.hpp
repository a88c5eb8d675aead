#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ploco::cli {

struct TerrainOptions {
  std::string mode = "hills";
  std::uint64_t seed = 0;
  double ct = 1.0;
  int size = 400;
  double res = 0.05;
  std::string out;
};

struct TraceOptions {
  std::string terrain_file;
  std::string command = "0,0,0";
  std::int64_t steps = 300;
  std::string noise_mode = "nominal";
  std::string pattern = "full";
  std::uint64_t seed = 0;
  double ct = 1.0;
  double cr = 1.0;
  std::string out;
};

struct TrainOptions {
  std::string kind;  // "train-denoiser" or "distill"
  std::string profile = "desk";
  int episodes = 0;
  int heldout_episodes = 24;
  std::int64_t episode_length = 300;
  int epochs = 100;
  std::uint64_t seed = 0;
  std::string noise_mode;
  double lr = 1e-3;
  int batch = 12;
  double w_im = 1.0;
  double w_rec = 0.5;
  double grad_clip = 0.0;
  bool freeze_teacher_encoder = false;
  bool deterministic = false;
  std::string out;
};

struct ReportOptions {
  std::vector<std::string> metrics;
  std::string out;
};

struct ClocksOptions {
  int samples = 1000;
  double stance = 0.55;
  double smoothing = 0.03;
  std::string out;
};

nlohmann::json to_config(const TerrainOptions& o);
nlohmann::json to_config(const TraceOptions& o);
nlohmann::json to_config(const TrainOptions& o);
nlohmann::json to_config(const ClocksOptions& o);

int run_terrain(const TerrainOptions& o, std::ostream& out);
int run_trace(const TraceOptions& o, std::ostream& out);
int run_train(const TrainOptions& o, std::ostream& out);
int run_report(const ReportOptions& o, std::ostream& out);
int run_clocks(const ClocksOptions& o, std::ostream& out);

}  // namespace ploco::cli
