#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "artifacts.hpp"
#include "ploco/belief/training.hpp"
#include "ploco/error.hpp"
#include "ploco/nn/checkpoint.hpp"
#include "ploco/random.hpp"
#include "subcommands.hpp"

namespace ploco::cli {
namespace {

namespace fs = std::filesystem;
using namespace ploco::belief;

constexpr std::uint64_t kHeldoutFirstEpisode = 1ULL << 32;

nlohmann::json gate_entry(const EvalMetrics& m) {
  return {{"mean_gate", m.mean_gate},
          {"reconstruction_mse", m.reconstruction_mse},
          {"noisy_baseline_mse", m.noisy_baseline_mse},
          {"imitation_mse", m.imitation_mse}};
}

}  // namespace

nlohmann::json to_config(const TrainOptions& o) {
  return {{"kind", o.kind},
          {"profile", o.profile},
          {"episodes", o.episodes},
          {"heldout-episodes", o.heldout_episodes},
          {"episode-length", o.episode_length},
          {"epochs", o.epochs},
          {"seed", o.seed},
          {"noise-mode", o.noise_mode},
          {"lr", o.lr},
          {"batch", o.batch},
          {"w-im", o.w_im},
          {"w-rec", o.w_rec},
          {"grad-clip", o.grad_clip},
          {"freeze-teacher-encoder", o.freeze_teacher_encoder}};
}

int run_train(const TrainOptions& o, std::ostream& out) {
  if (o.episodes < o.batch)
    throw ValidationError("episodes", "need at least one full batch of " + std::to_string(o.batch) +
                                          " episodes, got " + std::to_string(o.episodes));
  if (o.heldout_episodes < 1) throw ValidationError("heldout-episodes", "need at least one held-out episode");

  const ArchitectureConfig arch = ArchitectureConfig::by_name(o.profile);
  StudentTrainConfig train_config;
  train_config.learning_rate = o.lr;
  train_config.batch_size = o.batch;
  train_config.epochs = o.epochs;
  train_config.max_episode_length = o.episode_length;
  train_config.imitation_weight = o.w_im;
  train_config.reconstruction_weight = o.w_rec;
  train_config.gradient_clip = o.grad_clip;
  train_config.freeze_teacher_encoder = o.freeze_teacher_encoder;
  train_config.seed = derive_seed(o.seed, {0x7A1ULL});
  train_config.validate();

  const TeacherPolicy teacher = make_synthetic_teacher(derive_seed(o.seed, {0x7EAULL}), arch);
  DatasetConfig data_config;
  data_config.episodes = o.episodes;
  data_config.episode_length = o.episode_length;
  data_config.noise = noise_mode_from_string(o.noise_mode);
  data_config.seed = derive_seed(o.seed, {0xDA7AULL});
  DatasetConfig heldout_config = data_config;
  heldout_config.episodes = o.heldout_episodes;
  heldout_config.first_episode = kHeldoutFirstEpisode;

  const Dataset train = build_dataset(data_config, teacher);
  const Dataset heldout = build_dataset(heldout_config, teacher);
  out << o.kind << ": profile=" << arch.name << " train_steps=" << train.timesteps()
      << " heldout_steps=" << heldout.timesteps() << " noise=" << o.noise_mode << "\n";

  StudentPolicy student(arch);
  Rng init_rng(derive_seed(o.seed, {0x57DULL}));
  student.initialize(init_rng);

  out << std::setprecision(6);
  const TrainResult result = train_student(student, train, heldout, train_config, &teacher, [&](const EpochMetrics& m) {
    out << "epoch " << m.epoch << " train=" << m.train_loss << " heldout=" << m.heldout.loss
        << " imitation=" << m.heldout.imitation_mse << " reconstruction=" << m.heldout.reconstruction_mse
        << " noisy_baseline=" << m.heldout.noisy_baseline_mse << " gate=" << m.heldout.mean_gate << "\n";
  });

  // Matched held-out sequences: same terrains, walks and teacher labels; only the noise profile differs.
  StudentPolicy best = result.best;
  const LossWeights weights{o.w_im, o.w_rec};
  nlohmann::json by_noise = nlohmann::json::object();
  for (NoiseMode mode : {NoiseMode::kNominal, NoiseMode::kOffset, NoiseMode::kNoisy}) {
    DatasetConfig c = heldout_config;
    c.noise = mode;
    by_noise[std::string(to_string(mode))] = gate_entry(evaluate(best, build_dataset(c, teacher), weights));
  }

  const fs::path dir(o.out);
  fs::create_directories(dir);
  const fs::path ckpt = dir / "student.ckpt";
  const fs::path ckpt_manifest = dir / "student.ckpt.json";
  const fs::path metrics = dir / "metrics.csv";
  const fs::path run = dir / "run.json";

  const EvalMetrics best_metrics =
      result.best_epoch == 0 ? result.initial : result.history[static_cast<std::size_t>(result.best_epoch - 1)].heldout;
  nn::save_checkpoint(ckpt, best.all_parameters(),
                      {{"architecture", arch}, {"best_epoch", result.best_epoch}, {"heldout", best_metrics}});
  std::ostringstream csv;
  write_metrics_csv(csv, result.history);
  write_text(metrics, csv.str());
  write_json(run, {{"kind", o.kind},
                   {"profile", arch.name},
                   {"config", to_config(o)},
                   {"train_timesteps", train.timesteps()},
                   {"heldout_timesteps", heldout.timesteps()},
                   {"epochs", o.epochs},
                   {"initial", result.initial},
                   {"best_epoch", result.best_epoch},
                   {"best", best_metrics},
                   {"final", result.history.back().heldout},
                   {"gate_by_noise", by_noise}});
  write_manifest(dir / "manifest.json", o.kind, to_config(o), o.seed, {ckpt, ckpt_manifest, metrics, run});

  out << "best_epoch=" << result.best_epoch << " reconstruction=" << best_metrics.reconstruction_mse
      << " noisy_baseline=" << best_metrics.noisy_baseline_mse << " imitation=" << best_metrics.imitation_mse
      << " (initial " << result.initial.imitation_mse << ")\n";
  for (const auto& [mode, entry] : by_noise.items()) out << "gate[" << mode << "]=" << entry["mean_gate"] << "\n";
  out << "wrote " << dir.string() << "\n";
  return 0;
}

}  // namespace ploco::cli
