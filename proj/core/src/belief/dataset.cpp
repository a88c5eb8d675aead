#include "ploco/belief/dataset.hpp"

#include <algorithm>
#include <numbers>

#include "ploco/commands.hpp"
#include "ploco/error.hpp"
#include "ploco/random.hpp"
#include "ploco/synthwalker.hpp"

namespace ploco::belief {
namespace {

void require(const StoredMatrix& m, Index rows, Index cols, const char* field) {
  if (m.rows() != rows || m.cols() != cols)
    throw ValidationError(field, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void store_relative(const ExteroSample& s, double foot_z, StoredMatrix& out, Index t) {
  for (std::size_t k = 0; k < s.heights.size(); ++k)
    out(static_cast<Index>(k), t) = static_cast<float>(s.heights[k] - foot_z);
}

}  // namespace

void Episode::validate(Index pattern_size) const {
  const Index T = length();
  if (T < 1) throw ValidationError("episode", "empty episode");
  require(proprio, static_cast<Index>(kProprioSize), T, "proprio");
  require(noisy_left, pattern_size, T, "noisy_left");
  require(noisy_right, pattern_size, T, "noisy_right");
  require(clean_left, pattern_size, T, "clean_left");
  require(clean_right, pattern_size, T, "clean_right");
  require(teacher_action, static_cast<Index>(kActionSize), T, "teacher_action");
}

Index Dataset::timesteps() const {
  Index n = 0;
  for (const Episode& e : episodes) n += e.length();
  return n;
}

void DatasetConfig::validate() const {
  if (episodes < 1) throw ValidationError("episodes", "need at least one episode");
  if (episode_length < 1 || episode_length > kMaxEpisodeLength)
    throw ValidationError("episode_length", "must lie in [1, " + std::to_string(kMaxEpisodeLength) + "]");
  if (terrains.empty()) throw ValidationError("terrains", "need at least one terrain mode");
  if (!(c_t_min >= 0.0 && c_t_max <= 1.0 && c_t_min <= c_t_max))
    throw ValidationError("c_t", "range must satisfy 0 <= min <= max <= 1");
  if (grid < 2) throw ValidationError("grid", "must be >= 2");
  if (!(resolution > 0.0)) throw ValidationError("resolution", "must be > 0");
}

Dataset build_dataset(const DatasetConfig& config, const TeacherPolicy& teacher) {
  config.validate();
  const SamplePattern pattern = build_pattern(teacher.config().pattern);
  const auto P = static_cast<Index>(pattern.size());
  const CommandDistribution commands = CommandDistribution::table_default();

  Dataset data;
  data.episodes.reserve(static_cast<std::size_t>(config.episodes));
  for (int k = 0; k < config.episodes; ++k) {
    const std::uint64_t id = config.first_episode + static_cast<std::uint64_t>(k);
    Rng rng(derive_seed(config.seed, {id, 1}));

    const auto mode_index = rng.integer(0, static_cast<std::int64_t>(config.terrains.size()) - 1);
    const TerrainMode mode = config.terrains[static_cast<std::size_t>(mode_index)];
    const double c_t = rng.uniform(config.c_t_min, config.c_t_max);
    const HeightField field = generate(TerrainSpec::random(mode, derive_seed(config.seed, {id, 2})),
                                       GridSize{config.grid, config.grid}, config.resolution, c_t);

    WalkSpec walk;
    walk.command = sample_command(commands, rng);
    walk.resample_step = schedule_resample(config.episode_length, rng);
    walk.resample_command = sample_command(commands, rng);
    walk.start_yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
    walk.duration = config.episode_length;
    walk.seed = derive_seed(config.seed, {id, 3});
    const Trajectory traj = roll_trajectory(walk, field);

    const NoiseProfile noise = NoiseProfile::for_mode(config.noise, derive_seed(config.seed, {id, 4}));
    const std::array<NoiseEpisodeState, 2> noise_state{NoiseEpisodeState::begin(noise, id, Foot::kLeft),
                                                       NoiseEpisodeState::begin(noise, id, Foot::kRight)};

    const auto T = static_cast<Index>(traj.steps.size());
    Episode ep;
    ep.terrain = mode;
    ep.c_t = c_t;
    ep.proprio.resize(static_cast<Index>(kProprioSize), T);
    ep.noisy_left.resize(P, T);
    ep.noisy_right.resize(P, T);
    ep.clean_left.resize(P, T);
    ep.clean_right.resize(P, T);
    ep.teacher_action.resize(static_cast<Index>(kActionSize), T);

    auto teacher_state = teacher.initial_state(1);
    for (Index t = 0; t < T; ++t) {
      const WalkStep& s = traj.steps[static_cast<std::size_t>(t)];
      const auto flat = flatten_proprio(s.proprio);
      Matrix p(static_cast<Index>(kProprioSize), 1);
      for (std::size_t i = 0; i < flat.size(); ++i) {
        p(static_cast<Index>(i), 0) = flat[i];
        ep.proprio(static_cast<Index>(i), t) = static_cast<float>(flat[i]);
      }
      for (Foot foot : kFeet) {
        const auto f = static_cast<std::size_t>(foot);
        const Vec3& fp = s.foot_position[f];
        const ExteroSample clean = sample_clean(field, {fp[0], fp[1]}, s.state.pelvis_yaw, pattern, foot);
        const ExteroSample noisy = apply_noise(clean, field, noise, noise_state[f], s.t);
        store_relative(clean, fp[2], foot == Foot::kLeft ? ep.clean_left : ep.clean_right, t);
        store_relative(noisy, fp[2], foot == Foot::kLeft ? ep.noisy_left : ep.noisy_right, t);
      }
      const Matrix action = teacher.step(p, ep.clean_left.col(t).cast<double>(), ep.clean_right.col(t).cast<double>(),
                                         teacher_state);
      ep.teacher_action.col(t) = action.col(0).cast<float>();
    }
    data.episodes.push_back(std::move(ep));
  }
  return data;
}

double SequenceBatch::valid_steps() const {
  double n = 0.0;
  for (const Matrix& m : mask) n += m.sum();
  return n;
}

SequenceBatch make_batch(const Dataset& data, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw ValidationError("batch", "no episodes selected");
  Index T = 0;
  for (std::size_t i : indices) {
    if (i >= data.episodes.size()) throw ValidationError("batch", "episode index out of range");
    T = std::max(T, data.episodes[i].length());
  }
  const auto B = static_cast<Index>(indices.size());
  const Episode& first = data.episodes[indices.front()];
  const Index P = first.clean_left.rows();

  SequenceBatch batch;
  batch.proprio.assign(T, Matrix::Zero(static_cast<Index>(kProprioSize), B));
  batch.noisy_left.assign(T, Matrix::Zero(P, B));
  batch.noisy_right.assign(T, Matrix::Zero(P, B));
  batch.clean.assign(T, Matrix::Zero(2 * P, B));
  batch.action.assign(T, Matrix::Zero(static_cast<Index>(kActionSize), B));
  batch.mask.assign(T, Matrix::Zero(1, B));
  for (Index b = 0; b < B; ++b) {
    const Episode& e = data.episodes[indices[static_cast<std::size_t>(b)]];
    if (e.clean_left.rows() != P) throw ValidationError("batch", "episodes disagree on pattern size");
    for (Index t = 0; t < e.length(); ++t) {
      batch.proprio[t].col(b) = e.proprio.col(t).cast<double>();
      batch.noisy_left[t].col(b) = e.noisy_left.col(t).cast<double>();
      batch.noisy_right[t].col(b) = e.noisy_right.col(t).cast<double>();
      batch.clean[t].col(b).head(P) = e.clean_left.col(t).cast<double>();
      batch.clean[t].col(b).tail(P) = e.clean_right.col(t).cast<double>();
      batch.action[t].col(b) = e.teacher_action.col(t).cast<double>();
      batch.mask[t](0, b) = 1.0;
    }
  }
  return batch;
}

}  // namespace ploco::belief
