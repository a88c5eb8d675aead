#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ploco/belief/networks.hpp"
#include "ploco/extero.hpp"
#include "ploco/terrain.hpp"

namespace ploco::belief {

using StoredMatrix = Eigen::MatrixXf;

/// One synthetic episode, one column per timestep. Exteroceptive values are
/// heights relative to the sampling foot's own z.
struct Episode {
  StoredMatrix proprio;         // 44 x T
  StoredMatrix noisy_left;      // P x T
  StoredMatrix noisy_right;
  StoredMatrix clean_left;
  StoredMatrix clean_right;
  StoredMatrix teacher_action;  // 10 x T
  TerrainMode terrain = TerrainMode::kFlat;
  double c_t = 0.0;

  Index length() const { return proprio.cols(); }
  void validate(Index pattern_size) const;
};

struct Dataset {
  std::vector<Episode> episodes;

  Index timesteps() const;
  bool empty() const { return episodes.empty(); }
};

struct DatasetConfig {
  int episodes = 64;
  std::int64_t episode_length = 300;
  NoiseMode noise = NoiseMode::kNominal;
  std::vector<TerrainMode> terrains{TerrainMode::kHills, TerrainMode::kEdges, TerrainMode::kSquares,
                                    TerrainMode::kQuantizedHills, TerrainMode::kStairs};
  double c_t_min = 0.0;
  double c_t_max = 1.0;
  Index grid = 400;
  double resolution = 0.05;
  std::uint64_t seed = 0;
  /// Episode ids start here, so a held-out set can share the seed but not the draws.
  std::uint64_t first_episode = 0;

  void validate() const;
};

/// Rolls synthetic walks over random terrains, samples clean and noisy
/// exteroception for both feet, and labels every step with the teacher's
/// action computed from the clean samples.
Dataset build_dataset(const DatasetConfig& config, const TeacherPolicy& teacher);

/// Column-batched view of several episodes, zero-padded to the longest one.
struct SequenceBatch {
  std::vector<Matrix> proprio;
  std::vector<Matrix> noisy_left, noisy_right;
  std::vector<Matrix> clean;    // 2P x B, [left; right]
  std::vector<Matrix> action;   // 10 x B
  std::vector<Matrix> mask;     // 1 x B, 1 for valid steps

  Index length() const { return static_cast<Index>(proprio.size()); }
  Index batch() const { return proprio.empty() ? 0 : proprio.front().cols(); }
  double valid_steps() const;
};

SequenceBatch make_batch(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace ploco::belief
