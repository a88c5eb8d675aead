#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ploco/extero.hpp"
#include "ploco/nn/layers.hpp"

namespace ploco::belief {

using nn::Index;
using nn::Matrix;

/// Layer sizes of the teacher/student networks.
struct ArchitectureConfig {
  std::string name = "desk";
  RingLayout pattern = RingLayout::desk();
  std::vector<Index> encoder_widths{32, 24, 16};
  Index belief_hidden = 48;
  Index belief_size = 24;
  Index decoder_hidden = 64;
  /// When set, the decoder also sees the gated exteroceptive latent.
  bool decoder_uses_gated_latent = false;
  Index trunk_hidden = 32;
  int trunk_layers = 2;

  /// 66-point pattern and narrow layers; trains on one CPU core.
  static ArchitectureConfig desk();
  /// 318-point pattern; encoder {256, 160, 96}; belief 192; trunk 2 x 256.
  static ArchitectureConfig paper();
  static ArchitectureConfig by_name(std::string_view name);

  Index pattern_size() const { return static_cast<Index>(pattern.total()); }
  Index foot_latent_size() const { return encoder_widths.back(); }
  Index latent_size() const { return 2 * foot_latent_size(); }
  Index reconstruction_size() const { return 2 * pattern_size(); }

  void validate() const;
};

struct StudentTrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 12;
  int epochs = 100;
  std::int64_t max_episode_length = 300;
  double imitation_weight = 1.0;
  double reconstruction_weight = 0.5;
  /// Global gradient-norm clip; 0 disables clipping.
  double gradient_clip = 0.0;
  /// Copy the teacher's encoder into the student and keep it frozen.
  bool freeze_teacher_encoder = false;
  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const ArchitectureConfig& c);
void from_json(const nlohmann::json& j, ArchitectureConfig& c);
void to_json(nlohmann::json& j, const StudentTrainConfig& c);
void from_json(const nlohmann::json& j, StudentTrainConfig& c);

/// Fixed per-slot input scaling applied to the 44-vector before it enters a
/// network: velocities are shrunk and the pelvis height is centered on the
/// nominal standing height.
Matrix scale_proprio(const Matrix& proprio);

}  // namespace ploco::belief
