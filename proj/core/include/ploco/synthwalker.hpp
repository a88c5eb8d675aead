#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ploco/gait.hpp"
#include "ploco/state.hpp"
#include "ploco/terrain.hpp"

namespace ploco {

inline constexpr std::int64_t kMaxEpisodeLength = 300;

struct WalkSpec {
  VelocityCommand command;
  /// Optional mid-episode command change.
  std::optional<std::int64_t> resample_step;
  VelocityCommand resample_command;

  std::int64_t gait_period = kDefaultGaitPeriod;
  ClockShape clock;
  double swing_clearance = 0.15;   // swing apex above the terrain, m
  double hip_half_width = 0.12;    // lateral foot offset from the pelvis centerline, m
  double pelvis_height = 0.9;      // pelvis above the mean stance-foot height, m
  double force_nominal = 0.5;      // normalized stance force
  double force_jitter = 0.05;
  double velocity_norm = 2.0;      // m/s mapped to normalized velocity 1
  Vec2 start_xy{};
  double start_yaw = 0.0;
  std::int64_t duration = kMaxEpisodeLength;
  std::uint64_t seed = 0;

  void validate() const;
};

struct WalkStep {
  std::int64_t t = 0;
  double phi = 0.0;
  RobotState state;
  ProprioObservation proprio;
  VelocityCommand command;
  GaitClocks clocks;
  std::array<bool, 2> in_stance{};
  std::array<Vec3, 2> foot_position{};  // world xyz
  Vec3 pelvis_position{};
};

struct Trajectory {
  std::vector<WalkStep> steps;
  /// Set when the pelvis left the heightfield extent and the roll stopped early.
  bool truncated = false;
};

/// Kinematic gait rollout over `field`. Feet follow the discrete contact
/// schedule implied by the gait clocks: stance feet stay pinned to the
/// terrain; swing feet travel on a half-sine arc to the next foothold.
Trajectory roll_trajectory(const WalkSpec& spec, const HeightField& field);

/// Discrete contact rule shared with the clocks: a foot is in stance while its
/// phase lies in [0, stance_fraction).
bool foot_in_stance(double phi, Foot foot, const ClockShape& shape);

}  // namespace ploco
