#include "ploco/synthwalker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ploco/error.hpp"
#include "ploco/random.hpp"

namespace ploco {
namespace {

constexpr double kDt = 1.0 / kControlRate;
constexpr double kPi = std::numbers::pi;
constexpr double kLinkLength = 0.5;  // thigh and shin of the kinematic proxy

struct PelvisPose {
  Vec2 xy{};
  double yaw = 0.0;
};

PelvisPose integrate(PelvisPose pose, const VelocityCommand& cmd, std::int64_t steps) {
  for (std::int64_t i = 0; i < steps; ++i) {
    const double c = std::cos(pose.yaw);
    const double s = std::sin(pose.yaw);
    pose.xy[0] += (c * cmd.linear[0] - s * cmd.linear[1]) * kDt;
    pose.xy[1] += (s * cmd.linear[0] + c * cmd.linear[1]) * kDt;
    pose.yaw += cmd.yaw_rate * kDt;
  }
  return pose;
}

Vec2 hip_anchor(const PelvisPose& pose, Foot foot, double half_width) {
  const double side = foot == Foot::kLeft ? half_width : -half_width;
  return {pose.xy[0] - std::sin(pose.yaw) * side, pose.xy[1] + std::cos(pose.yaw) * side};
}

Vec3 normalized(Vec3 v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

Quaternion quaternion_from_euler(double roll, double pitch, double yaw) {
  const double cr = std::cos(0.5 * roll), sr = std::sin(0.5 * roll);
  const double cp = std::cos(0.5 * pitch), sp = std::sin(0.5 * pitch);
  const double cy = std::cos(0.5 * yaw), sy = std::sin(0.5 * yaw);
  Quaternion q{cr * cp * cy + sr * sp * sy, sr * cp * cy - cr * sp * sy, cr * sp * cy + sr * cp * sy,
               cr * cp * sy - sr * sp * cy};
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& v : q) v /= n;
  return q;
}

struct FootTrack {
  Vec3 position{};
  Vec3 swing_start{};
  Vec2 swing_target{};
  std::int64_t swing_begin = 0;
  bool was_stance = true;
};

/// Five motor angles of one leg: hip roll, hip yaw, hip pitch, knee, foot.
std::array<double, 5> leg_angles(const Vec3& foot, const Vec3& pelvis, double yaw, Foot which,
                                 double half_width, double foot_pitch) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double wx = foot[0] - pelvis[0];
  const double wy = foot[1] - pelvis[1];
  const double dx = c * wx + s * wy;
  const double dy = -s * wx + c * wy - (which == Foot::kLeft ? half_width : -half_width);
  const double dz = foot[2] - pelvis[2];
  const double length = std::sqrt(dx * dx + dy * dy + dz * dz);
  const double knee = 2.0 * std::acos(std::min(length / (2.0 * kLinkLength), 1.0));
  const double hip_roll = std::atan2(dy, -dz);
  const double hip_pitch = std::atan2(dx, -dz) - 0.5 * knee;
  return {hip_roll, 0.0, hip_pitch, knee, foot_pitch - hip_pitch - knee};
}

}  // namespace

void WalkSpec::validate() const {
  if (duration < 1 || duration > kMaxEpisodeLength)
    throw ValidationError("duration", "must lie in [1, " + std::to_string(kMaxEpisodeLength) + "]");
  if (gait_period < 2) throw ValidationError("gait_period", "must be >= 2");
  clock.validate();
  if (!(velocity_norm > 0.0)) throw ValidationError("velocity_norm", "must be > 0");
  if (!(force_nominal >= 0.0 && force_nominal <= 1.0)) throw ValidationError("force_nominal", "outside [0, 1]");
  if (!(swing_clearance >= 0.0)) throw ValidationError("swing_clearance", "must be >= 0");
  if (resample_step && (*resample_step < 1 || *resample_step >= duration))
    throw ValidationError("resample_step", "must lie in [1, duration - 1]");
}

bool foot_in_stance(double phi, Foot foot, const ClockShape& shape) {
  double p = std::fmod(phi + (foot == Foot::kRight ? 0.5 : 0.0), 1.0);
  if (p < 0.0) p += 1.0;
  return p < shape.stance_fraction;
}

Trajectory roll_trajectory(const WalkSpec& spec, const HeightField& field) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, {0x5A11CE7ULL}));
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(spec.duration));

  // Swing duration per foot, from the discrete schedule over one period.
  std::array<std::int64_t, 2> swing_steps{};
  std::array<std::int64_t, 2> stance_steps{};
  for (Foot f : kFeet) {
    for (std::int64_t k = 0; k < spec.gait_period; ++k) {
      const double phi = GaitPhase{k, spec.gait_period}.phi();
      (foot_in_stance(phi, f, spec.clock) ? stance_steps : swing_steps)[static_cast<int>(f)]++;
    }
  }

  PelvisPose pose{spec.start_xy, spec.start_yaw};
  std::array<FootTrack, 2> feet;
  for (Foot f : kFeet) {
    const Vec2 xy = hip_anchor(pose, f, spec.hip_half_width);
    feet[static_cast<int>(f)].position = {xy[0], xy[1], height_at(field, xy[0], xy[1])};
  }

  std::optional<WalkStep> previous;
  for (std::int64_t t = 0; t < spec.duration; ++t) {
    if (!field.contains(pose.xy[0], pose.xy[1])) {
      traj.truncated = true;
      break;
    }
    const VelocityCommand cmd =
        spec.resample_step && t >= *spec.resample_step ? spec.resample_command : spec.command;

    WalkStep step;
    step.t = t;
    step.command = cmd;
    step.phi = GaitPhase{t, spec.gait_period}.phi();
    step.clocks = gait_clocks(step.phi, spec.clock);
    RobotState& s = step.state;

    std::array<double, 2> foot_pitch{};
    for (Foot f : kFeet) {
      const int i = static_cast<int>(f);
      FootTrack& track = feet[i];
      const bool stance = foot_in_stance(step.phi, f, spec.clock);
      step.in_stance[i] = stance;
      const double L = static_cast<double>(swing_steps[i]);
      if (stance) {
        if (!track.was_stance) {
          s.first_contact[i] = true;
          s.air_time[i] = L * kDt;
        }
        track.was_stance = true;
        s.foot_force_norm[i] = std::clamp(spec.force_nominal + spec.force_jitter * rng.normal(), 0.0, 1.0);
      } else {
        if (track.was_stance) {
          track.swing_begin = t;
          track.swing_start = track.position;
          const PelvisPose landing = integrate(pose, cmd, swing_steps[i] + stance_steps[i] / 2);
          track.swing_target = hip_anchor(landing, f, spec.hip_half_width);
        }
        track.was_stance = false;
        const double u = static_cast<double>(t - track.swing_begin + 1) / L;
        const double z_end = height_at(field, track.swing_target[0], track.swing_target[1]);
        track.position = {track.swing_start[0] + u * (track.swing_target[0] - track.swing_start[0]),
                          track.swing_start[1] + u * (track.swing_target[1] - track.swing_start[1]),
                          track.swing_start[2] + u * (z_end - track.swing_start[2]) +
                              spec.swing_clearance * std::sin(kPi * u)};
        if (u >= 1.0) track.position[2] = z_end;
        s.air_time[i] = static_cast<double>(t - track.swing_begin + 1) * kDt;
        foot_pitch[i] = 0.25 * std::sin(kPi * u);
      }
      step.foot_position[i] = track.position;
      s.foot_position[i] = {track.position[0], track.position[1]};
    }

    double stance_z = 0.0;
    int stance_count = 0;
    for (int i = 0; i < 2; ++i) {
      if (step.in_stance[i]) {
        stance_z += step.foot_position[i][2];
        ++stance_count;
      }
    }
    if (stance_count == 0) {
      stance_z = previous ? previous->pelvis_position[2] - spec.pelvis_height : 0.0;
    } else {
      stance_z /= stance_count;
    }
    step.pelvis_position = {pose.xy[0], pose.xy[1], stance_z + spec.pelvis_height};
    s.single_contact = stance_count == 1;
    s.pelvis_yaw = pose.yaw;

    const double sway = 2.0 * kPi * step.phi;
    s.v_xy = {cmd.linear[0], cmd.linear[1] + 0.03 * std::sin(sway)};
    s.pelvis_roll = 0.03 * std::sin(sway);
    s.pelvis_pitch = 0.02 * std::sin(2.0 * sway);

    const double heading_c = std::cos(pose.yaw);
    const double heading_s = std::sin(pose.yaw);
    for (int i = 0; i < 2; ++i) {
      const Vec3& p = step.foot_position[i];
      if (step.in_stance[i]) {
        const double dz = height_at(field, p[0] + 0.1 * heading_c, p[1] + 0.1 * heading_s) -
                          height_at(field, p[0] - 0.1 * heading_c, p[1] - 0.1 * heading_s);
        s.foot_axis[i] = normalized({heading_c, heading_s, dz / 0.2});
        foot_pitch[i] = std::atan2(dz, 0.2);
      } else {
        const double a = foot_pitch[i];
        s.foot_axis[i] = normalized({std::cos(a) * heading_c, std::cos(a) * heading_s, std::sin(a)});
      }
    }

    const double drive = 20.0 + 30.0 * std::hypot(cmd.linear[0], cmd.linear[1]) + 10.0 * std::abs(cmd.yaw_rate);
    for (std::size_t m = 0; m < kMotorCount; ++m) {
      s.torques[m] = drive * std::sin(sway + 0.7 * static_cast<double>(m)) + 2.0 * rng.normal();
    }

    ProprioObservation& o = step.proprio;
    for (Foot f : kFeet) {
      const int i = static_cast<int>(f);
      const auto angles = leg_angles(step.foot_position[i], step.pelvis_position, pose.yaw, f,
                                     spec.hip_half_width, foot_pitch[i]);
      for (int k = 0; k < 5; ++k) o.motor_positions[static_cast<std::size_t>(5 * i + k)] = angles[static_cast<std::size_t>(k)];
      o.joint_positions[static_cast<std::size_t>(2 * i)] = 0.02 * std::sin(sway + kPi * i);
      o.joint_positions[static_cast<std::size_t>(2 * i + 1)] = 0.9 * angles[3] - 0.3;
    }
    o.pelvis_orientation = quaternion_from_euler(s.pelvis_roll, s.pelvis_pitch, pose.yaw);
    o.pelvis_height = step.pelvis_position[2];
    o.command = cmd;
    o.clock = clock_inputs(step.phi);

    if (previous) {
      const RobotState& ps = previous->state;
      const ProprioObservation& po = previous->proprio;
      s.v_z = (step.pelvis_position[2] - previous->pelvis_position[2]) / kDt;
      s.omega = {(s.pelvis_roll - ps.pelvis_roll) / kDt, (s.pelvis_pitch - ps.pelvis_pitch) / kDt, cmd.yaw_rate};
      for (int i = 0; i < 2; ++i) {
        const Vec3& a = step.foot_position[i];
        const Vec3& b = previous->foot_position[i];
        const double speed =
            std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2])) /
            kDt;
        s.foot_velocity_norm[i] = std::clamp(speed / spec.velocity_norm, 0.0, 1.0);
      }
      for (std::size_t m = 0; m < kMotorCount; ++m)
        o.motor_velocities[m] = (o.motor_positions[m] - po.motor_positions[m]) / kDt;
      for (std::size_t j = 0; j < kPassiveJointCount; ++j)
        o.joint_velocities[j] = (o.joint_positions[j] - po.joint_positions[j]) / kDt;
    } else {
      s.omega = {0.0, 0.0, cmd.yaw_rate};
    }
    o.pelvis_angular_velocity = s.omega;
    o.pelvis_linear_velocity = {s.v_xy[0], s.v_xy[1], s.v_z};

    traj.steps.push_back(step);
    previous = step;
    pose = integrate(pose, cmd, 1);
  }
  return traj;
}

}  // namespace ploco
