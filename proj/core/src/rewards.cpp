#include "ploco/rewards.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "ploco/error.hpp"

namespace ploco {
namespace {

constexpr double kPi = std::numbers::pi;

double mean_abs(const auto& values) {
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum / static_cast<double>(values.size());
}

/// Shared three-branch tracking kernel of the command-following terms.
double tracking(double alignment, double zero_branch, bool command_is_zero) {
  if (command_is_zero) return zero_branch;
  if (alignment >= 1.0) return 1.0;
  return std::exp(-2.0 * (alignment - 1.0) * (alignment - 1.0));
}

}  // namespace

double r_frc(const RobotState& s, const GaitClocks& clocks) {
  return std::tanh(kPi * s.foot_force_norm[0] * clocks.force[0]) +
         std::tanh(kPi * s.foot_force_norm[1] * clocks.force[1]);
}

double r_vel(const RobotState& s, const GaitClocks& clocks) {
  return std::tanh(kPi * s.foot_velocity_norm[0] * clocks.velocity[0]) +
         std::tanh(kPi * s.foot_velocity_norm[1] * clocks.velocity[1]);
}

double r_air(const RobotState& s) {
  double sum = 0.0;
  for (int f = 0; f < 2; ++f) {
    if (s.first_contact[f]) sum += s.air_time[f] - 0.5;
  }
  return sum;
}

double r_one(const RobotState& s) { return s.single_contact ? 1.0 : 0.0; }

double r_v_xy(const RobotState& s, const VelocityCommand& cmd) {
  const bool zero = cmd.linear[0] == 0.0 && cmd.linear[1] == 0.0;
  const double speed_sq = s.v_xy[0] * s.v_xy[0] + s.v_xy[1] * s.v_xy[1];
  const double dot = cmd.linear[0] * s.v_xy[0] + cmd.linear[1] * s.v_xy[1];
  return tracking(dot, zero ? std::exp(-2.5 * speed_sq) : 0.0, zero);
}

double r_omega_z(const RobotState& s, const VelocityCommand& cmd) {
  const double wz = s.omega[2];
  const bool zero = cmd.yaw_rate == 0.0;
  return tracking(cmd.yaw_rate * wz, zero ? std::exp(-5.0 * wz * wz) : 0.0, zero);
}

double r_lov(const RobotState& s, const VelocityCommand& cmd) {
  const double norm = std::hypot(cmd.linear[0], cmd.linear[1]);
  Vec2 perp = s.v_xy;
  if (norm > 0.0) {
    const double ux = cmd.linear[0] / norm;
    const double uy = cmd.linear[1] / norm;
    const double along = ux * s.v_xy[0] + uy * s.v_xy[1];
    perp = {s.v_xy[0] - along * ux, s.v_xy[1] - along * uy};
  }
  return std::exp(-5.0 * std::hypot(perp[0], perp[1]));
}

double r_fo(const RobotState& s, double c_t) {
  const double tilt = std::abs(s.foot_axis[0][2]) + std::abs(s.foot_axis[1][2]);
  return std::exp(-1.5 * tilt) * (1.0 - c_t) + c_t;
}

double r_pm(const RobotState& s) {
  return std::exp(-(s.v_z * s.v_z + s.omega[1] * s.omega[1] + s.omega[0] * s.omega[0]));
}

double r_po(const RobotState& s) { return std::exp(-3.0 * (std::abs(s.pelvis_roll) + std::abs(s.pelvis_pitch))); }

double r_t(const RobotState& s) { return std::exp(-0.02 * mean_abs(s.torques)); }

double r_a(const ActionVector& a_t, const ActionVector& a_prev) {
  std::array<double, kActionSize> diff{};
  for (std::size_t i = 0; i < kActionSize; ++i) diff[i] = a_t.pd_targets[i] - a_prev.pd_targets[i];
  return std::exp(-5.0 * mean_abs(diff));
}

std::array<double, 13> RewardBreakdown::values() const {
  return {r_frc, r_vel, r_air, r_one, r_v_xy, r_omega_z, r_lov, r_fo, r_pm, r_po, r_t, r_a, total};
}

double aggregate_reward(const RewardBreakdown& b, double c_r) {
  return (0.25 * b.r_frc + 0.25 * b.r_vel + 0.2) * c_r + (b.r_air + 0.1 * b.r_one) * (1.0 - c_r) +
         0.2 * b.r_v_xy + 0.2 * b.r_omega_z + 0.05 * b.r_lov + 0.05 * b.r_fo + 0.05 * b.r_pm +
         0.05 * b.r_po + 0.025 * b.r_t + 0.025 * b.r_a;
}

RewardBreakdown total_reward(const RobotState& s, const VelocityCommand& cmd, const GaitClocks& clocks,
                             const ActionVector& a_t, const ActionVector& a_prev,
                             const CurriculumState& curriculum) {
  RewardBreakdown b;
  b.r_frc = r_frc(s, clocks);
  b.r_vel = r_vel(s, clocks);
  b.r_air = r_air(s);
  b.r_one = r_one(s);
  b.r_v_xy = r_v_xy(s, cmd);
  b.r_omega_z = r_omega_z(s, cmd);
  b.r_lov = r_lov(s, cmd);
  b.r_fo = r_fo(s, curriculum.c_t);
  b.r_pm = r_pm(s);
  b.r_po = r_po(s);
  b.r_t = r_t(s);
  b.r_a = r_a(a_t, a_prev);
  const auto values = b.values();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ValidationError(std::string(RewardBreakdown::kColumns[i]), "non-finite");
  }
  b.total = aggregate_reward(b, curriculum.c_r);
  return b;
}

void write_reward_csv_header(std::ostream& out) {
  out << "step";
  for (auto name : RewardBreakdown::kColumns) out << ',' << name;
  out << '\n';
}

void write_reward_csv_row(std::ostream& out, long step, const RewardBreakdown& b) {
  const auto old_precision = out.precision(17);
  out << step;
  for (double v : b.values()) out << ',' << v;
  out << '\n';
  out.precision(old_precision);
}

}  // namespace ploco
