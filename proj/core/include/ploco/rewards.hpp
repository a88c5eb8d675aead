#pragma once

#include <array>
#include <iosfwd>
#include <string_view>

#include "ploco/gait.hpp"
#include "ploco/state.hpp"
#include "ploco/terrain.hpp"

namespace ploco {

// Gait terms.
double r_frc(const RobotState& s, const GaitClocks& clocks);
double r_vel(const RobotState& s, const GaitClocks& clocks);
double r_air(const RobotState& s);
double r_one(const RobotState& s);

// Command following.
double r_v_xy(const RobotState& s, const VelocityCommand& cmd);
double r_omega_z(const RobotState& s, const VelocityCommand& cmd);
/// Penalizes the planar velocity orthogonal to the commanded direction. With a
/// zero command the whole planar velocity counts as off-command.
double r_lov(const RobotState& s, const VelocityCommand& cmd);

// Smoothness.
double r_fo(const RobotState& s, double c_t);
double r_pm(const RobotState& s);
double r_po(const RobotState& s);
double r_t(const RobotState& s);
double r_a(const ActionVector& a_t, const ActionVector& a_prev);

struct RewardBreakdown {
  double r_frc = 0, r_vel = 0, r_air = 0, r_one = 0;
  double r_v_xy = 0, r_omega_z = 0, r_lov = 0;
  double r_fo = 0, r_pm = 0, r_po = 0, r_t = 0, r_a = 0;
  double total = 0;

  static constexpr std::array<std::string_view, 13> kColumns{
      "r_frc", "r_vel", "r_air", "r_one", "r_v_xy", "r_omega_z", "r_lov",
      "r_fo",  "r_pm",  "r_po",  "r_t",   "r_a",    "total"};

  std::array<double, 13> values() const;
};

/// Weighted aggregate of the component terms.
///   (0.25 r_frc + 0.25 r_vel + 0.2) c_r + (r_air + 0.1 r_one)(1 - c_r)
///   + 0.2 r_v_xy + 0.2 r_omega_z + 0.05 (r_lov + r_fo + r_pm + r_po)
///   + 0.025 (r_t + r_a)
double aggregate_reward(const RewardBreakdown& b, double c_r);

/// Evaluates every component and the aggregate. Throws ValidationError naming
/// the first non-finite component.
RewardBreakdown total_reward(const RobotState& s, const VelocityCommand& cmd, const GaitClocks& clocks,
                             const ActionVector& a_t, const ActionVector& a_prev,
                             const CurriculumState& curriculum);

void write_reward_csv_header(std::ostream& out);
void write_reward_csv_row(std::ostream& out, long step, const RewardBreakdown& b);

}  // namespace ploco
