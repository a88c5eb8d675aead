#include "ploco/state.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"

namespace ploco {
namespace {

template <typename Range>
void require_finite(const Range& values, const char* field) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError(field, "non-finite value");
  }
}

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError(field, "non-finite value");
}

template <std::size_t N>
void copy_block(std::array<double, kProprioSize>& out, std::size_t offset,
                const std::array<double, N>& block) {
  for (std::size_t i = 0; i < N; ++i) out[offset + i] = block[i];
}

template <std::size_t N>
void read_block(std::span<const double> flat, std::size_t offset, std::array<double, N>& block) {
  for (std::size_t i = 0; i < N; ++i) block[i] = flat[offset + i];
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

const char* to_string(Foot foot) { return foot == Foot::kLeft ? "left" : "right"; }

void validate(const ProprioObservation& obs) {
  require_finite(obs.motor_positions, "motor_positions");
  require_finite(obs.motor_velocities, "motor_velocities");
  require_finite(obs.joint_positions, "joint_positions");
  require_finite(obs.joint_velocities, "joint_velocities");
  require_finite(obs.pelvis_orientation, "pelvis_orientation");
  require_finite(obs.pelvis_angular_velocity, "pelvis_angular_velocity");
  require_finite(obs.pelvis_height, "pelvis_height");
  require_finite(obs.pelvis_linear_velocity, "pelvis_linear_velocity");
  require_finite(obs.command.linear, "command.linear");
  require_finite(obs.command.yaw_rate, "command.yaw_rate");
  require_finite(obs.clock, "clock");

  const auto& q = obs.pelvis_orientation;
  const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  if (std::abs(qn - 1.0) > 1e-9) throw ValidationError("pelvis_orientation", "quaternion is not unit norm");
  for (double c : obs.clock) {
    if (c < -1.0 || c > 1.0) throw ValidationError("clock", "entry outside [-1, 1]");
  }
}

void validate(const ActionVector& action) { require_finite(action.pd_targets, "pd_targets"); }

void validate(const RobotState& s) {
  require_finite(s.foot_force_norm, "foot_force_norm");
  require_finite(s.foot_velocity_norm, "foot_velocity_norm");
  require_finite(s.v_xy, "v_xy");
  require_finite(s.v_z, "v_z");
  require_finite(s.omega, "omega");
  require_finite(s.pelvis_roll, "pelvis_roll");
  require_finite(s.pelvis_pitch, "pelvis_pitch");
  require_finite(s.pelvis_yaw, "pelvis_yaw");
  require_finite(s.air_time, "air_time");
  require_finite(s.torques, "torques");
  for (int f = 0; f < 2; ++f) {
    require_finite(s.foot_axis[f], "foot_axis");
    require_finite(s.foot_position[f], "foot_position");
    if (s.foot_force_norm[f] < 0.0 || s.foot_force_norm[f] > 1.0)
      throw ValidationError("foot_force_norm", "outside [0, 1]");
    if (s.foot_velocity_norm[f] < 0.0 || s.foot_velocity_norm[f] > 1.0)
      throw ValidationError("foot_velocity_norm", "outside [0, 1]");
    if (std::abs(norm3(s.foot_axis[f]) - 1.0) > 1e-9) throw ValidationError("foot_axis", "not unit length");
    if (s.air_time[f] < 0.0) throw ValidationError("air_time", "negative");
  }
}

std::array<double, kProprioSize> flatten_proprio(const ProprioObservation& obs) {
  validate(obs);
  std::array<double, kProprioSize> out{};
  copy_block(out, ProprioLayout::kMotorPositions, obs.motor_positions);
  copy_block(out, ProprioLayout::kMotorVelocities, obs.motor_velocities);
  copy_block(out, ProprioLayout::kJointPositions, obs.joint_positions);
  copy_block(out, ProprioLayout::kJointVelocities, obs.joint_velocities);
  copy_block(out, ProprioLayout::kPelvisOrientation, obs.pelvis_orientation);
  copy_block(out, ProprioLayout::kPelvisAngularVelocity, obs.pelvis_angular_velocity);
  out[ProprioLayout::kPelvisHeight] = obs.pelvis_height;
  copy_block(out, ProprioLayout::kPelvisLinearVelocity, obs.pelvis_linear_velocity);
  out[ProprioLayout::kCommand + 0] = obs.command.linear[0];
  out[ProprioLayout::kCommand + 1] = obs.command.linear[1];
  out[ProprioLayout::kCommand + 2] = obs.command.yaw_rate;
  copy_block(out, ProprioLayout::kClock, obs.clock);
  return out;
}

ProprioObservation unflatten_proprio(std::span<const double> flat) {
  if (flat.size() != kProprioSize) {
    throw ValidationError("proprio", "expected " + std::to_string(kProprioSize) + " values, got " +
                                         std::to_string(flat.size()));
  }
  ProprioObservation obs;
  read_block(flat, ProprioLayout::kMotorPositions, obs.motor_positions);
  read_block(flat, ProprioLayout::kMotorVelocities, obs.motor_velocities);
  read_block(flat, ProprioLayout::kJointPositions, obs.joint_positions);
  read_block(flat, ProprioLayout::kJointVelocities, obs.joint_velocities);
  read_block(flat, ProprioLayout::kPelvisOrientation, obs.pelvis_orientation);
  read_block(flat, ProprioLayout::kPelvisAngularVelocity, obs.pelvis_angular_velocity);
  obs.pelvis_height = flat[ProprioLayout::kPelvisHeight];
  read_block(flat, ProprioLayout::kPelvisLinearVelocity, obs.pelvis_linear_velocity);
  obs.command.linear = {flat[ProprioLayout::kCommand], flat[ProprioLayout::kCommand + 1]};
  obs.command.yaw_rate = flat[ProprioLayout::kCommand + 2];
  read_block(flat, ProprioLayout::kClock, obs.clock);
  validate(obs);
  return obs;
}

void to_json(nlohmann::json& j, const VelocityCommand& v) {
  j = nlohmann::json{{"v_cmd", v.linear}, {"omega_cmd", v.yaw_rate}};
}

void from_json(const nlohmann::json& j, VelocityCommand& v) {
  j.at("v_cmd").get_to(v.linear);
  j.at("omega_cmd").get_to(v.yaw_rate);
}

void to_json(nlohmann::json& j, const ProprioObservation& v) {
  j = nlohmann::json{{"motor_positions", v.motor_positions},
                     {"motor_velocities", v.motor_velocities},
                     {"joint_positions", v.joint_positions},
                     {"joint_velocities", v.joint_velocities},
                     {"pelvis_orientation", v.pelvis_orientation},
                     {"pelvis_angular_velocity", v.pelvis_angular_velocity},
                     {"pelvis_height", v.pelvis_height},
                     {"pelvis_linear_velocity", v.pelvis_linear_velocity},
                     {"command", v.command},
                     {"clock", v.clock}};
}

void from_json(const nlohmann::json& j, ProprioObservation& v) {
  j.at("motor_positions").get_to(v.motor_positions);
  j.at("motor_velocities").get_to(v.motor_velocities);
  j.at("joint_positions").get_to(v.joint_positions);
  j.at("joint_velocities").get_to(v.joint_velocities);
  j.at("pelvis_orientation").get_to(v.pelvis_orientation);
  j.at("pelvis_angular_velocity").get_to(v.pelvis_angular_velocity);
  j.at("pelvis_height").get_to(v.pelvis_height);
  j.at("pelvis_linear_velocity").get_to(v.pelvis_linear_velocity);
  j.at("command").get_to(v.command);
  j.at("clock").get_to(v.clock);
}

void to_json(nlohmann::json& j, const ActionVector& v) { j = nlohmann::json{{"pd_targets", v.pd_targets}}; }

void from_json(const nlohmann::json& j, ActionVector& v) { j.at("pd_targets").get_to(v.pd_targets); }

void to_json(nlohmann::json& j, const RobotState& v) {
  j = nlohmann::json{{"foot_force_norm", v.foot_force_norm},
                     {"foot_velocity_norm", v.foot_velocity_norm},
                     {"v_xy", v.v_xy},
                     {"v_z", v.v_z},
                     {"omega", v.omega},
                     {"pelvis_roll", v.pelvis_roll},
                     {"pelvis_pitch", v.pelvis_pitch},
                     {"pelvis_yaw", v.pelvis_yaw},
                     {"foot_axis", v.foot_axis},
                     {"air_time", v.air_time},
                     {"first_contact", v.first_contact},
                     {"single_contact", v.single_contact},
                     {"torques", v.torques},
                     {"foot_position", v.foot_position}};
}

void from_json(const nlohmann::json& j, RobotState& v) {
  j.at("foot_force_norm").get_to(v.foot_force_norm);
  j.at("foot_velocity_norm").get_to(v.foot_velocity_norm);
  j.at("v_xy").get_to(v.v_xy);
  j.at("v_z").get_to(v.v_z);
  j.at("omega").get_to(v.omega);
  j.at("pelvis_roll").get_to(v.pelvis_roll);
  j.at("pelvis_pitch").get_to(v.pelvis_pitch);
  j.at("pelvis_yaw").get_to(v.pelvis_yaw);
  j.at("foot_axis").get_to(v.foot_axis);
  j.at("air_time").get_to(v.air_time);
  j.at("first_contact").get_to(v.first_contact);
  j.at("single_contact").get_to(v.single_contact);
  j.at("torques").get_to(v.torques);
  j.at("foot_position").get_to(v.foot_position);
}

void JsonLineWriter::write(const nlohmann::json& record) { out_ << record.dump() << '\n'; }

std::vector<nlohmann::json> read_json_lines(std::istream& in) {
  std::vector<nlohmann::json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace ploco
