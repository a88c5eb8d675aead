#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ploco {

inline constexpr std::size_t kMotorCount = 10;
inline constexpr std::size_t kPassiveJointCount = 4;
inline constexpr std::size_t kActionSize = kMotorCount;
inline constexpr std::size_t kProprioSize = 44;

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Quaternion = std::array<double, 4>;  // (w, x, y, z)

struct VelocityCommand {
  Vec2 linear{};           // v_cmd, m/s in the heading frame
  double yaw_rate = 0.0;   // omega_cmd, rad/s

  bool operator==(const VelocityCommand&) const = default;
};

/// Proprioceptive observation. The flattened layout is fixed by
/// ProprioLayout and frozen by a golden test.
struct ProprioObservation {
  std::array<double, kMotorCount> motor_positions{};
  std::array<double, kMotorCount> motor_velocities{};
  std::array<double, kPassiveJointCount> joint_positions{};
  std::array<double, kPassiveJointCount> joint_velocities{};
  Quaternion pelvis_orientation{1.0, 0.0, 0.0, 0.0};
  Vec3 pelvis_angular_velocity{};
  double pelvis_height = 0.0;
  Vec3 pelvis_linear_velocity{};
  VelocityCommand command;
  Vec2 clock{};

  bool operator==(const ProprioObservation&) const = default;
};

/// Offsets of each block inside the 44-vector.
struct ProprioLayout {
  static constexpr std::size_t kMotorPositions = 0;
  static constexpr std::size_t kMotorVelocities = 10;
  static constexpr std::size_t kJointPositions = 20;
  static constexpr std::size_t kJointVelocities = 24;
  static constexpr std::size_t kPelvisOrientation = 28;
  static constexpr std::size_t kPelvisAngularVelocity = 32;
  static constexpr std::size_t kPelvisHeight = 35;
  static constexpr std::size_t kPelvisLinearVelocity = 36;
  static constexpr std::size_t kCommand = 39;
  static constexpr std::size_t kClock = 42;
  static constexpr std::size_t kSize = 44;
};
static_assert(ProprioLayout::kSize == kProprioSize);

struct ActionVector {
  std::array<double, kActionSize> pd_targets{};

  bool operator==(const ActionVector&) const = default;
};

enum class Foot { kLeft = 0, kRight = 1 };

inline constexpr std::array<Foot, 2> kFeet{Foot::kLeft, Foot::kRight};

const char* to_string(Foot foot);

/// Per-timestep physical quantities consumed by the reward terms.
struct RobotState {
  Vec2 foot_force_norm{};      // F_l, F_r normalized to [0, 1]
  Vec2 foot_velocity_norm{};   // v_l, v_r normalized to [0, 1]
  Vec2 v_xy{};                 // pelvis planar velocity, heading frame
  double v_z = 0.0;
  Vec3 omega{};                // pelvis angular velocity (x, y, z)
  double pelvis_roll = 0.0;
  double pelvis_pitch = 0.0;
  double pelvis_yaw = 0.0;
  std::array<Vec3, 2> foot_axis{Vec3{1.0, 0.0, 0.0}, Vec3{1.0, 0.0, 0.0}};
  Vec2 air_time{};
  std::array<bool, 2> first_contact{};
  bool single_contact = false;
  std::array<double, kMotorCount> torques{};
  std::array<Vec2, 2> foot_position{};

  bool operator==(const RobotState&) const = default;
};

/// Throws ValidationError naming the first field that breaks an invariant.
void validate(const ProprioObservation& obs);
void validate(const ActionVector& action);
void validate(const RobotState& state);

std::array<double, kProprioSize> flatten_proprio(const ProprioObservation& obs);
ProprioObservation unflatten_proprio(std::span<const double> flat);

// Line-delimited JSON trace records.
void to_json(nlohmann::json& j, const VelocityCommand& v);
void from_json(const nlohmann::json& j, VelocityCommand& v);
void to_json(nlohmann::json& j, const ProprioObservation& v);
void from_json(const nlohmann::json& j, ProprioObservation& v);
void to_json(nlohmann::json& j, const ActionVector& v);
void from_json(const nlohmann::json& j, ActionVector& v);
void to_json(nlohmann::json& j, const RobotState& v);
void from_json(const nlohmann::json& j, RobotState& v);

/// Writes one compact JSON document per line.
class JsonLineWriter {
 public:
  explicit JsonLineWriter(std::ostream& out) : out_(out) {}
  void write(const nlohmann::json& record);

 private:
  std::ostream& out_;
};

std::vector<nlohmann::json> read_json_lines(std::istream& in);

}  // namespace ploco
