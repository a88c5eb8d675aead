#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/random.hpp"
#include "ploco/state.hpp"

using namespace ploco;

namespace {

ProprioObservation random_observation(Rng& rng) {
  ProprioObservation o;
  for (auto& v : o.motor_positions) v = rng.uniform(-2, 2);
  for (auto& v : o.motor_velocities) v = rng.uniform(-5, 5);
  for (auto& v : o.joint_positions) v = rng.uniform(-1, 1);
  for (auto& v : o.joint_velocities) v = rng.uniform(-3, 3);
  Quaternion q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (auto& v : q) v /= n;
  o.pelvis_orientation = q;
  for (auto& v : o.pelvis_angular_velocity) v = rng.uniform(-1, 1);
  o.pelvis_height = rng.uniform(0.5, 1.5);
  for (auto& v : o.pelvis_linear_velocity) v = rng.uniform(-1, 1);
  o.command = {{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
  o.clock = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return o;
}

}  // namespace

TEST_CASE("zero observation flattens to 43 zeros and the quaternion w") {
  const auto flat = flatten_proprio(ProprioObservation{});
  CHECK(flat.size() == 44);
  int ones = 0, zeros = 0;
  for (double v : flat) {
    ones += v == 1.0;
    zeros += v == 0.0;
  }
  CHECK(ones == 1);
  CHECK(zeros == 43);
  CHECK(flat[ProprioLayout::kPelvisOrientation] == 1.0);
}

TEST_CASE("flatten then unflatten is the identity") {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const ProprioObservation o = random_observation(rng);
    const auto flat = flatten_proprio(o);
    CHECK(unflatten_proprio(flat) == o);
  }
}

TEST_CASE("command (1, 0, 0) lands in the command slots") {
  ProprioObservation o;
  o.command = {{1.0, 0.0}, 0.0};
  const auto flat = flatten_proprio(o);
  CHECK(flat[ProprioLayout::kCommand] == 1.0);
  CHECK(flat[ProprioLayout::kCommand + 1] == 0.0);
  CHECK(flat[ProprioLayout::kCommand + 2] == 0.0);
}

TEST_CASE("golden layout: perturbing one field moves exactly one slot") {
  const auto base = flatten_proprio(ProprioObservation{});
  auto changed_slot = [&](const ProprioObservation& o) {
    const auto flat = flatten_proprio(o);
    int slot = -1, count = 0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
      if (flat[i] != base[i]) {
        slot = static_cast<int>(i);
        ++count;
      }
    }
    CHECK(count == 1);
    return slot;
  };
  for (std::size_t i = 0; i < kMotorCount; ++i) {
    ProprioObservation o;
    o.motor_positions[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(i));
    o = {};
    o.motor_velocities[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(10 + i));
  }
  for (std::size_t i = 0; i < kPassiveJointCount; ++i) {
    ProprioObservation o;
    o.joint_positions[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(20 + i));
    o = {};
    o.joint_velocities[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(24 + i));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    ProprioObservation o;
    o.pelvis_angular_velocity[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(32 + i));
    o = {};
    o.pelvis_linear_velocity[i] = 0.5;
    CHECK(changed_slot(o) == static_cast<int>(36 + i));
  }
  ProprioObservation o;
  o.pelvis_height = 0.9;
  CHECK(changed_slot(o) == 35);
  o = {};
  o.command.yaw_rate = 0.5;
  CHECK(changed_slot(o) == 41);
  o = {};
  o.clock[1] = 0.5;
  CHECK(changed_slot(o) == 43);
}

TEST_CASE("flatten is injective on single-field changes") {
  Rng rng(5);
  const ProprioObservation o = random_observation(rng);
  const auto flat = flatten_proprio(o);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i >= ProprioLayout::kPelvisOrientation && i < ProprioLayout::kPelvisOrientation + 4) continue;
    auto copy = flat;
    copy[i] = flat[i] == 0.5 ? 0.25 : 0.5;
    const ProprioObservation other = unflatten_proprio(copy);
    CHECK(flatten_proprio(other) != flat);
  }
}

TEST_CASE("invariant violations name the field") {
  ProprioObservation o;
  o.pelvis_orientation = {1.0, 1e-3, 0.0, 0.0};
  try {
    flatten_proprio(o);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "pelvis_orientation");
  }
  o = {};
  o.clock = {1.5, 0.0};
  CHECK_THROWS_AS(validate(o), ValidationError);
  o = {};
  o.motor_velocities[3] = std::numeric_limits<double>::quiet_NaN();
  try {
    validate(o);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.field().find("motor_velocities") != std::string::npos);
  }

  RobotState s;
  s.foot_force_norm = {1.2, 0.0};
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = {};
  s.foot_axis[0] = {1.0, 1e-3, 0.0};
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = {};
  s.air_time = {-0.1, 0.0};
  CHECK_THROWS_AS(validate(s), ValidationError);
  CHECK_NOTHROW(validate(RobotState{}));

  ActionVector a;
  a.pd_targets[9] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(a), ValidationError);
  CHECK_THROWS_AS(unflatten_proprio(std::vector<double>(43, 0.0)), ValidationError);
}

TEST_CASE("JSON line records round-trip") {
  Rng rng(3);
  std::stringstream buf;
  JsonLineWriter writer(buf);
  std::vector<ProprioObservation> obs;
  RobotState s;
  s.v_xy = {0.3, -0.1};
  s.first_contact = {true, false};
  s.torques[4] = 12.5;
  for (int k = 0; k < 5; ++k) {
    obs.push_back(random_observation(rng));
    writer.write({{"proprio", obs.back()}, {"state", s}});
  }
  const auto records = read_json_lines(buf);
  REQUIRE(records.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(records[k].at("proprio").get<ProprioObservation>() == obs[k]);
    CHECK(records[k].at("state").get<RobotState>() == s);
  }
  std::stringstream bad("{\"a\":1}\nnot json\n");
  CHECK_THROWS_AS(read_json_lines(bad), FormatError);
}
