#pragma once

#include <cstdint>
#include <iosfwd>

#include "ploco/state.hpp"

namespace ploco {

/// Default gait period in control steps (40 Hz, 0.8 s per cycle).
inline constexpr std::int64_t kDefaultGaitPeriod = 32;
inline constexpr double kControlRate = 40.0;

struct GaitPhase {
  std::int64_t t = 0;
  std::int64_t period = kDefaultGaitPeriod;

  /// (t mod T) / T in [0, 1).
  double phi() const;
};

/// (sin 2 pi phi, sin 2 pi (phi + 0.5)).
Vec2 clock_inputs(const GaitPhase& phase);
Vec2 clock_inputs(double phi);

struct GaitClocks {
  Vec2 force{};     // k_frc for (left, right)
  Vec2 velocity{};  // k_vel for (left, right)
};

struct ClockShape {
  double stance_fraction = 0.55;
  double smoothing = 0.03;  // transition width in phase units

  void validate() const;
};

/// Smooth stance indicator of the left foot: 1 in stance, 0 in swing.
/// Left stance spans [0, stance_fraction); the right foot lags by half a cycle.
double stance_weight(double phi, const ClockShape& shape);

/// Per-foot force/velocity gait clocks. k_frc is +1 in stance (foot force is
/// rewarded) and -1 in swing (foot force is penalized); k_vel = -k_frc.
GaitClocks gait_clocks(double phi, const ClockShape& shape = {});
GaitClocks gait_clocks(const GaitPhase& phase, const ClockShape& shape = {});

/// Writes `samples` rows of phi, both clock inputs and all four gait clocks.
void write_clock_csv(std::ostream& out, const ClockShape& shape, int samples);

}  // namespace ploco
