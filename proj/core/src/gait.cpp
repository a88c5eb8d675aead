#include "ploco/gait.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "ploco/error.hpp"

namespace ploco {
namespace {

/// C2 ramp from 0 at u <= 0 to 1 at u >= 1.
double smootherstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

double wrap_unit(double phi) {
  double w = std::fmod(phi, 1.0);
  if (w < 0.0) w += 1.0;
  return w;
}

}  // namespace

double GaitPhase::phi() const {
  if (period <= 0) throw ValidationError("period", "gait period must be positive");
  std::int64_t m = t % period;
  if (m < 0) m += period;
  return static_cast<double>(m) / static_cast<double>(period);
}

Vec2 clock_inputs(double phi) {
  return {std::sin(2.0 * std::numbers::pi * phi), std::sin(2.0 * std::numbers::pi * (phi + 0.5))};
}

Vec2 clock_inputs(const GaitPhase& phase) { return clock_inputs(phase.phi()); }

void ClockShape::validate() const {
  if (!(stance_fraction > 0.5 && stance_fraction < 1.0))
    throw ValidationError("stance_fraction", "must lie in (0.5, 1) so that stances overlap");
  if (!(smoothing > 0.0)) throw ValidationError("smoothing", "must be > 0");
  if (smoothing >= 1.0 - stance_fraction)
    throw ValidationError("smoothing", "transition width must be shorter than the swing phase");
}

double stance_weight(double phi, const ClockShape& shape) {
  const double s = shape.stance_fraction;
  const double w = shape.smoothing;
  const double p = wrap_unit(phi);
  // One stance window per cycle; neighbouring copies never overlap because
  // w < 1 - s, so summing the shifted windows keeps the result periodic.
  double total = 0.0;
  for (double shift : {-1.0, 0.0, 1.0}) {
    const double x = p + shift;
    const double rise = smootherstep((x + 0.5 * w) / w);
    const double fall = 1.0 - smootherstep((x - s + 0.5 * w) / w);
    total += rise * fall;
  }
  return total;
}

GaitClocks gait_clocks(double phi, const ClockShape& shape) {
  shape.validate();
  GaitClocks clocks;
  const double left = stance_weight(phi, shape);
  const double right = stance_weight(phi + 0.5, shape);
  clocks.force = {2.0 * left - 1.0, 2.0 * right - 1.0};
  clocks.velocity = {-clocks.force[0], -clocks.force[1]};
  return clocks;
}

GaitClocks gait_clocks(const GaitPhase& phase, const ClockShape& shape) { return gait_clocks(phase.phi(), shape); }

void write_clock_csv(std::ostream& out, const ClockShape& shape, int samples) {
  if (samples < 1) throw ValidationError("samples", "must be >= 1");
  out << "phi,clock_0,clock_1,k_frc_left,k_frc_right,k_vel_left,k_vel_right\n";
  for (int i = 0; i < samples; ++i) {
    const double phi = static_cast<double>(i) / static_cast<double>(samples);
    const Vec2 in = clock_inputs(phi);
    const GaitClocks k = gait_clocks(phi, shape);
    out << phi << ',' << in[0] << ',' << in[1] << ',' << k.force[0] << ',' << k.force[1] << ','
        << k.velocity[0] << ',' << k.velocity[1] << '\n';
  }
}

}  // namespace ploco
