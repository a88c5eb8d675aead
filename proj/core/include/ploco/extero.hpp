#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ploco/state.hpp"
#include "ploco/terrain.hpp"

namespace ploco {

inline constexpr std::size_t kPatternSize = 318;

/// Concentric-ring layout of a foot-centered sampling pattern.
struct RingLayout {
  std::vector<double> radii;
  std::vector<int> counts;

  /// 6 rings, 318 points, outer radius 0.8 m.
  static RingLayout full();
  /// 4 rings, 66 points, outer radius 0.8 m. Used by the desk-scale profile.
  static RingLayout desk();

  std::size_t total() const;
};

/// Foot-frame xy offsets, sorted by ring (radius) and then by angle.
struct SamplePattern {
  std::vector<Vec2> offsets;

  std::size_t size() const { return offsets.size(); }
};

SamplePattern build_pattern();
SamplePattern build_pattern(const RingLayout& layout);

struct ExteroSample {
  std::vector<double> heights;
  std::vector<Vec2> world_points;
  Foot foot = Foot::kLeft;

  bool operator==(const ExteroSample&) const = default;
};

ExteroSample sample_clean(const HeightField& field, Vec2 foot_xy, double pelvis_yaw,
                          const SamplePattern& pattern, Foot foot = Foot::kLeft);

enum class NoiseMode { kNominal, kOffset, kNoisy };

std::string_view to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(std::string_view name);

struct NoiseProfile {
  NoiseMode mode = NoiseMode::kNominal;
  double sigma_xy_step = 0.01;
  double sigma_z_step = 0.02;
  double sigma_xy_episode = 0.02;
  double sigma_z_episode_per_foot = 0.02;
  double sigma_z_offset_episode = 0.0;
  double outlier_prob = 0.02;
  std::pair<double, double> outlier_range{0.1, 0.6};
  std::uint64_t seed = 0;

  static NoiseProfile nominal(std::uint64_t seed = 0);
  static NoiseProfile offset(std::uint64_t seed = 0);
  static NoiseProfile noisy(std::uint64_t seed = 0);
  static NoiseProfile for_mode(NoiseMode mode, std::uint64_t seed = 0);
  /// All noise sources disabled.
  static NoiseProfile none(std::uint64_t seed = 0);

  /// sqrt of the summed z variances at step, episode/foot and offset level.
  double composite_sigma_z() const;

  void validate() const;
};

/// Episode-level noise draws for one foot; constant across the episode's steps.
struct NoiseEpisodeState {
  std::uint64_t episode = 0;
  Foot foot = Foot::kLeft;
  Vec2 xy_offset{};
  double z_offset = 0.0;

  static NoiseEpisodeState begin(const NoiseProfile& profile, std::uint64_t episode, Foot foot);
};

/// Applies the profile's noise to a clean sample. Heights are re-queried from
/// `field` at perturbed coordinates; z noise and outliers are then added.
/// Deterministic in (profile.seed, episode, foot, t). `outlier_mask`, when
/// given, receives one flag per point.
ExteroSample apply_noise(const ExteroSample& clean, const HeightField& field, const NoiseProfile& profile,
                         const NoiseEpisodeState& episode, std::int64_t t,
                         std::vector<bool>* outlier_mask = nullptr);

void to_json(nlohmann::json& j, const ExteroSample& s);
void from_json(const nlohmann::json& j, ExteroSample& s);
void to_json(nlohmann::json& j, const NoiseProfile& p);
void from_json(const nlohmann::json& j, NoiseProfile& p);

/// Renders a sample as an 8-bit PGM scatter raster centered on the foot; cells
/// without a point stay black, points are shaded by height within [lo, hi].
void write_sample_pgm(const ExteroSample& sample, Vec2 center, std::ostream& out, double cell = 0.02,
                      double lo = -0.5, double hi = 1.0);

}  // namespace ploco
