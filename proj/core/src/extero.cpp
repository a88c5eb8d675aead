#include "ploco/extero.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/random.hpp"

namespace ploco {
namespace {

constexpr std::uint64_t kEpisodeStream = 0xE915D0DEULL;
constexpr std::uint64_t kStepStream = 0x57E9ULL;

}  // namespace

RingLayout RingLayout::full() {
  return {{0.08, 0.16, 0.26, 0.38, 0.55, 0.80}, {12, 24, 42, 60, 84, 96}};
}

RingLayout RingLayout::desk() { return {{0.10, 0.25, 0.45, 0.80}, {6, 12, 18, 30}}; }

std::size_t RingLayout::total() const {
  std::size_t n = 0;
  for (int c : counts) n += static_cast<std::size_t>(c);
  return n;
}

SamplePattern build_pattern() { return build_pattern(RingLayout::full()); }

SamplePattern build_pattern(const RingLayout& layout) {
  if (layout.radii.size() != layout.counts.size()) throw ValidationError("layout", "radii/counts size mismatch");
  SamplePattern pattern;
  pattern.offsets.reserve(layout.total());
  double previous = 0.0;
  for (std::size_t ring = 0; ring < layout.radii.size(); ++ring) {
    const double r = layout.radii[ring];
    const int n = layout.counts[ring];
    if (!(r > previous)) throw ValidationError("layout.radii", "must be positive and strictly increasing");
    if (n < 2 || n % 2 != 0) throw ValidationError("layout.counts", "ring counts must be even and >= 2");
    previous = r;
    for (int k = 0; k < n; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      pattern.offsets.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  return pattern;
}

ExteroSample sample_clean(const HeightField& field, Vec2 foot_xy, double pelvis_yaw,
                          const SamplePattern& pattern, Foot foot) {
  ExteroSample sample;
  sample.foot = foot;
  sample.heights.resize(pattern.size());
  sample.world_points.resize(pattern.size());
  const double c = std::cos(pelvis_yaw);
  const double s = std::sin(pelvis_yaw);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const Vec2& o = pattern.offsets[i];
    const Vec2 p = pelvis_yaw == 0.0 ? Vec2{foot_xy[0] + o[0], foot_xy[1] + o[1]}
                                     : Vec2{foot_xy[0] + c * o[0] - s * o[1], foot_xy[1] + s * o[0] + c * o[1]};
    sample.world_points[i] = p;
    sample.heights[i] = height_at(field, p[0], p[1]);
  }
  return sample;
}

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kNominal: return "nominal";
    case NoiseMode::kOffset: return "offset";
    case NoiseMode::kNoisy: return "noisy";
  }
  return "unknown";
}

NoiseMode noise_mode_from_string(std::string_view name) {
  for (NoiseMode m : {NoiseMode::kNominal, NoiseMode::kOffset, NoiseMode::kNoisy}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("noise_mode", "unknown noise mode '" + std::string(name) + "'");
}

NoiseProfile NoiseProfile::nominal(std::uint64_t seed) {
  NoiseProfile p;
  p.seed = seed;
  return p;
}

NoiseProfile NoiseProfile::offset(std::uint64_t seed) {
  NoiseProfile p = nominal(seed);
  p.mode = NoiseMode::kOffset;
  p.sigma_z_offset_episode = 0.1;
  return p;
}

NoiseProfile NoiseProfile::noisy(std::uint64_t seed) {
  NoiseProfile p = nominal(seed);
  p.mode = NoiseMode::kNoisy;
  p.sigma_xy_step = 0.05;
  p.sigma_z_step = 0.1;
  p.outlier_prob = 0.1;
  return p;
}

NoiseProfile NoiseProfile::for_mode(NoiseMode mode, std::uint64_t seed) {
  switch (mode) {
    case NoiseMode::kOffset: return offset(seed);
    case NoiseMode::kNoisy: return noisy(seed);
    case NoiseMode::kNominal: break;
  }
  return nominal(seed);
}

NoiseProfile NoiseProfile::none(std::uint64_t seed) {
  NoiseProfile p;
  p.seed = seed;
  p.sigma_xy_step = p.sigma_z_step = p.sigma_xy_episode = p.sigma_z_episode_per_foot = 0.0;
  p.sigma_z_offset_episode = 0.0;
  p.outlier_prob = 0.0;
  return p;
}

double NoiseProfile::composite_sigma_z() const {
  return std::sqrt(sigma_z_step * sigma_z_step + sigma_z_episode_per_foot * sigma_z_episode_per_foot +
                   sigma_z_offset_episode * sigma_z_offset_episode);
}

void NoiseProfile::validate() const {
  const std::pair<const char*, double> sigmas[] = {
      {"sigma_xy_step", sigma_xy_step},
      {"sigma_z_step", sigma_z_step},
      {"sigma_xy_episode", sigma_xy_episode},
      {"sigma_z_episode_per_foot", sigma_z_episode_per_foot},
      {"sigma_z_offset_episode", sigma_z_offset_episode}};
  for (const auto& [name, value] : sigmas) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw ValidationError(name, "must be finite and >= 0");
  }
  if (!(outlier_prob >= 0.0 && outlier_prob <= 1.0)) throw ValidationError("outlier_prob", "outside [0, 1]");
  if (!(outlier_range.first <= outlier_range.second)) throw ValidationError("outlier_range", "lo > hi");
}

NoiseEpisodeState NoiseEpisodeState::begin(const NoiseProfile& profile, std::uint64_t episode, Foot foot) {
  profile.validate();
  Rng rng(derive_seed(profile.seed, {kEpisodeStream, episode, static_cast<std::uint64_t>(foot)}));
  NoiseEpisodeState state;
  state.episode = episode;
  state.foot = foot;
  state.xy_offset = {rng.normal(0.0, 1.0) * profile.sigma_xy_episode,
                     rng.normal(0.0, 1.0) * profile.sigma_xy_episode};
  const double per_foot = rng.normal(0.0, 1.0) * profile.sigma_z_episode_per_foot;
  const double offset = rng.normal(0.0, 1.0) * profile.sigma_z_offset_episode;
  state.z_offset = per_foot + offset;
  return state;
}

ExteroSample apply_noise(const ExteroSample& clean, const HeightField& field, const NoiseProfile& profile,
                         const NoiseEpisodeState& episode, std::int64_t t, std::vector<bool>* outlier_mask) {
  Rng rng(derive_seed(profile.seed, {kStepStream, episode.episode, static_cast<std::uint64_t>(episode.foot),
                                     static_cast<std::uint64_t>(t)}));
  ExteroSample noisy = clean;
  if (outlier_mask) outlier_mask->assign(clean.heights.size(), false);
  const auto [out_lo, out_hi] = profile.outlier_range;
  for (std::size_t i = 0; i < clean.heights.size(); ++i) {
    const double ex = rng.normal(0.0, 1.0);
    const double ey = rng.normal(0.0, 1.0);
    const double ez = rng.normal(0.0, 1.0);
    const double u_outlier = rng.uniform();
    const double u_magnitude = rng.uniform();
    const Vec2& p = clean.world_points[i];
    const double x = p[0] + episode.xy_offset[0] + profile.sigma_xy_step * ex;
    const double y = p[1] + episode.xy_offset[1] + profile.sigma_xy_step * ey;
    double h = height_at(field, x, y) + episode.z_offset + profile.sigma_z_step * ez;
    if (u_outlier < profile.outlier_prob) {
      h += out_lo + (out_hi - out_lo) * u_magnitude;
      if (outlier_mask) (*outlier_mask)[i] = true;
    }
    noisy.heights[i] = h;
  }
  return noisy;
}

void to_json(nlohmann::json& j, const ExteroSample& s) {
  j = nlohmann::json{{"foot", to_string(s.foot)}, {"heights", s.heights}, {"world_points", s.world_points}};
}

void from_json(const nlohmann::json& j, ExteroSample& s) {
  s.foot = j.at("foot").get<std::string>() == "right" ? Foot::kRight : Foot::kLeft;
  j.at("heights").get_to(s.heights);
  j.at("world_points").get_to(s.world_points);
  if (s.heights.size() != s.world_points.size()) throw FormatError("extero sample: length mismatch");
}

void to_json(nlohmann::json& j, const NoiseProfile& p) {
  j = nlohmann::json{{"mode", to_string(p.mode)},
                     {"sigma_xy_step", p.sigma_xy_step},
                     {"sigma_z_step", p.sigma_z_step},
                     {"sigma_xy_episode", p.sigma_xy_episode},
                     {"sigma_z_episode_per_foot", p.sigma_z_episode_per_foot},
                     {"sigma_z_offset_episode", p.sigma_z_offset_episode},
                     {"outlier_prob", p.outlier_prob},
                     {"outlier_range", {p.outlier_range.first, p.outlier_range.second}},
                     {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, NoiseProfile& p) {
  // Unspecified fields fall back to the named mode's defaults.
  p = NoiseProfile::for_mode(noise_mode_from_string(j.value("mode", std::string("nominal"))),
                             j.value("seed", std::uint64_t{0}));
  p.sigma_xy_step = j.value("sigma_xy_step", p.sigma_xy_step);
  p.sigma_z_step = j.value("sigma_z_step", p.sigma_z_step);
  p.sigma_xy_episode = j.value("sigma_xy_episode", p.sigma_xy_episode);
  p.sigma_z_episode_per_foot = j.value("sigma_z_episode_per_foot", p.sigma_z_episode_per_foot);
  p.sigma_z_offset_episode = j.value("sigma_z_offset_episode", p.sigma_z_offset_episode);
  p.outlier_prob = j.value("outlier_prob", p.outlier_prob);
  if (j.contains("outlier_range")) {
    const auto range = j.at("outlier_range").get<std::vector<double>>();
    if (range.size() != 2) throw FormatError("outlier_range must have two entries");
    p.outlier_range = {range[0], range[1]};
  }
  p.validate();
}

void write_sample_pgm(const ExteroSample& sample, Vec2 center, std::ostream& out, double cell, double lo,
                      double hi) {
  double extent = 0.0;
  for (const Vec2& p : sample.world_points) {
    extent = std::max({extent, std::abs(p[0] - center[0]), std::abs(p[1] - center[1])});
  }
  const int half = static_cast<int>(std::ceil(extent / cell)) + 1;
  const int side = 2 * half + 1;
  std::vector<unsigned char> raster(static_cast<std::size_t>(side * side), 0);
  for (std::size_t i = 0; i < sample.heights.size(); ++i) {
    const int col = half + static_cast<int>(std::lround((sample.world_points[i][0] - center[0]) / cell));
    const int row = half + static_cast<int>(std::lround((sample.world_points[i][1] - center[1]) / cell));
    const double t = std::clamp((sample.heights[i] - lo) / (hi - lo), 0.0, 1.0);
    raster[static_cast<std::size_t>(row * side + col)] = static_cast<unsigned char>(1 + std::lround(t * 254.0));
  }
  out << "P5\n" << side << ' ' << side << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
}

}  // namespace ploco
