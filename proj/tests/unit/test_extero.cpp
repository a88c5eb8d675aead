#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/extero.hpp"
#include "ploco/random.hpp"

using namespace ploco;

namespace {

HeightField flat_field(double h = 0.0) {
  HeightField f;
  f.resolution = 0.05;
  f.heights = Eigen::MatrixXd::Constant(200, 200, h);
  f.origin = {-5.0, -5.0};
  return f;
}

double radius(const Vec2& p) { return std::hypot(p[0], p[1]); }

}  // namespace

TEST_CASE("pattern has 318 points, zero centroid, outer radius 0.8") {
  const SamplePattern p = build_pattern();
  CHECK(p.size() == 318);
  double sx = 0.0, sy = 0.0, rmax = 0.0;
  for (const Vec2& o : p.offsets) {
    sx += o[0];
    sy += o[1];
    rmax = std::max(rmax, radius(o));
  }
  CHECK(std::abs(sx) < 1e-12);
  CHECK(std::abs(sy) < 1e-12);
  CHECK(rmax == doctest::Approx(0.8).epsilon(1e-12));
  for (std::size_t k = 1; k < p.size(); ++k) CHECK(radius(p.offsets[k]) >= radius(p.offsets[k - 1]) - 1e-12);
  CHECK(build_pattern(RingLayout::desk()).size() == 66);
}

TEST_CASE("pattern is symmetric under reflection about both axes") {
  const SamplePattern p = build_pattern();
  auto contains = [&](double x, double y) {
    for (const Vec2& o : p.offsets) {
      if (std::abs(o[0] - x) < 1e-12 && std::abs(o[1] - y) < 1e-12) return true;
    }
    return false;
  };
  for (const Vec2& o : p.offsets) {
    CHECK(contains(-o[0], o[1]));
    CHECK(contains(o[0], -o[1]));
  }
}

TEST_CASE("clean sampling on flat terrain and yaw identity") {
  const SamplePattern p = build_pattern();
  const HeightField f = flat_field();
  const ExteroSample s = sample_clean(f, {0.3, -0.2}, 1.1, p, Foot::kRight);
  CHECK(s.heights.size() == 318);
  for (double h : s.heights) CHECK(h == 0.0);
  CHECK(s.foot == Foot::kRight);
  const ExteroSample z = sample_clean(f, {0.3, -0.2}, 0.0, p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(z.world_points[k][0] == 0.3 + p.offsets[k][0]);
    CHECK(z.world_points[k][1] == -0.2 + p.offsets[k][1]);
  }
  const double yaw = std::numbers::pi / 2;
  const ExteroSample r = sample_clean(f, {0.0, 0.0}, yaw, p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(r.world_points[k][0] == doctest::Approx(-p.offsets[k][1]).epsilon(1e-12));
    CHECK(r.world_points[k][1] == doctest::Approx(p.offsets[k][0]).epsilon(1e-12));
  }
}

TEST_CASE("step edge at x = 1.0 partitions heights by the sign of each point's x offset") {
  HeightField f;
  f.resolution = 0.01;
  f.origin = {-1.0, -2.0};
  f.heights = Eigen::MatrixXd::Zero(401, 401);
  // Cells with center x >= 1.0 sit on the 0.3 m step.
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    if (f.origin[0] + c * f.resolution >= 1.0 - 1e-12) f.heights.col(c).setConstant(0.3);
  }
  const SamplePattern p = build_pattern();
  const ExteroSample s = sample_clean(f, {1.0, 0.0}, 0.0, p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double x = s.world_points[k][0];
    const double h = s.heights[k];
    // Points within one cell of the edge interpolate across it.
    if (x >= 1.0) CHECK(h == doctest::Approx(0.3));
    else if (x <= 1.0 - f.resolution) CHECK(h == 0.0);
    else CHECK((h >= 0.0 && h <= 0.3));
  }
}

TEST_CASE("zero-noise profile is the identity and noise is deterministic") {
  const HeightField f = flat_field(0.25);
  const SamplePattern p = build_pattern();
  const ExteroSample clean = sample_clean(f, {0.1, 0.1}, 0.4, p);
  const NoiseProfile none = NoiseProfile::none(3);
  const auto st = NoiseEpisodeState::begin(none, 0, Foot::kLeft);
  CHECK(apply_noise(clean, f, none, st, 5) == clean);

  const NoiseProfile nominal = NoiseProfile::nominal(3);
  const auto ep = NoiseEpisodeState::begin(nominal, 12, Foot::kLeft);
  CHECK(apply_noise(clean, f, nominal, ep, 5) == apply_noise(clean, f, nominal, ep, 5));
  CHECK(apply_noise(clean, f, nominal, ep, 5).heights != apply_noise(clean, f, nominal, ep, 6).heights);
  CHECK(apply_noise(clean, f, nominal, ep, 5).heights.size() == clean.heights.size());
}

TEST_CASE("nominal noise statistics on flat terrain") {
  const HeightField f = flat_field();
  const SamplePattern p = build_pattern();
  const NoiseProfile profile = NoiseProfile::nominal(2024);
  const ExteroSample clean = sample_clean(f, {0.0, 0.0}, 0.0, p);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0, outliers = 0, total = 0;
  for (std::uint64_t episode = 0; episode < 1000; ++episode) {
    const auto st = NoiseEpisodeState::begin(profile, episode, Foot::kLeft);
    std::vector<bool> mask;
    const ExteroSample noisy = apply_noise(clean, f, profile, st, 0, &mask);
    for (std::size_t k = 0; k < noisy.heights.size(); ++k) {
      ++total;
      if (mask[k]) {
        ++outliers;
        continue;
      }
      const double e = noisy.heights[k] - clean.heights[k];
      sum += e;
      sq += e * e;
      ++n;
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double sd = std::sqrt(sq / static_cast<double>(n) - mean * mean);
  CHECK(total >= 100000);
  CHECK(std::abs(sd / profile.composite_sigma_z() - 1.0) < 0.05);
  CHECK(std::abs(static_cast<double>(outliers) / static_cast<double>(total) - profile.outlier_prob) < 0.005);
}

TEST_CASE("episode offsets are constant within an episode, independent across feet and episodes") {
  const HeightField f = flat_field();
  const SamplePattern p = build_pattern();
  NoiseProfile profile = NoiseProfile::offset(9);
  profile.sigma_z_step = 0.0;
  profile.outlier_prob = 0.0;
  const ExteroSample clean = sample_clean(f, {0.0, 0.0}, 0.0, p);
  const auto left = NoiseEpisodeState::begin(profile, 4, Foot::kLeft);
  const auto right = NoiseEpisodeState::begin(profile, 4, Foot::kRight);
  const auto other = NoiseEpisodeState::begin(profile, 5, Foot::kLeft);
  for (std::int64_t t = 0; t < 20; ++t) {
    const ExteroSample a = apply_noise(clean, f, profile, left, t);
    for (double h : a.heights) CHECK(h == doctest::Approx(left.z_offset).epsilon(1e-12));
  }
  CHECK(left.z_offset != right.z_offset);
  CHECK(left.z_offset != other.z_offset);

  double sum_lr = 0.0, sum_ll = 0.0, sum_rr = 0.0;
  for (std::uint64_t e = 0; e < 4000; ++e) {
    const double l = NoiseEpisodeState::begin(profile, e, Foot::kLeft).z_offset;
    const double r = NoiseEpisodeState::begin(profile, e, Foot::kRight).z_offset;
    sum_lr += l * r;
    sum_ll += l * l;
    sum_rr += r * r;
  }
  CHECK(std::abs(sum_lr / std::sqrt(sum_ll * sum_rr)) < 0.06);
}

TEST_CASE("outliers only raise heights within the configured range") {
  const HeightField f = flat_field();
  const SamplePattern p = build_pattern();
  NoiseProfile profile = NoiseProfile::none(1);
  profile.outlier_prob = 0.5;
  const ExteroSample clean = sample_clean(f, {0.0, 0.0}, 0.0, p);
  std::vector<bool> mask;
  const ExteroSample noisy = apply_noise(clean, f, profile, NoiseEpisodeState::begin(profile, 0, Foot::kLeft), 3, &mask);
  REQUIRE(mask.size() == clean.heights.size());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) {
      CHECK(noisy.heights[k] >= 0.1);
      CHECK(noisy.heights[k] <= 0.6);
    } else {
      CHECK(noisy.heights[k] == 0.0);
    }
  }
}

TEST_CASE("profile presets, validation and JSON") {
  CHECK(NoiseProfile::offset().sigma_z_offset_episode == 0.1);
  CHECK(NoiseProfile::noisy().sigma_z_step == 0.1);
  CHECK(NoiseProfile::noisy().sigma_xy_step == 0.05);
  CHECK(NoiseProfile::noisy().outlier_prob == 0.1);
  NoiseProfile bad;
  bad.sigma_z_step = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = {};
  bad.outlier_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const NoiseProfile p = NoiseProfile::offset(77);
  const nlohmann::json j = p;
  const NoiseProfile q = j.get<NoiseProfile>();
  CHECK(q.sigma_z_offset_episode == p.sigma_z_offset_episode);
  CHECK(q.seed == 77);
  CHECK(noise_mode_from_string("noisy") == NoiseMode::kNoisy);
  CHECK_THROWS_AS(noise_mode_from_string("loud"), ValidationError);
}

TEST_CASE("sample JSON and PGM scatter rendering") {
  const HeightField f = flat_field(0.2);
  const ExteroSample s = sample_clean(f, {0.0, 0.0}, 0.0, build_pattern(RingLayout::desk()), Foot::kRight);
  const nlohmann::json j = s;
  CHECK(j.get<ExteroSample>() == s);
  std::stringstream out;
  write_sample_pgm(s, {0.0, 0.0}, out);
  std::string magic;
  out >> magic;
  CHECK(magic == "P5");
}
