#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ploco/error.hpp"
#include "ploco/random.hpp"
#include "ploco/terrain.hpp"

using namespace ploco;

namespace {

constexpr std::array<TerrainMode, 6> kModes{TerrainMode::kHills,          TerrainMode::kEdges,
                                            TerrainMode::kSquares,        TerrainMode::kQuantizedHills,
                                            TerrainMode::kStairs,         TerrainMode::kFlat};

std::vector<double> row_plateaus(const HeightField& f, Eigen::Index row, std::vector<int>* widths = nullptr) {
  std::vector<double> levels{f.heights(row, 0)};
  int width = 1;
  for (Eigen::Index c = 1; c < f.cols(); ++c) {
    if (f.heights(row, c) != levels.back()) {
      if (widths) widths->push_back(width);
      levels.push_back(f.heights(row, c));
      width = 1;
    } else {
      ++width;
    }
  }
  return levels;
}

}  // namespace

TEST_CASE("perlin vanishes on lattice points and is deterministic") {
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    for (int x = -5; x <= 5; ++x) {
      for (int y = -5; y <= 5; ++y) {
        CHECK(perlin2(x / 0.5, y / 0.5, seed, 0.5) == 0.0);
      }
    }
    CHECK(perlin2(0.37, -1.2, seed, 1.3) == perlin2(0.37, -1.2, seed, 1.3));
  }
}

TEST_CASE("perlin Monte-Carlo range and mean") {
  Rng rng(99);
  double sum = 0.0;
  double lo = 1.0, hi = -1.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double v = perlin2(rng.uniform(-500, 500), rng.uniform(-500, 500), 42, 1.0);
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= -1.0);
  CHECK(hi <= 1.0);
  CHECK(std::abs(sum / n) < 0.02);
}

TEST_CASE("c_t = 0 gives an all-zero field for every mode") {
  for (TerrainMode m : kModes) {
    const HeightField f = generate(TerrainSpec::random(m, 3), GridSize{80, 80}, 0.05, 0.0);
    CHECK(f.heights.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("hills span exactly [0, 0.8] at c_t = 1") {
  TerrainSpec spec;
  spec.mode = TerrainMode::kHills;
  spec.seed = 17;
  const HeightField f = generate(spec, GridSize{200, 200}, 0.05, 1.0);
  CHECK(f.heights.minCoeff() == 0.0);
  CHECK(f.heights.maxCoeff() == doctest::Approx(0.8).epsilon(1e-12));
  const HeightField half = generate(spec, GridSize{200, 200}, 0.05, 0.5);
  CHECK(half.heights.maxCoeff() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("edges with h = 0.2 and c_t = 0.5 take values {0, 0.1}") {
  TerrainSpec spec;
  spec.mode = TerrainMode::kEdges;
  spec.seed = 5;
  spec.edges.level = 0.2;
  const HeightField f = generate(spec, GridSize{200, 200}, 0.05, 0.5);
  const std::set<double> levels(f.heights.data(), f.heights.data() + f.heights.size());
  CHECK(levels == std::set<double>{0.0, 0.2 * 0.5});
}

TEST_CASE("quantized hills are integer multiples of h * c_t") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TerrainSpec spec = TerrainSpec::random(TerrainMode::kQuantizedHills, seed);
    const double c_t = 0.3 + 0.1 * static_cast<double>(seed);
    const HeightField f = generate(spec, GridSize{120, 120}, 0.05, c_t);
    const double level = spec.quantized.step * c_t;
    for (Eigen::Index i = 0; i < f.heights.size(); ++i) {
      const double k = f.heights.data()[i] / level;
      CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
  }
}

TEST_CASE("squares are constant per square with heights in [0, 0.4] c_t") {
  TerrainSpec spec = TerrainSpec::random(TerrainMode::kSquares, 21);
  spec.squares.side = 0.5;
  const double c_t = 0.8;
  const HeightField f = generate(spec, GridSize{100, 100}, 0.05, c_t);
  CHECK(f.heights.minCoeff() >= 0.0);
  CHECK(f.heights.maxCoeff() <= 0.4 * c_t);
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      const Eigen::Index r0 = (r / 10) * 10, c0 = (c / 10) * 10;
      CHECK(f.heights(r, c) == f.heights(r0, c0));
    }
  }
  std::set<double> distinct(f.heights.data(), f.heights.data() + f.heights.size());
  CHECK(distinct.size() > 50);
}

TEST_CASE("stairs r = 0.1, d = 0.3: first flight plateaus 0.1 .. 1.0 at 0.3 m spacing") {
  TerrainSpec spec;
  spec.mode = TerrainMode::kStairs;
  spec.stairs.rise = 0.1;
  spec.stairs.run = 0.3;
  const HeightField f = generate(spec, GridSize{4, 400}, 0.01, 1.0);
  std::vector<int> widths;
  const auto plateaus = row_plateaus(f, 0, &widths);
  REQUIRE(plateaus.size() >= 11);
  CHECK(plateaus[0] == 0.0);
  for (int k = 1; k <= 10; ++k) CHECK(plateaus[k] == doctest::Approx(0.1 * k).epsilon(1e-12));
  for (int k = 1; k < 10; ++k) CHECK(std::abs(widths[k] * 0.01 - 0.3) <= 0.01 + 1e-12);
}

TEST_CASE("stairs deltas are exactly +-r c_t and flights alternate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TerrainSpec spec = TerrainSpec::random(TerrainMode::kStairs, seed);
    const double c_t = 0.25 + 0.075 * static_cast<double>(seed);
    const HeightField f = generate(spec, GridSize{2, 400}, 0.05, c_t);
    const auto plateaus = row_plateaus(f, 0);
    const double r = spec.stairs.rise * c_t;
    int run_sign = 0, run_length = 0;
    std::vector<int> flights;
    for (std::size_t k = 1; k < plateaus.size(); ++k) {
      const double d = plateaus[k] - plateaus[k - 1];
      CHECK(std::abs(std::abs(d) - r) < 1e-12);
      const int sign = d > 0 ? 1 : -1;
      if (sign != run_sign && run_length > 0) {
        flights.push_back(run_sign * run_length);
        run_length = 0;
      }
      run_sign = sign;
      ++run_length;
    }
    for (std::size_t k = 0; k + 1 < flights.size(); ++k) {
      CHECK(flights[k] * flights[k + 1] < 0);
      CHECK(std::abs(flights[k]) == 10);
    }
  }
}

TEST_CASE("generation is deterministic and monotone in c_t") {
  for (TerrainMode m : kModes) {
    const TerrainSpec spec = TerrainSpec::random(m, 77);
    const HeightField a = generate(spec, GridSize{60, 60}, 0.05, 0.6);
    const HeightField b = generate(spec, GridSize{60, 60}, 0.05, 0.6);
    CHECK(a.heights == b.heights);
    const HeightField lo = generate(spec, GridSize{60, 60}, 0.05, 0.3);
    CHECK((lo.heights.cwiseAbs().array() <= a.heights.cwiseAbs().array()).all());
  }
}

TEST_CASE("out-of-range parameters are rejected with their name") {
  TerrainSpec spec;
  spec.mode = TerrainMode::kStairs;
  spec.stairs.rise = 0.3;
  try {
    generate(spec, GridSize{10, 10}, 0.05, 1.0);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "stairs.rise");
    CHECK(std::string(e.what()).find("[0.1, 0.22]") != std::string::npos);
  }
  spec = {};
  spec.mode = TerrainMode::kEdges;
  spec.edges.level = 0.1;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.mode = TerrainMode::kSquares;
  spec.squares.side = 0.7;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.mode = TerrainMode::kQuantizedHills;
  spec.quantized.step = 0.2;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  CHECK_THROWS_AS(generate(TerrainSpec{}, GridSize{10, 10}, 0.05, 1.5), ValidationError);
  CHECK_THROWS_AS(terrain_mode_from_string("lava"), ValidationError);
}

TEST_CASE("height_at: cell centers, midpoints and clamping") {
  HeightField f;
  f.resolution = 0.5;
  f.origin = {1.0, 2.0};
  f.heights = Eigen::MatrixXd::Zero(3, 4);
  f.heights(1, 1) = 0.4;
  f.heights(0, 3) = 0.7;
  CHECK(height_at(f, 1.5, 2.5) == 0.4);
  CHECK(height_at(f, 1.25, 2.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(height_at(f, 1.5, 2.25) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(height_at(f, 12.5, -8.0) == 0.7);
  CHECK(height_at(f, -20.0, 2.5) == 0.0);
  for (Eigen::Index r = 0; r < 3; ++r) {
    for (Eigen::Index c = 0; c < 4; ++c) CHECK(height_at(f, 1.0 + 0.5 * c, 2.0 + 0.5 * r) == f.heights(r, c));
  }
}

TEST_CASE("curriculum ramp and reward switch") {
  CurriculumState s;
  s.ramp_start_step = 100;
  s.ramp_end_step = 300;
  s.reward_switch_step = 500;
  CHECK(curriculum_step(s, 50).c_t == 0.0);
  CHECK(curriculum_step(s, 200).c_t == 0.5);
  CHECK(curriculum_step(s, 1000).c_t == 1.0);
  CHECK(curriculum_step(s, 499).c_r == 1.0);
  CHECK(curriculum_step(s, 500).c_r == 0.0);
  s.ramp_end_step = 100;
  CHECK(curriculum_step(s, 99).c_t == 0.0);
  CHECK(curriculum_step(s, 100).c_t == 1.0);
  s.reward_transition_steps = 100;
  CHECK(curriculum_step(s, 550).c_r == doctest::Approx(0.5));
  s.ramp_end_step = 50;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("PGM and JSON round trips") {
  const HeightField f = generate(TerrainSpec::random(TerrainMode::kHills, 8), GridSize{30, 40}, 0.05, 1.0);
  std::stringstream pgm;
  write_pgm(f, pgm);
  const HeightField back = read_pgm(pgm);
  CHECK(back.rows() == 30);
  CHECK(back.cols() == 40);
  CHECK(back.resolution == f.resolution);
  CHECK(back.origin == f.origin);
  CHECK((back.heights - f.heights).cwiseAbs().maxCoeff() <= 0.0005 + 1e-12);

  const auto dir = std::filesystem::temp_directory_path() / "ploco_terrain_test";
  std::filesystem::create_directories(dir);
  save_heightfield(f, dir / "f.json");
  const HeightField j = load_heightfield(dir / "f.json");
  CHECK(j.heights == f.heights);
  CHECK(j.origin == f.origin);

  HeightField neg = f;
  neg.heights.array() -= 0.3;
  save_heightfield(neg, dir / "n.pgm");
  CHECK((load_heightfield(dir / "n.pgm").heights - neg.heights).cwiseAbs().maxCoeff() <= 0.0005 + 1e-12);

  std::stringstream bad("P2\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(read_pgm(bad), FormatError);
  CHECK_THROWS(load_heightfield(dir / "missing.pgm"));
}
