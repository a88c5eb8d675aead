#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "ploco/state.hpp"

namespace ploco {

/// Terrain elevation raster. `heights(row, col)` is the elevation of the cell
/// centered at (origin.x + col * resolution, origin.y + row * resolution).
struct HeightField {
  Eigen::MatrixXd heights;
  double resolution = 0.05;
  Vec2 origin{};

  Eigen::Index rows() const { return heights.rows(); }
  Eigen::Index cols() const { return heights.cols(); }
  /// World-frame extent covered by cell centers: [min_x, max_x] x [min_y, max_y].
  double min_x() const { return origin[0]; }
  double min_y() const { return origin[1]; }
  double max_x() const { return origin[0] + static_cast<double>(cols() - 1) * resolution; }
  double max_y() const { return origin[1] + static_cast<double>(rows() - 1) * resolution; }
  bool contains(double x, double y) const {
    return x >= min_x() && x <= max_x() && y >= min_y() && y <= max_y();
  }

  void validate() const;
};

enum class TerrainMode { kHills, kEdges, kSquares, kQuantizedHills, kStairs, kFlat };

std::string_view to_string(TerrainMode mode);
TerrainMode terrain_mode_from_string(std::string_view name);

/// Perlin configuration shared by the hills-derived modes.
struct HillsParams {
  double low_frequency = 0.2;     // cycles per meter
  double high_frequency_ratio = 4.0;
  double low_weight = 0.7;
  double high_weight = 0.3;
  double max_height = 0.8;
};

struct EdgesParams {
  double level = 0.2;             // h in [0.15, 0.25]
  double frequency = 0.5;
};

struct SquaresParams {
  double side = 0.5;              // d in [0.4, 0.6]
  double min_height = 0.0;        // height range within [0, 0.4]
  double max_height = 0.4;
};

struct QuantizedHillsParams {
  double step = 0.15;             // h in [0.12, 0.18]
};

struct StairsParams {
  double run = 0.35;              // d in [0.3, 0.4]
  double rise = 0.15;             // r in [0.1, 0.22]
  int count = 10;
  double landing = 1.0;           // flat run between flights
};

struct TerrainSpec {
  TerrainMode mode = TerrainMode::kFlat;
  std::uint64_t seed = 0;
  HillsParams hills;
  EdgesParams edges;
  SquaresParams squares;
  QuantizedHillsParams quantized;
  StairsParams stairs;

  /// Draws the mode's parameters uniformly from their admissible ranges.
  static TerrainSpec random(TerrainMode mode, std::uint64_t seed);

  /// Throws ValidationError naming the parameter and its admissible range.
  void validate() const;
};

/// Gradient-lattice noise in [-1, 1]; zero at integer lattice points of
/// (x * frequency, y * frequency).
double perlin2(double x, double y, std::uint64_t seed, double frequency);

struct GridSize {
  Eigen::Index rows = 400;
  Eigen::Index cols = 400;
};

/// Generates a heightfield scaled by the terrain curriculum factor `c_t`.
/// When `origin` is empty the raster is centered on the world origin.
HeightField generate(const TerrainSpec& spec, GridSize size, double resolution, double c_t,
                     std::optional<Vec2> origin = std::nullopt);

/// Bilinear interpolation; queries outside the raster clamp to the nearest edge.
double height_at(const HeightField& field, double x, double y);

struct CurriculumState {
  double c_t = 0.0;
  double c_r = 1.0;
  std::int64_t ramp_start_step = 0;
  std::int64_t ramp_end_step = 0;
  std::int64_t reward_switch_step = 0;
  std::int64_t reward_transition_steps = 0;

  void validate() const;
};

/// Advances both curriculum factors to `global_step`.
CurriculumState curriculum_step(const CurriculumState& state, std::int64_t global_step);

// 16-bit PGM export with millimeter quantization. The header carries a
// `# ploco-heightfield resolution=<m> origin=<x>,<y> offset_mm=<int>` comment;
// a stored pixel p decodes to (p - offset_mm) / 1000 meters. Row 0 is the
// raster's lowest-y row.
void write_pgm(const HeightField& field, std::ostream& out);
HeightField read_pgm(std::istream& in);

void to_json(nlohmann::json& j, const HeightField& field);
void from_json(const nlohmann::json& j, HeightField& field);

void save_heightfield(const HeightField& field, const std::filesystem::path& path);
/// Picks the reader by extension (.pgm or .json).
HeightField load_heightfield(const std::filesystem::path& path);

}  // namespace ploco
