#include "ploco/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/random.hpp"

namespace ploco {
namespace {

constexpr std::uint64_t kHighOctaveSalt = 0xA24BAED4963EE407ULL;
constexpr std::uint64_t kSquaresSalt = 0x9FB21C651E98DF25ULL;

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lattice_gradient(std::uint64_t seed, std::int64_t ix, std::int64_t iy, double dx, double dy) {
  const std::uint64_t h =
      derive_seed(seed, {static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)}) & 7U;
  switch (h) {
    case 0: return dx + dy;
    case 1: return -dx + dy;
    case 2: return dx - dy;
    case 3: return -dx - dy;
    case 4: return dx;
    case 5: return -dx;
    case 6: return dy;
    default: return -dy;
  }
}

void check_range(double value, double lo, double hi, const char* name) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream msg;
    msg << "value " << value << " outside [" << lo << ", " << hi << "]";
    throw ValidationError(name, msg.str());
  }
}

Vec2 cell_center(const HeightField& f, Eigen::Index row, Eigen::Index col) {
  return {f.origin[0] + static_cast<double>(col) * f.resolution,
          f.origin[1] + static_cast<double>(row) * f.resolution};
}

/// Two-octave Perlin mix min-max normalized to [0, max_height] over the raster.
Eigen::MatrixXd normalized_hills(const HeightField& shape, const HillsParams& p, std::uint64_t seed) {
  Eigen::MatrixXd raw(shape.rows(), shape.cols());
  const double high_frequency = p.low_frequency * p.high_frequency_ratio;
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
      const Vec2 xy = cell_center(shape, r, c);
      raw(r, c) = p.low_weight * perlin2(xy[0], xy[1], seed, p.low_frequency) +
                  p.high_weight * perlin2(xy[0], xy[1], seed ^ kHighOctaveSalt, high_frequency);
    }
  }
  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  if (hi - lo <= 0.0) return Eigen::MatrixXd::Zero(raw.rows(), raw.cols());
  Eigen::MatrixXd out = (raw.array() - lo) / (hi - lo) * p.max_height;
  // Pin the extremes so the range is exact.
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (raw.data()[i] == lo) out.data()[i] = 0.0;
    if (raw.data()[i] == hi) out.data()[i] = p.max_height;
  }
  return out;
}

double stairs_height(double local_x, const StairsParams& p, double rise) {
  const double flight = static_cast<double>(p.count) * p.run;
  const double period = 2.0 * (p.landing + flight);
  double w = std::fmod(local_x, period);
  if (w < 0.0) w += period;
  auto tread = [&](double along) {
    const auto k = static_cast<int>(std::floor(along / p.run)) + 1;
    return std::min(k, p.count);
  };
  if (w < p.landing) return 0.0;
  w -= p.landing;
  if (w < flight) return tread(w) * rise;
  w -= flight;
  if (w < p.landing) return p.count * rise;
  w -= p.landing;
  return (p.count - tread(w)) * rise;
}

}  // namespace

void HeightField::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw ValidationError("resolution", "must be > 0");
  if (heights.size() == 0) throw ValidationError("heights", "empty raster");
  if (!heights.allFinite()) throw ValidationError("heights", "non-finite value");
  if (!std::isfinite(origin[0]) || !std::isfinite(origin[1])) throw ValidationError("origin", "non-finite value");
}

std::string_view to_string(TerrainMode mode) {
  switch (mode) {
    case TerrainMode::kHills: return "hills";
    case TerrainMode::kEdges: return "edges";
    case TerrainMode::kSquares: return "squares";
    case TerrainMode::kQuantizedHills: return "quantized_hills";
    case TerrainMode::kStairs: return "stairs";
    case TerrainMode::kFlat: return "flat";
  }
  return "unknown";
}

TerrainMode terrain_mode_from_string(std::string_view name) {
  for (TerrainMode m : {TerrainMode::kHills, TerrainMode::kEdges, TerrainMode::kSquares,
                        TerrainMode::kQuantizedHills, TerrainMode::kStairs, TerrainMode::kFlat}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("mode", "unknown terrain mode '" + std::string(name) + "'");
}

TerrainSpec TerrainSpec::random(TerrainMode mode, std::uint64_t seed) {
  TerrainSpec spec;
  spec.mode = mode;
  spec.seed = seed;
  Rng rng(derive_seed(seed, {0x7E44A1U}));
  spec.edges.level = rng.uniform(0.15, 0.25);
  spec.squares.side = rng.uniform(0.4, 0.6);
  spec.quantized.step = rng.uniform(0.12, 0.18);
  spec.stairs.run = rng.uniform(0.3, 0.4);
  spec.stairs.rise = rng.uniform(0.1, 0.22);
  return spec;
}

void TerrainSpec::validate() const {
  switch (mode) {
    case TerrainMode::kHills:
    case TerrainMode::kQuantizedHills:
      if (!(hills.low_frequency > 0.0)) throw ValidationError("hills.low_frequency", "must be > 0");
      if (!(hills.high_frequency_ratio > 0.0))
        throw ValidationError("hills.high_frequency_ratio", "must be > 0");
      if (hills.low_weight < 0.0 || hills.high_weight < 0.0 || hills.low_weight + hills.high_weight <= 0.0)
        throw ValidationError("hills.weights", "must be non-negative with positive sum");
      if (!(hills.max_height > 0.0)) throw ValidationError("hills.max_height", "must be > 0");
      if (mode == TerrainMode::kQuantizedHills) check_range(quantized.step, 0.12, 0.18, "quantized.step");
      break;
    case TerrainMode::kEdges:
      check_range(edges.level, 0.15, 0.25, "edges.level");
      if (!(edges.frequency > 0.0)) throw ValidationError("edges.frequency", "must be > 0");
      break;
    case TerrainMode::kSquares:
      check_range(squares.side, 0.4, 0.6, "squares.side");
      check_range(squares.min_height, 0.0, 0.4, "squares.min_height");
      check_range(squares.max_height, squares.min_height, 0.4, "squares.max_height");
      break;
    case TerrainMode::kStairs:
      check_range(stairs.run, 0.3, 0.4, "stairs.run");
      check_range(stairs.rise, 0.1, 0.22, "stairs.rise");
      if (stairs.count < 1) throw ValidationError("stairs.count", "must be >= 1");
      if (!(stairs.landing >= 0.0)) throw ValidationError("stairs.landing", "must be >= 0");
      break;
    case TerrainMode::kFlat:
      break;
  }
}

double perlin2(double x, double y, std::uint64_t seed, double frequency) {
  const double fx = x * frequency;
  const double fy = y * frequency;
  const double x0 = std::floor(fx);
  const double y0 = std::floor(fy);
  const double dx = fx - x0;
  const double dy = fy - y0;
  const auto ix = static_cast<std::int64_t>(x0);
  const auto iy = static_cast<std::int64_t>(y0);

  const double n00 = lattice_gradient(seed, ix, iy, dx, dy);
  const double n10 = lattice_gradient(seed, ix + 1, iy, dx - 1.0, dy);
  const double n01 = lattice_gradient(seed, ix, iy + 1, dx, dy - 1.0);
  const double n11 = lattice_gradient(seed, ix + 1, iy + 1, dx - 1.0, dy - 1.0);

  const double u = fade(dx);
  const double v = fade(dy);
  const double nx0 = n00 + u * (n10 - n00);
  const double nx1 = n01 + u * (n11 - n01);
  return std::clamp(nx0 + v * (nx1 - nx0), -1.0, 1.0);
}

HeightField generate(const TerrainSpec& spec, GridSize size, double resolution, double c_t,
                     std::optional<Vec2> origin) {
  spec.validate();
  if (size.rows < 1 || size.cols < 1) throw ValidationError("size", "rows and cols must be >= 1");
  if (!(resolution > 0.0)) throw ValidationError("resolution", "must be > 0");
  check_range(c_t, 0.0, 1.0, "c_t");

  HeightField field;
  field.resolution = resolution;
  field.origin = origin.value_or(Vec2{-0.5 * static_cast<double>(size.cols - 1) * resolution,
                                      -0.5 * static_cast<double>(size.rows - 1) * resolution});
  field.heights = Eigen::MatrixXd::Zero(size.rows, size.cols);

  switch (spec.mode) {
    case TerrainMode::kFlat:
      break;
    case TerrainMode::kHills:
      field.heights = normalized_hills(field, spec.hills, spec.seed) * c_t;
      break;
    case TerrainMode::kQuantizedHills: {
      const Eigen::MatrixXd raw = normalized_hills(field, spec.hills, spec.seed);
      const double level = spec.quantized.step * c_t;
      for (Eigen::Index i = 0; i < raw.size(); ++i) {
        field.heights.data()[i] = std::floor(raw.data()[i] / spec.quantized.step) * level;
      }
      break;
    }
    case TerrainMode::kEdges: {
      const double level = spec.edges.level * c_t;
      for (Eigen::Index r = 0; r < field.rows(); ++r) {
        for (Eigen::Index c = 0; c < field.cols(); ++c) {
          const Vec2 xy = cell_center(field, r, c);
          field.heights(r, c) = perlin2(xy[0], xy[1], spec.seed, spec.edges.frequency) > 0.0 ? level : 0.0;
        }
      }
      break;
    }
    case TerrainMode::kSquares: {
      const auto& p = spec.squares;
      for (Eigen::Index r = 0; r < field.rows(); ++r) {
        for (Eigen::Index c = 0; c < field.cols(); ++c) {
          const Vec2 xy = cell_center(field, r, c);
          const auto ix = static_cast<std::int64_t>(std::floor((xy[0] - field.origin[0]) / p.side));
          const auto iy = static_cast<std::int64_t>(std::floor((xy[1] - field.origin[1]) / p.side));
          const double u = unit_from_bits(derive_seed(
              spec.seed ^ kSquaresSalt, {static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)}));
          field.heights(r, c) = (p.min_height + (p.max_height - p.min_height) * u) * c_t;
        }
      }
      break;
    }
    case TerrainMode::kStairs: {
      const double rise = spec.stairs.rise * c_t;
      for (Eigen::Index c = 0; c < field.cols(); ++c) {
        const double local_x = static_cast<double>(c) * resolution;
        field.heights.col(c).setConstant(stairs_height(local_x, spec.stairs, rise));
      }
      break;
    }
  }
  return field;
}

double height_at(const HeightField& field, double x, double y) {
  const double max_col = static_cast<double>(field.cols() - 1);
  const double max_row = static_cast<double>(field.rows() - 1);
  const double fc = std::clamp((x - field.origin[0]) / field.resolution, 0.0, max_col);
  const double fr = std::clamp((y - field.origin[1]) / field.resolution, 0.0, max_row);
  const auto c0 = static_cast<Eigen::Index>(std::floor(fc));
  const auto r0 = static_cast<Eigen::Index>(std::floor(fr));
  const Eigen::Index c1 = std::min<Eigen::Index>(c0 + 1, field.cols() - 1);
  const Eigen::Index r1 = std::min<Eigen::Index>(r0 + 1, field.rows() - 1);
  const double tc = fc - static_cast<double>(c0);
  const double tr = fr - static_cast<double>(r0);
  const auto& h = field.heights;
  if (tc == 0.0 && tr == 0.0) return h(r0, c0);
  const double low = h(r0, c0) + tc * (h(r0, c1) - h(r0, c0));
  const double high = h(r1, c0) + tc * (h(r1, c1) - h(r1, c0));
  return low + tr * (high - low);
}

void CurriculumState::validate() const {
  check_range(c_t, 0.0, 1.0, "c_t");
  check_range(c_r, 0.0, 1.0, "c_r");
  if (ramp_start_step > ramp_end_step) throw ValidationError("ramp_start_step", "must be <= ramp_end_step");
  if (reward_transition_steps < 0) throw ValidationError("reward_transition_steps", "must be >= 0");
}

CurriculumState curriculum_step(const CurriculumState& state, std::int64_t global_step) {
  if (global_step < 0) throw ValidationError("global_step", "must be >= 0");
  state.validate();
  CurriculumState next = state;
  if (state.ramp_end_step == state.ramp_start_step) {
    next.c_t = global_step >= state.ramp_start_step ? 1.0 : 0.0;
  } else {
    const double span = static_cast<double>(state.ramp_end_step - state.ramp_start_step);
    next.c_t = std::clamp(static_cast<double>(global_step - state.ramp_start_step) / span, 0.0, 1.0);
  }
  if (state.reward_transition_steps == 0) {
    next.c_r = global_step >= state.reward_switch_step ? 0.0 : 1.0;
  } else {
    const double progress = static_cast<double>(global_step - state.reward_switch_step) /
                            static_cast<double>(state.reward_transition_steps);
    next.c_r = 1.0 - std::clamp(progress, 0.0, 1.0);
  }
  return next;
}

void write_pgm(const HeightField& field, std::ostream& out) {
  field.validate();
  const auto to_mm = [](double h) { return static_cast<long long>(std::llround(h * 1000.0)); };
  const long long min_mm = to_mm(field.heights.minCoeff());
  const long long max_mm = to_mm(field.heights.maxCoeff());
  const long long offset = min_mm < 0 ? -min_mm : 0;
  if (max_mm + offset > 65535) throw ValidationError("heights", "range exceeds 65.535 m of 16-bit PGM");

  std::ostringstream header;
  header.precision(17);
  header << "P5\n# ploco-heightfield resolution=" << field.resolution << " origin=" << field.origin[0] << ','
         << field.origin[1] << " offset_mm=" << offset << '\n'
         << field.cols() << ' ' << field.rows() << "\n65535\n";
  out << header.str();
  for (Eigen::Index r = 0; r < field.rows(); ++r) {
    for (Eigen::Index c = 0; c < field.cols(); ++c) {
      const auto v = static_cast<std::uint16_t>(to_mm(field.heights(r, c)) + offset);
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xFF)};
      out.write(bytes, 2);
    }
  }
  if (!out) throw FormatError("failed writing PGM");
}

HeightField read_pgm(std::istream& in) {
  HeightField field;
  long long offset = 0;
  auto next_token = [&]() {
    std::string token;
    while (true) {
      int ch = in.peek();
      if (ch == EOF) throw FormatError("PGM: truncated header");
      if (std::isspace(ch)) {
        in.get();
        continue;
      }
      if (ch == '#') {
        std::string comment;
        std::getline(in, comment);
        std::istringstream cs(comment.substr(1));
        std::string word;
        cs >> word;
        if (word == "ploco-heightfield") {
          while (cs >> word) {
            const auto eq = word.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = word.substr(0, eq);
            const std::string value = word.substr(eq + 1);
            if (key == "resolution") {
              field.resolution = std::stod(value);
            } else if (key == "origin") {
              const auto comma = value.find(',');
              if (comma == std::string::npos) throw FormatError("PGM: malformed origin");
              field.origin = {std::stod(value.substr(0, comma)), std::stod(value.substr(comma + 1))};
            } else if (key == "offset_mm") {
              offset = std::stoll(value);
            }
          }
        }
        continue;
      }
      break;
    }
    in >> token;
    return token;
  };

  if (next_token() != "P5") throw FormatError("PGM: expected binary P5 magic");
  const long cols = std::stol(next_token());
  const long rows = std::stol(next_token());
  const long maxval = std::stol(next_token());
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535) throw FormatError("PGM: bad dimensions");
  in.get();  // single whitespace before the raster

  const bool wide = maxval > 255;
  field.heights.resize(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      unsigned value = 0;
      if (wide) {
        unsigned char bytes[2];
        if (!in.read(reinterpret_cast<char*>(bytes), 2)) throw FormatError("PGM: truncated raster");
        value = (static_cast<unsigned>(bytes[0]) << 8) | bytes[1];
      } else {
        unsigned char byte;
        if (!in.read(reinterpret_cast<char*>(&byte), 1)) throw FormatError("PGM: truncated raster");
        value = byte;
      }
      field.heights(r, c) = static_cast<double>(static_cast<long long>(value) - offset) / 1000.0;
    }
  }
  field.validate();
  return field;
}

void to_json(nlohmann::json& j, const HeightField& field) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(field.heights.size()));
  for (Eigen::Index r = 0; r < field.rows(); ++r) {
    for (Eigen::Index c = 0; c < field.cols(); ++c) data.push_back(field.heights(r, c));
  }
  j = nlohmann::json{{"format", "ploco-heightfield"}, {"version", 1},
                     {"rows", field.rows()},          {"cols", field.cols()},
                     {"resolution", field.resolution}, {"origin", field.origin},
                     {"heights", std::move(data)}};
}

void from_json(const nlohmann::json& j, HeightField& field) {
  if (j.value("format", std::string{}) != "ploco-heightfield") throw FormatError("not a ploco heightfield");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("heights").get<std::vector<double>>();
  if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw FormatError("heightfield: data size does not match rows x cols");
  field.heights.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) field.heights(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  field.resolution = j.at("resolution").get<double>();
  field.origin = j.at("origin").get<Vec2>();
  field.validate();
}

void save_heightfield(const HeightField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".pgm") {
    write_pgm(field, out);
  } else {
    out << nlohmann::json(field).dump() << '\n';
  }
}

HeightField load_heightfield(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  if (path.extension() == ".pgm") return read_pgm(in);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return j.get<HeightField>();
}

}  // namespace ploco
