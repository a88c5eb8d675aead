#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ploco/random.hpp"
#include "ploco/state.hpp"

namespace ploco {

/// How one command component is drawn within a table row.
struct ComponentSpec {
  enum class Kind { kConstant, kPlusMinus, kUniform };
  Kind kind = Kind::kConstant;
  double value = 0.0;  // constant value, or magnitude of the +/- choice
  double lo = -1.0;    // uniform bounds
  double hi = 1.0;

  static ComponentSpec constant(double v) { return {Kind::kConstant, v, 0.0, 0.0}; }
  static ComponentSpec plus_minus(double v) { return {Kind::kPlusMinus, v, 0.0, 0.0}; }
  static ComponentSpec uniform(double lo, double hi) { return {Kind::kUniform, 0.0, lo, hi}; }
};

struct CommandRow {
  ComponentSpec v_x, v_y, omega_z;
  double weight = 0.0;  // raw table weight; normalized by the distribution
};

class CommandDistribution {
 public:
  /// Rows are kept with their raw weights; sampling uses weights divided by
  /// their sum. Throws ValidationError for empty tables or non-positive weights.
  explicit CommandDistribution(std::vector<CommandRow> rows);

  /// The velocity command randomization table: raw weights 0.15, 0.42, 0.07,
  /// 0.025 and 0.1 (summing to 0.765).
  static CommandDistribution table_default();

  const std::vector<CommandRow>& rows() const { return rows_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double raw_weight_sum() const { return raw_sum_; }

  /// Index of the row a uniform variate u in [0, 1) falls into.
  std::size_t row_for(double u) const;

 private:
  std::vector<CommandRow> rows_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
  double raw_sum_ = 0.0;
};

struct SampledCommand {
  VelocityCommand command;
  std::size_t row = 0;
};

SampledCommand sample_command_with_row(const CommandDistribution& dist, Rng& rng);
VelocityCommand sample_command(const CommandDistribution& dist, Rng& rng);

/// Step at which the mid-episode command is resampled: uniform in
/// [1, episode_length - 1]. Episodes shorter than 2 get no resample.
std::optional<std::int64_t> schedule_resample(std::int64_t episode_length, Rng& rng);

void to_json(nlohmann::json& j, const CommandDistribution& d);
CommandDistribution command_distribution_from_json(const nlohmann::json& j);

}  // namespace ploco
