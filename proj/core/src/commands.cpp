#include "ploco/commands.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"

namespace ploco {
namespace {

double draw(const ComponentSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ComponentSpec::Kind::kConstant: return spec.value;
    case ComponentSpec::Kind::kPlusMinus: return rng.bernoulli(0.5) ? spec.value : -spec.value;
    case ComponentSpec::Kind::kUniform: return rng.uniform(spec.lo, spec.hi);
  }
  return 0.0;
}

nlohmann::json spec_to_json(const ComponentSpec& s) {
  switch (s.kind) {
    case ComponentSpec::Kind::kConstant: return {{"kind", "constant"}, {"value", s.value}};
    case ComponentSpec::Kind::kPlusMinus: return {{"kind", "plus_minus"}, {"value", s.value}};
    case ComponentSpec::Kind::kUniform: return {{"kind", "uniform"}, {"lo", s.lo}, {"hi", s.hi}};
  }
  return {};
}

ComponentSpec spec_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ComponentSpec::constant(j.at("value").get<double>());
  if (kind == "plus_minus") return ComponentSpec::plus_minus(j.at("value").get<double>());
  if (kind == "uniform") return ComponentSpec::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  throw FormatError("unknown command component kind '" + kind + "'");
}

}  // namespace

CommandDistribution::CommandDistribution(std::vector<CommandRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("rows", "command table is empty");
  for (const auto& row : rows_) {
    if (!(row.weight > 0.0) || !std::isfinite(row.weight)) throw ValidationError("weight", "must be positive");
    raw_sum_ += row.weight;
  }
  double running = 0.0;
  for (const auto& row : rows_) {
    probabilities_.push_back(row.weight / raw_sum_);
    running += row.weight;
    cumulative_.push_back(running / raw_sum_);
  }
  cumulative_.back() = 1.0;
}

CommandDistribution CommandDistribution::table_default() {
  using C = ComponentSpec;
  return CommandDistribution({
      {C::constant(0), C::constant(0), C::constant(0), 0.15},
      {C::plus_minus(1), C::constant(0), C::constant(0), 0.42},
      {C::constant(0), C::plus_minus(1), C::constant(0), 0.07},
      {C::constant(0), C::constant(0), C::plus_minus(1), 0.025},
      {C::uniform(-1, 1), C::uniform(-1, 1), C::uniform(-1, 1), 0.1},
  });
}

std::size_t CommandDistribution::row_for(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), rows_.size() - 1);
}

SampledCommand sample_command_with_row(const CommandDistribution& dist, Rng& rng) {
  SampledCommand out;
  out.row = dist.row_for(rng.uniform());
  const CommandRow& row = dist.rows()[out.row];
  out.command.linear[0] = draw(row.v_x, rng);
  out.command.linear[1] = draw(row.v_y, rng);
  out.command.yaw_rate = draw(row.omega_z, rng);
  return out;
}

VelocityCommand sample_command(const CommandDistribution& dist, Rng& rng) {
  return sample_command_with_row(dist, rng).command;
}

std::optional<std::int64_t> schedule_resample(std::int64_t episode_length, Rng& rng) {
  if (episode_length < 2) return std::nullopt;
  return rng.integer(1, episode_length - 1);
}

void to_json(nlohmann::json& j, const CommandDistribution& d) {
  j = nlohmann::json::array();
  for (const auto& row : d.rows()) {
    j.push_back({{"v_x", spec_to_json(row.v_x)},
                 {"v_y", spec_to_json(row.v_y)},
                 {"omega_z", spec_to_json(row.omega_z)},
                 {"weight", row.weight}});
  }
}

CommandDistribution command_distribution_from_json(const nlohmann::json& j) {
  std::vector<CommandRow> rows;
  for (const auto& r : j) {
    rows.push_back({spec_from_json(r.at("v_x")), spec_from_json(r.at("v_y")), spec_from_json(r.at("omega_z")),
                    r.at("weight").get<double>()});
  }
  return CommandDistribution(std::move(rows));
}

}  // namespace ploco
