#include "ploco/belief/config.hpp"

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/state.hpp"

namespace ploco::belief {

ArchitectureConfig ArchitectureConfig::desk() { return {}; }

ArchitectureConfig ArchitectureConfig::paper() {
  ArchitectureConfig c;
  c.name = "paper";
  c.pattern = RingLayout::full();
  c.encoder_widths = {256, 160, 96};
  c.belief_hidden = 256;
  c.belief_size = 192;
  c.decoder_hidden = 256;
  c.trunk_hidden = 256;
  c.trunk_layers = 2;
  return c;
}

ArchitectureConfig ArchitectureConfig::by_name(std::string_view name) {
  if (name == "desk") return desk();
  if (name == "paper") return paper();
  throw ValidationError("profile", "unknown profile '" + std::string(name) + "' (expected desk or paper)");
}

void ArchitectureConfig::validate() const {
  if (pattern.total() == 0) throw ValidationError("pattern", "empty sampling pattern");
  if (encoder_widths.empty()) throw ValidationError("encoder_widths", "need at least one layer");
  for (Index w : encoder_widths) {
    if (w < 1) throw ValidationError("encoder_widths", "widths must be positive");
  }
  if (belief_hidden < 1) throw ValidationError("belief_hidden", "must be positive");
  if (belief_size < 1) throw ValidationError("belief_size", "must be positive");
  if (decoder_hidden < 1) throw ValidationError("decoder_hidden", "must be positive");
  if (trunk_hidden < 1) throw ValidationError("trunk_hidden", "must be positive");
  if (trunk_layers < 1) throw ValidationError("trunk_layers", "must be >= 1");
}

void StudentTrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate", "must be > 0");
  if (batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
  if (epochs < 1) throw ValidationError("epochs", "must be >= 1");
  if (max_episode_length < 1) throw ValidationError("max_episode_length", "must be >= 1");
  if (!(imitation_weight >= 0.0) || !(reconstruction_weight >= 0.0) ||
      imitation_weight + reconstruction_weight <= 0.0)
    throw ValidationError("loss weights", "must be non-negative with a positive sum");
  if (!(gradient_clip >= 0.0)) throw ValidationError("gradient_clip", "must be >= 0");
}

void to_json(nlohmann::json& j, const ArchitectureConfig& c) {
  j = nlohmann::json{{"name", c.name},
                     {"pattern_radii", c.pattern.radii},
                     {"pattern_counts", c.pattern.counts},
                     {"encoder_widths", c.encoder_widths},
                     {"belief_hidden", c.belief_hidden},
                     {"belief_size", c.belief_size},
                     {"decoder_hidden", c.decoder_hidden},
                     {"decoder_uses_gated_latent", c.decoder_uses_gated_latent},
                     {"trunk_hidden", c.trunk_hidden},
                     {"trunk_layers", c.trunk_layers}};
}

void from_json(const nlohmann::json& j, ArchitectureConfig& c) {
  c = ArchitectureConfig::by_name(j.value("name", std::string("desk")));
  if (j.contains("pattern_radii")) j.at("pattern_radii").get_to(c.pattern.radii);
  if (j.contains("pattern_counts")) j.at("pattern_counts").get_to(c.pattern.counts);
  c.encoder_widths = j.value("encoder_widths", c.encoder_widths);
  c.belief_hidden = j.value("belief_hidden", c.belief_hidden);
  c.belief_size = j.value("belief_size", c.belief_size);
  c.decoder_hidden = j.value("decoder_hidden", c.decoder_hidden);
  c.decoder_uses_gated_latent = j.value("decoder_uses_gated_latent", c.decoder_uses_gated_latent);
  c.trunk_hidden = j.value("trunk_hidden", c.trunk_hidden);
  c.trunk_layers = j.value("trunk_layers", c.trunk_layers);
  c.validate();
}

void to_json(nlohmann::json& j, const StudentTrainConfig& c) {
  j = nlohmann::json{{"learning_rate", c.learning_rate},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"max_episode_length", c.max_episode_length},
                     {"imitation_weight", c.imitation_weight},
                     {"reconstruction_weight", c.reconstruction_weight},
                     {"gradient_clip", c.gradient_clip},
                     {"freeze_teacher_encoder", c.freeze_teacher_encoder},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, StudentTrainConfig& c) {
  c = StudentTrainConfig{};
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.max_episode_length = j.value("max_episode_length", c.max_episode_length);
  c.imitation_weight = j.value("imitation_weight", c.imitation_weight);
  c.reconstruction_weight = j.value("reconstruction_weight", c.reconstruction_weight);
  c.gradient_clip = j.value("gradient_clip", c.gradient_clip);
  c.freeze_teacher_encoder = j.value("freeze_teacher_encoder", c.freeze_teacher_encoder);
  c.seed = j.value("seed", c.seed);
  c.validate();
}

Matrix scale_proprio(const Matrix& proprio) {
  if (proprio.rows() != static_cast<Index>(kProprioSize))
    throw ValidationError("proprio", "expected " + std::to_string(kProprioSize) + " rows");
  Matrix out = proprio;
  out.middleRows(ProprioLayout::kMotorVelocities, kMotorCount) *= 0.1;
  out.middleRows(ProprioLayout::kJointVelocities, kPassiveJointCount) *= 0.1;
  out.middleRows(ProprioLayout::kPelvisAngularVelocity, 3) *= 0.5;
  out.row(ProprioLayout::kPelvisHeight).array() -= 0.9;
  return out;
}

}  // namespace ploco::belief
