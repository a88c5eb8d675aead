#include "ploco/belief/networks.hpp"

#include <cmath>
#include <string>

#include "ploco/error.hpp"
#include "ploco/random.hpp"
#include "ploco/state.hpp"

namespace ploco::belief {
namespace {

constexpr Index kProprio = static_cast<Index>(kProprioSize);
constexpr Index kAction = static_cast<Index>(kActionSize);

void require_shape(const Matrix& m, Index rows, const char* field) {
  if (m.rows() != rows) {
    throw ValidationError(field, "expected " + std::to_string(rows) + " rows, got " + std::to_string(m.rows()));
  }
}

void require_batch(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (a.cols() != b.cols() || a.cols() != c.cols()) throw ValidationError("batch", "inputs disagree on batch size");
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

}  // namespace

ExteroEncoder::ExteroEncoder(const std::string& name, Index pattern_size, const std::vector<Index>& widths) {
  Index in = pattern_size;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    layers_.emplace_back(name + "." + std::to_string(k), in, widths[k], nn::Activation::kTanh);
    in = widths[k];
  }
}

void ExteroEncoder::initialize(Rng& rng) {
  for (Dense& d : layers_) d.initialize(rng);
}

Matrix ExteroEncoder::forward(const Matrix& x) const {
  Matrix h = x;
  for (const Dense& d : layers_) h = d.forward(h);
  return h;
}

Matrix ExteroEncoder::forward(const Matrix& x, Cache& cache) const {
  cache.resize(layers_.size());
  Matrix h = x;
  for (std::size_t k = 0; k < layers_.size(); ++k) h = layers_[k].forward(h, cache[k]);
  return h;
}

Matrix ExteroEncoder::backward(const Matrix& grad_output, const Cache& cache) {
  if (cache.size() != layers_.size()) throw ValidationError("encoder", "backward called without a forward trace");
  Matrix g = grad_output;
  for (std::size_t k = layers_.size(); k-- > 0;) g = layers_[k].backward(g, cache[k]);
  return g;
}

void ExteroEncoder::collect(nn::ParameterList& out) {
  for (Dense& d : layers_) d.collect(out);
}

PolicyTrunk::PolicyTrunk(const std::string& name, Index input_size, Index hidden, int layers, Index output_size)
    : head(name + ".head", hidden, output_size, nn::Activation::kIdentity) {
  Index in = input_size;
  for (int k = 0; k < layers; ++k) {
    cells.emplace_back(name + ".lstm" + std::to_string(k), in, hidden);
    in = hidden;
  }
}

void PolicyTrunk::initialize(Rng& rng) {
  for (LstmCell& c : cells) c.initialize(rng);
  head.initialize(rng);
}

PolicyTrunk::State PolicyTrunk::initial_state(Index batch) const {
  State s;
  for (const LstmCell& c : cells) s.push_back(LstmCell::State::zeros(c.hidden_size(), batch));
  return s;
}

Matrix PolicyTrunk::step(const Matrix& x, State& state) const {
  Matrix h = x;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    state[k] = cells[k].step(h, state[k]);
    h = state[k].h;
  }
  return head.forward(h);
}

Matrix PolicyTrunk::step(const Matrix& x, State& state, Cache& cache) const {
  cache.cells.resize(cells.size());
  Matrix h = x;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    state[k] = cells[k].step(h, state[k], cache.cells[k]);
    h = state[k].h;
  }
  return head.forward(h, cache.head);
}

Matrix PolicyTrunk::backward(const Matrix& grad_action, const Cache& cache, State& carry) {
  if (cache.cells.size() != cells.size()) throw ValidationError("trunk", "backward called without a forward trace");
  Matrix dh = head.backward(grad_action, cache.head);
  for (std::size_t k = cells.size(); k-- > 0;) {
    auto g = cells[k].backward(dh + carry[k].h, carry[k].c, cache.cells[k]);
    carry[k].h = std::move(g.dh_prev);
    carry[k].c = std::move(g.dc_prev);
    dh = std::move(g.dx);
  }
  return dh;
}

void PolicyTrunk::collect(nn::ParameterList& out) {
  for (LstmCell& c : cells) c.collect(out);
  head.collect(out);
}

TeacherPolicy::TeacherPolicy(const ArchitectureConfig& config) : config_(config) {
  config_.validate();
  encoder = ExteroEncoder("teacher.encoder", config_.pattern_size(), config_.encoder_widths);
  trunk = PolicyTrunk("teacher.trunk", kProprio + config_.latent_size(), config_.trunk_hidden, config_.trunk_layers,
                      kAction);
}

TeacherPolicy::State TeacherPolicy::initial_state(Index batch) const { return {trunk.initial_state(batch)}; }

Matrix TeacherPolicy::step(const Matrix& proprio, const Matrix& extero_left, const Matrix& extero_right,
                           State& state) const {
  require_shape(proprio, kProprio, "proprio");
  require_shape(extero_left, config_.pattern_size(), "extero_left");
  require_shape(extero_right, config_.pattern_size(), "extero_right");
  require_batch(proprio, extero_left, extero_right);
  const Matrix latent = stack(encoder.forward(extero_left), encoder.forward(extero_right));
  return trunk.step(stack(scale_proprio(proprio), latent), state.trunk);
}

nn::ParameterList TeacherPolicy::parameters() {
  nn::ParameterList out;
  encoder.collect(out);
  trunk.collect(out);
  return out;
}

TeacherPolicy make_synthetic_teacher(std::uint64_t seed, const ArchitectureConfig& config) {
  TeacherPolicy teacher(config);
  Rng rng(derive_seed(seed, {0x7EAC4E5ULL}));
  teacher.encoder.initialize(rng);
  teacher.trunk.initialize(rng);
  return teacher;
}

StudentPolicy::StudentPolicy(const ArchitectureConfig& config) : config_(config) {
  config_.validate();
  const Index latent = config_.latent_size();
  const Index hb = config_.belief_hidden;
  encoder = ExteroEncoder("student.encoder", config_.pattern_size(), config_.encoder_widths);
  gate = Dense("student.gate", latent + hb, latent, nn::Activation::kSigmoid);
  belief_cell = LstmCell("student.belief_lstm", latent + kProprio, hb);
  fusion = Dense("student.fusion", hb + latent, config_.belief_size, nn::Activation::kTanh);
  decoder_hidden = Dense("student.decoder.0", hb + (config_.decoder_uses_gated_latent ? latent : 0),
                         config_.decoder_hidden, nn::Activation::kTanh);
  decoder_out = Dense("student.decoder.1", config_.decoder_hidden, config_.reconstruction_size(),
                      nn::Activation::kIdentity);
  trunk = PolicyTrunk("student.trunk", kProprio + config_.belief_size, config_.trunk_hidden, config_.trunk_layers,
                      kAction);
}

void StudentPolicy::initialize(Rng& rng) {
  encoder.initialize(rng);
  gate.initialize(rng);
  belief_cell.initialize(rng);
  fusion.initialize(rng);
  decoder_hidden.initialize(rng);
  decoder_out.initialize(rng);
  trunk.initialize(rng);
}

StudentPolicy::State StudentPolicy::initial_state(Index batch) const {
  return {LstmCell::State::zeros(config_.belief_hidden, batch), trunk.initial_state(batch)};
}

StudentPolicy::Output StudentPolicy::step(const Matrix& proprio, const Matrix& noisy_left, const Matrix& noisy_right,
                                          State& state) const {
  StepCache cache;
  return step(proprio, noisy_left, noisy_right, state, cache);
}

StudentPolicy::Output StudentPolicy::step(const Matrix& proprio, const Matrix& noisy_left, const Matrix& noisy_right,
                                          State& state, StepCache& cache) const {
  require_shape(proprio, kProprio, "proprio");
  require_shape(noisy_left, config_.pattern_size(), "noisy_left");
  require_shape(noisy_right, config_.pattern_size(), "noisy_right");
  require_batch(proprio, noisy_left, noisy_right);
  const Index batch = proprio.cols();
  if (state.belief.h.cols() != batch) throw ValidationError("state", "recurrent state batch mismatch");

  cache.latent = stack(encoder.forward(noisy_left, cache.encoder_left), encoder.forward(noisy_right, cache.encoder_right));
  if (gate_override) {
    const double a = 1.0 / (1.0 + std::exp(-*gate_override));
    cache.alpha = Matrix::Constant(cache.latent.rows(), batch, a);
    cache.gate = {};
  } else {
    cache.alpha = gate.forward(stack(cache.latent, state.belief.h), cache.gate);
  }
  cache.gated = cache.alpha.cwiseProduct(cache.latent);

  const Matrix scaled = scale_proprio(proprio);
  state.belief = belief_cell.step(stack(cache.gated, scaled), state.belief, cache.belief_cell);
  const Matrix& hb = state.belief.h;

  Output out;
  out.belief = fusion.forward(stack(hb, cache.gated), cache.fusion);
  const Matrix dec_in = config_.decoder_uses_gated_latent ? stack(hb, cache.gated) : hb;
  out.reconstruction = decoder_out.forward(decoder_hidden.forward(dec_in, cache.decoder_hidden), cache.decoder_out);
  out.action = trunk.step(stack(scaled, out.belief), state.trunk, cache.trunk);
  out.gate = cache.alpha;
  return out;
}

void StudentPolicy::backward_step(const Matrix& grad_action, const Matrix& grad_reconstruction,
                                  const StepCache& cache, State& carry) {
  const Index latent = config_.latent_size();
  const Index hb_size = config_.belief_hidden;

  const Matrix d_trunk_in = trunk.backward(grad_action, cache.trunk, carry.trunk);
  const Matrix d_belief = d_trunk_in.bottomRows(config_.belief_size);

  const Matrix d_fusion_in = fusion.backward(d_belief, cache.fusion);
  Matrix d_hb = d_fusion_in.topRows(hb_size) + carry.belief.h;
  Matrix d_gated = d_fusion_in.bottomRows(latent);

  const Matrix d_dec_in = decoder_hidden.backward(decoder_out.backward(grad_reconstruction, cache.decoder_out),
                                                  cache.decoder_hidden);
  d_hb += d_dec_in.topRows(hb_size);
  if (config_.decoder_uses_gated_latent) d_gated += d_dec_in.bottomRows(latent);

  auto g = belief_cell.backward(d_hb, carry.belief.c, cache.belief_cell);
  d_gated += g.dx.topRows(latent);
  carry.belief.h = std::move(g.dh_prev);
  carry.belief.c = std::move(g.dc_prev);

  Matrix d_latent = d_gated.cwiseProduct(cache.alpha);
  if (!gate_override) {
    const Matrix d_alpha = d_gated.cwiseProduct(cache.latent);
    const Matrix d_gate_in = gate.backward(d_alpha, cache.gate);
    d_latent += d_gate_in.topRows(latent);
    carry.belief.h += d_gate_in.bottomRows(hb_size);
  }

  if (encoder_trainable) {
    const Index half = config_.foot_latent_size();
    encoder.backward(d_latent.topRows(half), cache.encoder_left);
    encoder.backward(d_latent.bottomRows(half), cache.encoder_right);
  }
}

nn::ParameterList StudentPolicy::parameters() {
  nn::ParameterList out;
  if (encoder_trainable) encoder.collect(out);
  gate.collect(out);
  belief_cell.collect(out);
  fusion.collect(out);
  decoder_hidden.collect(out);
  decoder_out.collect(out);
  trunk.collect(out);
  return out;
}

nn::ParameterList StudentPolicy::all_parameters() {
  nn::ParameterList out;
  encoder.collect(out);
  gate.collect(out);
  belief_cell.collect(out);
  fusion.collect(out);
  decoder_hidden.collect(out);
  decoder_out.collect(out);
  trunk.collect(out);
  return out;
}

void StudentPolicy::copy_encoder_from(const TeacherPolicy& teacher) {
  const auto& src = teacher.encoder.layers();
  auto& dst = encoder.layers();
  if (src.size() != dst.size()) throw ValidationError("encoder", "teacher and student encoders differ in depth");
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (src[k].weight.value.rows() != dst[k].weight.value.rows() ||
        src[k].weight.value.cols() != dst[k].weight.value.cols())
      throw ValidationError("encoder", "teacher and student encoder layer " + std::to_string(k) + " differ in shape");
    dst[k].weight.value = src[k].weight.value;
    dst[k].bias.value = src[k].bias.value;
  }
}

}  // namespace ploco::belief
