#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ploco/belief/config.hpp"
#include "ploco/nn/layers.hpp"

namespace ploco::belief {

using nn::Dense;
using nn::LstmCell;

/// Shared per-foot MLP. Applied to each foot's pattern vector with the same
/// weights; the two latents concatenate as [left; right].
class ExteroEncoder {
 public:
  using Cache = std::vector<Dense::Cache>;

  ExteroEncoder() = default;
  ExteroEncoder(const std::string& name, Index pattern_size, const std::vector<Index>& widths);

  void initialize(Rng& rng);
  Index input_size() const { return layers_.front().input_size(); }
  Index output_size() const { return layers_.back().output_size(); }

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Cache& cache) const;
  Matrix backward(const Matrix& grad_output, const Cache& cache);

  void collect(nn::ParameterList& out);
  std::vector<Dense>& layers() { return layers_; }
  const std::vector<Dense>& layers() const { return layers_; }

 private:
  std::vector<Dense> layers_;
};

/// Stacked recurrent trunk followed by a linear action head.
class PolicyTrunk {
 public:
  using State = std::vector<LstmCell::State>;
  struct Cache {
    std::vector<LstmCell::Cache> cells;
    Dense::Cache head;
  };

  PolicyTrunk() = default;
  PolicyTrunk(const std::string& name, Index input_size, Index hidden, int layers, Index output_size);

  void initialize(Rng& rng);
  State initial_state(Index batch) const;

  Matrix step(const Matrix& x, State& state) const;
  Matrix step(const Matrix& x, State& state, Cache& cache) const;

  /// Carries (dh, dc) per layer backwards in time. Returns d loss / d x.
  Matrix backward(const Matrix& grad_action, const Cache& cache, State& carry);
  State zero_carry(Index batch) const { return initial_state(batch); }

  void collect(nn::ParameterList& out);

  std::vector<LstmCell> cells;
  Dense head;
};

class TeacherPolicy {
 public:
  struct State {
    PolicyTrunk::State trunk;
  };

  TeacherPolicy() = default;
  explicit TeacherPolicy(const ArchitectureConfig& config);

  const ArchitectureConfig& config() const { return config_; }
  State initial_state(Index batch = 1) const;

  /// proprio (44 x B), extero_left / extero_right (P x B) -> action (10 x B).
  Matrix step(const Matrix& proprio, const Matrix& extero_left, const Matrix& extero_right, State& state) const;

  nn::ParameterList parameters();

  ExteroEncoder encoder;
  PolicyTrunk trunk;

 private:
  ArchitectureConfig config_;
};

/// Frozen randomly initialized teacher standing in for an RL-trained policy.
TeacherPolicy make_synthetic_teacher(std::uint64_t seed, const ArchitectureConfig& config = ArchitectureConfig::desk());

class StudentPolicy {
 public:
  struct State {
    LstmCell::State belief;
    PolicyTrunk::State trunk;
  };

  struct Output {
    Matrix action;          // 10 x B
    Matrix belief;          // belief_size x B
    Matrix reconstruction;  // 2P x B, [left; right]
    Matrix gate;            // latent x B
  };

  struct StepCache {
    ExteroEncoder::Cache encoder_left, encoder_right;
    Matrix latent;
    Dense::Cache gate;
    Matrix alpha;
    Matrix gated;
    LstmCell::Cache belief_cell;
    Dense::Cache fusion;
    Dense::Cache decoder_hidden, decoder_out;
    PolicyTrunk::Cache trunk;
  };

  StudentPolicy() = default;
  explicit StudentPolicy(const ArchitectureConfig& config);

  void initialize(Rng& rng);
  const ArchitectureConfig& config() const { return config_; }
  State initial_state(Index batch = 1) const;

  Output step(const Matrix& proprio, const Matrix& noisy_left, const Matrix& noisy_right, State& state) const;
  Output step(const Matrix& proprio, const Matrix& noisy_left, const Matrix& noisy_right, State& state,
              StepCache& cache) const;

  /// Gradients of one step given the loss gradients at its outputs and the
  /// recurrent carries arriving from step t+1. Updates `carry` in place to
  /// the gradients w.r.t. this step's incoming state.
  void backward_step(const Matrix& grad_action, const Matrix& grad_reconstruction, const StepCache& cache,
                     State& carry);

  /// Fixed gate pre-activation. -inf gives alpha = 0 exactly, +inf gives 1.
  std::optional<double> gate_override;
  /// When false, the encoder parameters receive no gradient and are left out
  /// of parameters().
  bool encoder_trainable = true;

  nn::ParameterList parameters();
  nn::ParameterList all_parameters();

  /// Copies the teacher's encoder weights. Requires matching sizes.
  void copy_encoder_from(const TeacherPolicy& teacher);

  ExteroEncoder encoder;
  Dense gate;
  LstmCell belief_cell;
  Dense fusion;
  Dense decoder_hidden;
  Dense decoder_out;
  PolicyTrunk trunk;

 private:
  ArchitectureConfig config_;
};

}  // namespace ploco::belief
