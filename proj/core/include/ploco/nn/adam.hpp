#pragma once

#include <cstdint>
#include <vector>

#include "ploco/nn/layers.hpp"

namespace ploco::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators, one pair per parameter in list order.
struct AdamState {
  AdamConfig config;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::int64_t step = 0;

  static AdamState for_parameters(const ParameterList& params, const AdamConfig& config = {});
};

/// One bias-corrected adaptive-moment update using each parameter's `grad`.
/// Throws ValidationError naming the first parameter with a non-finite
/// gradient; no parameter is modified in that case.
void adam_step(const ParameterList& params, AdamState& state);

/// Rescales all gradients so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_gradient_norm(const ParameterList& params, double max_norm);

}  // namespace ploco::nn
