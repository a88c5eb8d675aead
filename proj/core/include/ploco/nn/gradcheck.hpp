#pragma once

#include <functional>
#include <string>

#include "ploco/nn/layers.hpp"

namespace ploco::nn {

struct GradCheckOptions {
  double step = 1e-5;
  /// Denominator floor of the relative error, so that gradients that are
  /// zero up to round-off are compared absolutely.
  double floor = 1e-6;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Index worst_index = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  Index checked = 0;
};

/// Compares each parameter's stored `grad` against central differences of
/// `loss`, which must recompute the scalar loss from the current parameter
/// values. Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckReport check_gradients(const ParameterList& params, const std::function<double()>& loss,
                                 const GradCheckOptions& options = {});

}  // namespace ploco::nn
