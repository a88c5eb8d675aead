#include "ploco/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ploco::nn {

GradCheckReport check_gradients(const ParameterList& params, const std::function<double()>& loss,
                                const GradCheckOptions& options) {
  GradCheckReport report;
  for (Parameter* p : params) {
    for (Index k = 0; k < p->value.size(); ++k) {
      double& w = p->value.data()[k];
      const double saved = w;
      w = saved + options.step;
      const double up = loss();
      w = saved - options.step;
      const double down = loss();
      w = saved;

      const double numeric = (up - down) / (2.0 * options.step);
      const double analytic = p->grad.data()[k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), options.floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++report.checked;
      if (rel > report.max_relative_error || report.worst_index < 0) {
        report.max_relative_error = std::max(rel, report.max_relative_error);
        report.worst_parameter = p->name;
        report.worst_index = k;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace ploco::nn
