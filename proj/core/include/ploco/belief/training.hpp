#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ploco/belief/config.hpp"
#include "ploco/belief/dataset.hpp"
#include "ploco/belief/networks.hpp"

namespace ploco::belief {

struct LossWeights {
  double imitation = 1.0;
  double reconstruction = 0.5;
};

struct LossResult {
  double total = 0.0;
  double imitation_mse = 0.0;
  double reconstruction_mse = 0.0;
  double mean_gate = 0.0;
  double valid_steps = 0.0;
};

/// w_im * MSE(action, teacher) + w_rec * MSE(reconstruction, clean), each
/// averaged over valid steps, batch and output size. With
/// `accumulate_gradients`, adds d loss / d theta to every parameter's grad.
LossResult student_loss(StudentPolicy& student, const SequenceBatch& batch, const LossWeights& weights,
                        bool accumulate_gradients);

struct EvalMetrics {
  double loss = 0.0;
  double imitation_mse = 0.0;
  double reconstruction_mse = 0.0;
  /// MSE of the noisy observations themselves against the clean targets.
  double noisy_baseline_mse = 0.0;
  double mean_gate = 0.0;
};

EvalMetrics evaluate(StudentPolicy& student, const Dataset& data, const LossWeights& weights, int batch_size = 32);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  EvalMetrics heldout;
};

struct TrainResult {
  StudentPolicy best;
  StudentPolicy last;
  EvalMetrics initial;
  std::vector<EpochMetrics> history;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Mini-batches of whole sequences, one Adam step per batch. The student
/// with the lowest held-out loss is retained. `teacher` is required only when
/// config.freeze_teacher_encoder is set.
TrainResult train_student(StudentPolicy student, const Dataset& train, const Dataset& heldout,
                          const StudentTrainConfig& config, const TeacherPolicy* teacher = nullptr,
                          const EpochCallback& on_epoch = {});

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history);
std::vector<EpochMetrics> read_metrics_csv(std::istream& in);

void to_json(nlohmann::json& j, const EvalMetrics& m);
void from_json(const nlohmann::json& j, EvalMetrics& m);

}  // namespace ploco::belief
