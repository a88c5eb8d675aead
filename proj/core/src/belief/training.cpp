#include "ploco/belief/training.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ploco/error.hpp"
#include "ploco/nn/adam.hpp"
#include "ploco/random.hpp"

namespace ploco::belief {
namespace {

void check_aligned(const SequenceBatch& b, const StudentPolicy& s) {
  const auto T = b.proprio.size();
  if (T == 0) throw ValidationError("batch", "empty sequence");
  if (b.noisy_left.size() != T || b.noisy_right.size() != T || b.clean.size() != T || b.action.size() != T ||
      b.mask.size() != T)
    throw ValidationError("batch", "sequence fields have misaligned lengths");
  const Index B = b.batch();
  const Index R = s.config().reconstruction_size();
  for (std::size_t t = 0; t < T; ++t) {
    if (b.clean[t].rows() != R || b.clean[t].cols() != B)
      throw ValidationError("batch.clean", "expected " + std::to_string(R) + " rows per step");
    if (b.action[t].rows() != static_cast<Index>(kActionSize) || b.action[t].cols() != B)
      throw ValidationError("batch.action", "expected 10 rows per step");
    if (b.mask[t].rows() != 1 || b.mask[t].cols() != B) throw ValidationError("batch.mask", "expected 1 x batch");
  }
}

double add_batch(std::vector<std::size_t>::const_iterator begin, std::vector<std::size_t>::const_iterator end,
                 const Dataset& data, StudentPolicy& student, const LossWeights& w, EvalMetrics& acc,
                 double& noisy_sq) {
  const SequenceBatch batch = make_batch(data, std::vector<std::size_t>(begin, end));
  const LossResult r = student_loss(student, batch, w, false);
  const double n = r.valid_steps;
  acc.loss += r.total * n;
  acc.imitation_mse += r.imitation_mse * n;
  acc.reconstruction_mse += r.reconstruction_mse * n;
  acc.mean_gate += r.mean_gate * n;
  const Index P = batch.noisy_left.front().rows();
  for (Index t = 0; t < batch.length(); ++t) {
    const auto m = batch.mask[t].array();
    const Matrix dl = batch.noisy_left[t] - batch.clean[t].topRows(P);
    const Matrix dr = batch.noisy_right[t] - batch.clean[t].bottomRows(P);
    noisy_sq += ((dl.array().square().colwise().sum() + dr.array().square().colwise().sum()) * m).sum();
  }
  return n;
}

}  // namespace

LossResult student_loss(StudentPolicy& student, const SequenceBatch& batch, const LossWeights& weights,
                        bool accumulate_gradients) {
  check_aligned(batch, student);
  const Index T = batch.length();
  const Index B = batch.batch();
  const double n = batch.valid_steps();
  if (n <= 0.0) throw ValidationError("batch", "no valid steps");
  const double action_scale = 1.0 / (static_cast<double>(kActionSize) * n);
  const double recon_scale = 1.0 / (static_cast<double>(student.config().reconstruction_size()) * n);

  std::vector<StudentPolicy::StepCache> caches(accumulate_gradients ? static_cast<std::size_t>(T) : 1);
  std::vector<Matrix> d_action, d_recon;
  if (accumulate_gradients) {
    d_action.resize(static_cast<std::size_t>(T));
    d_recon.resize(static_cast<std::size_t>(T));
  }

  LossResult out;
  double gate_sum = 0.0;
  auto state = student.initial_state(B);
  for (Index t = 0; t < T; ++t) {
    auto& cache = caches[accumulate_gradients ? static_cast<std::size_t>(t) : 0];
    const auto y = student.step(batch.proprio[t], batch.noisy_left[t], batch.noisy_right[t], state, cache);
    const auto mask = batch.mask[t].row(0).array();
    Matrix ea = y.action - batch.action[t];
    Matrix er = y.reconstruction - batch.clean[t];
    ea.array().rowwise() *= mask;
    er.array().rowwise() *= mask;
    out.imitation_mse += ea.squaredNorm() * action_scale;
    out.reconstruction_mse += er.squaredNorm() * recon_scale;
    gate_sum += (y.gate.array().colwise().mean() * mask).sum();
    if (accumulate_gradients) {
      d_action[static_cast<std::size_t>(t)] = (2.0 * weights.imitation * action_scale) * ea;
      d_recon[static_cast<std::size_t>(t)] = (2.0 * weights.reconstruction * recon_scale) * er;
    }
  }
  out.total = weights.imitation * out.imitation_mse + weights.reconstruction * out.reconstruction_mse;
  out.mean_gate = gate_sum / n;
  out.valid_steps = n;

  if (accumulate_gradients) {
    StudentPolicy::State carry = student.initial_state(B);
    for (Index t = T; t-- > 0;) {
      const auto k = static_cast<std::size_t>(t);
      student.backward_step(d_action[k], d_recon[k], caches[k], carry);
    }
  }
  return out;
}

EvalMetrics evaluate(StudentPolicy& student, const Dataset& data, const LossWeights& weights, int batch_size) {
  if (data.empty()) throw ValidationError("dataset", "empty dataset");
  if (batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
  std::vector<std::size_t> order(data.episodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  EvalMetrics acc;
  double noisy_sq = 0.0;
  double steps = 0.0;
  for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(batch_size)) {
    const auto end = std::min(order.size(), i + static_cast<std::size_t>(batch_size));
    steps += add_batch(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(end),
                       data, student, weights, acc, noisy_sq);
  }
  acc.loss /= steps;
  acc.imitation_mse /= steps;
  acc.reconstruction_mse /= steps;
  acc.mean_gate /= steps;
  acc.noisy_baseline_mse = noisy_sq / (steps * static_cast<double>(student.config().reconstruction_size()));
  return acc;
}

TrainResult train_student(StudentPolicy student, const Dataset& train, const Dataset& heldout,
                          const StudentTrainConfig& config, const TeacherPolicy* teacher,
                          const EpochCallback& on_epoch) {
  config.validate();
  if (train.empty()) throw ValidationError("dataset", "empty training dataset");
  const Index P = student.config().pattern_size();
  for (const Episode& e : train.episodes) e.validate(P);
  for (const Episode& e : heldout.episodes) e.validate(P);
  if (config.freeze_teacher_encoder) {
    if (teacher == nullptr) throw ValidationError("freeze_teacher_encoder", "requires a teacher");
    student.copy_encoder_from(*teacher);
    student.encoder_trainable = false;
  }
  const Dataset& eval_set = heldout.empty() ? train : heldout;
  const LossWeights weights{config.imitation_weight, config.reconstruction_weight};

  nn::ParameterList params = student.parameters();
  nn::AdamState adam = nn::AdamState::for_parameters(params, nn::AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});

  TrainResult result;
  result.initial = evaluate(student, eval_set, weights);
  result.best = student;
  double best_loss = result.initial.loss;

  std::vector<std::size_t> order(train.episodes.size());
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(epoch), 0x5EEDULL}));
    std::shuffle(order.begin(), order.end(), rng.engine());

    double loss_sum = 0.0;
    double steps = 0.0;
    const auto bs = static_cast<std::size_t>(config.batch_size);
    for (std::size_t i = 0; i < order.size(); i += bs) {
      const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(i),
                                         order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + bs)));
      const SequenceBatch batch = make_batch(train, idx);
      nn::zero_grads(params);
      const LossResult r = student_loss(student, batch, weights, true);
      if (config.gradient_clip > 0.0) nn::clip_gradient_norm(params, config.gradient_clip);
      nn::adam_step(params, adam);
      loss_sum += r.total * r.valid_steps;
      steps += r.valid_steps;
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / steps;
    m.heldout = evaluate(student, eval_set, weights);
    if (m.heldout.loss < best_loss) {
      best_loss = m.heldout.loss;
      result.best = student;
      result.best_epoch = epoch;
    }
    result.history.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  result.last = std::move(student);
  return result;
}

namespace {
constexpr const char* kMetricsHeader =
    "epoch,train_loss,heldout_loss,heldout_imitation_mse,heldout_reconstruction_mse,noisy_baseline_mse,mean_gate";
}

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history) {
  out << kMetricsHeader << '\n' << std::setprecision(17);
  for (const EpochMetrics& m : history) {
    out << m.epoch << ',' << m.train_loss << ',' << m.heldout.loss << ',' << m.heldout.imitation_mse << ','
        << m.heldout.reconstruction_mse << ',' << m.heldout.noisy_baseline_mse << ',' << m.heldout.mean_gate << '\n';
  }
}

std::vector<EpochMetrics> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw FormatError("metrics CSV: unexpected header");
  std::vector<EpochMetrics> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError("metrics CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() != 7) throw FormatError("metrics CSV line " + std::to_string(line_no) + ": expected 7 columns");
    EpochMetrics m;
    m.epoch = static_cast<int>(v[0]);
    m.train_loss = v[1];
    m.heldout = {v[2], v[3], v[4], v[5], v[6]};
    out.push_back(m);
  }
  return out;
}

void to_json(nlohmann::json& j, const EvalMetrics& m) {
  j = nlohmann::json{{"loss", m.loss},
                     {"imitation_mse", m.imitation_mse},
                     {"reconstruction_mse", m.reconstruction_mse},
                     {"noisy_baseline_mse", m.noisy_baseline_mse},
                     {"mean_gate", m.mean_gate}};
}

void from_json(const nlohmann::json& j, EvalMetrics& m) {
  m.loss = j.at("loss").get<double>();
  m.imitation_mse = j.at("imitation_mse").get<double>();
  m.reconstruction_mse = j.at("reconstruction_mse").get<double>();
  m.noisy_baseline_mse = j.at("noisy_baseline_mse").get<double>();
  m.mean_gate = j.at("mean_gate").get<double>();
}

}  // namespace ploco::belief
