#include "ploco/nn/layers.hpp"

#include <cmath>

#include "ploco/error.hpp"

namespace ploco::nn {
namespace {

Matrix sigmoid(const Matrix& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

void require_rows(const Matrix& x, Index rows, const std::string& who) {
  if (x.rows() != rows) {
    throw ValidationError(who, "expected input with " + std::to_string(rows) + " rows, got " +
                                   std::to_string(x.rows()));
  }
}

void fill_uniform(Matrix& m, Rng& rng, double limit) {
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
}

}  // namespace

void zero_grads(const ParameterList& params) {
  for (Parameter* p : params) p->zero_grad();
}

Index parameter_count(const ParameterList& params) {
  Index n = 0;
  for (const Parameter* p : params) n += p->value.size();
  return n;
}

Matrix activate(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::kTanh: return z.array().tanh().matrix();
    case Activation::kRelu: return z.cwiseMax(0.0);
    case Activation::kSigmoid: return sigmoid(z);
    case Activation::kIdentity: return z;
  }
  return z;
}

Matrix activation_slope(Activation act, const Matrix& y) {
  switch (act) {
    case Activation::kTanh: return (1.0 - y.array().square()).matrix();
    case Activation::kRelu: return (y.array() > 0.0).cast<double>().matrix();
    case Activation::kSigmoid: return (y.array() * (1.0 - y.array())).matrix();
    case Activation::kIdentity: return Matrix::Ones(y.rows(), y.cols());
  }
  return Matrix::Ones(y.rows(), y.cols());
}

Dense::Dense(const std::string& name, Index input_size, Index output_size, Activation act)
    : weight{name + ".weight", Matrix::Zero(output_size, input_size), Matrix::Zero(output_size, input_size)},
      bias{name + ".bias", Matrix::Zero(output_size, 1), Matrix::Zero(output_size, 1)},
      activation(act) {}

void Dense::initialize(Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(input_size() + output_size()));
  fill_uniform(weight.value, rng, limit);
  bias.value.setZero();
}

Matrix Dense::forward(const Matrix& x) const {
  require_rows(x, input_size(), weight.name);
  Matrix z = weight.value * x;
  z.colwise() += bias.value.col(0);
  return activate(activation, z);
}

const Matrix& Dense::forward(const Matrix& x, Cache& cache) const {
  cache.input = x;
  cache.output = forward(x);
  return cache.output;
}

Matrix Dense::backward(const Matrix& grad_output, const Cache& cache) {
  if (cache.input.size() == 0 || cache.output.cols() != grad_output.cols() ||
      grad_output.rows() != output_size()) {
    throw ValidationError(weight.name, "backward called without a matching forward trace");
  }
  const Matrix dz = activation == Activation::kIdentity
                        ? grad_output
                        : Matrix(grad_output.cwiseProduct(activation_slope(activation, cache.output)));
  weight.grad.noalias() += dz * cache.input.transpose();
  bias.grad += dz.rowwise().sum();
  return weight.value.transpose() * dz;
}

void Dense::collect(ParameterList& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

LstmCell::State LstmCell::State::zeros(Index hidden, Index batch) {
  return {Matrix::Zero(hidden, batch), Matrix::Zero(hidden, batch)};
}

LstmCell::LstmCell(const std::string& name, Index input_size, Index hidden_size)
    : w_input{name + ".w_input", Matrix::Zero(4 * hidden_size, input_size),
              Matrix::Zero(4 * hidden_size, input_size)},
      w_hidden{name + ".w_hidden", Matrix::Zero(4 * hidden_size, hidden_size),
               Matrix::Zero(4 * hidden_size, hidden_size)},
      bias{name + ".bias", Matrix::Zero(4 * hidden_size, 1), Matrix::Zero(4 * hidden_size, 1)} {}

void LstmCell::initialize(Rng& rng) {
  const double limit = 1.0 / std::sqrt(static_cast<double>(hidden_size()));
  fill_uniform(w_input.value, rng, limit);
  fill_uniform(w_hidden.value, rng, limit);
  bias.value.setZero();
  bias.value.block(hidden_size(), 0, hidden_size(), 1).setOnes();
}

LstmCell::State LstmCell::step(const Matrix& x, const State& prev) const {
  Cache cache;
  return step(x, prev, cache);
}

LstmCell::State LstmCell::step(const Matrix& x, const State& prev, Cache& cache) const {
  require_rows(x, input_size(), w_input.name);
  const Index H = hidden_size();
  Matrix z = w_input.value * x;
  z.noalias() += w_hidden.value * prev.h;
  z.colwise() += bias.value.col(0);

  cache.x = x;
  cache.h_prev = prev.h;
  cache.c_prev = prev.c;
  cache.i = sigmoid(z.topRows(H));
  cache.f = sigmoid(z.middleRows(H, H));
  cache.g = z.middleRows(2 * H, H).array().tanh().matrix();
  cache.o = sigmoid(z.bottomRows(H));
  cache.c = cache.f.cwiseProduct(prev.c) + cache.i.cwiseProduct(cache.g);
  cache.tanh_c = cache.c.array().tanh().matrix();
  return {cache.o.cwiseProduct(cache.tanh_c), cache.c};
}

LstmCell::StepGrad LstmCell::backward(const Matrix& dh, const Matrix& dc, const Cache& cache) {
  const Index H = hidden_size();
  if (cache.c.size() == 0 || cache.c.cols() != dh.cols() || dh.rows() != H || dc.rows() != H) {
    throw ValidationError(w_input.name, "backward called without a matching forward trace");
  }
  const Index B = dh.cols();
  const auto tc = cache.tanh_c.array();
  const Matrix dc_total = (dc.array() + dh.array() * cache.o.array() * (1.0 - tc.square())).matrix();

  Matrix dz(4 * H, B);
  dz.topRows(H) = (dc_total.array() * cache.g.array() * cache.i.array() * (1.0 - cache.i.array())).matrix();
  dz.middleRows(H, H) =
      (dc_total.array() * cache.c_prev.array() * cache.f.array() * (1.0 - cache.f.array())).matrix();
  dz.middleRows(2 * H, H) = (dc_total.array() * cache.i.array() * (1.0 - cache.g.array().square())).matrix();
  dz.bottomRows(H) = (dh.array() * tc * cache.o.array() * (1.0 - cache.o.array())).matrix();

  w_input.grad.noalias() += dz * cache.x.transpose();
  w_hidden.grad.noalias() += dz * cache.h_prev.transpose();
  bias.grad += dz.rowwise().sum();

  StepGrad out;
  out.dx = w_input.value.transpose() * dz;
  out.dh_prev = w_hidden.value.transpose() * dz;
  out.dc_prev = dc_total.cwiseProduct(cache.f);
  return out;
}

void LstmCell::collect(ParameterList& out) {
  out.push_back(&w_input);
  out.push_back(&w_hidden);
  out.push_back(&bias);
}

}  // namespace ploco::nn
