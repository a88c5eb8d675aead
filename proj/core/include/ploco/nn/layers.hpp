#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ploco/random.hpp"

namespace ploco::nn {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A named trainable tensor and its accumulated gradient. Biases are stored
/// as single-column matrices.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad = Matrix::Zero(value.rows(), value.cols()); }
};

using ParameterList = std::vector<Parameter*>;

void zero_grads(const ParameterList& params);
Index parameter_count(const ParameterList& params);

enum class Activation { kTanh, kRelu, kSigmoid, kIdentity };

Matrix activate(Activation act, const Matrix& z);
/// Derivative of the activation written in terms of its output.
Matrix activation_slope(Activation act, const Matrix& y);

/// Affine map followed by an elementwise activation. Inputs are column-batched:
/// `x` is (input_size x batch).
class Dense {
 public:
  struct Cache {
    Matrix input;
    Matrix output;
  };

  Dense() = default;
  Dense(const std::string& name, Index input_size, Index output_size, Activation activation);

  /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
  void initialize(Rng& rng);

  Index input_size() const { return weight.value.cols(); }
  Index output_size() const { return weight.value.rows(); }

  Matrix forward(const Matrix& x) const;
  const Matrix& forward(const Matrix& x, Cache& cache) const;
  /// Accumulates parameter gradients and returns d loss / d input.
  Matrix backward(const Matrix& grad_output, const Cache& cache);

  void collect(ParameterList& out);

  Parameter weight;
  Parameter bias;
  Activation activation = Activation::kIdentity;
};

/// Long short-term memory cell. Gate rows are stacked as [input; forget;
/// candidate; output] in the (4H x ...) weight blocks.
class LstmCell {
 public:
  struct State {
    Matrix h;
    Matrix c;

    static State zeros(Index hidden, Index batch);
  };

  struct Cache {
    Matrix x, h_prev, c_prev;
    Matrix i, f, g, o;
    Matrix c, tanh_c;
  };

  struct StepGrad {
    Matrix dx;
    Matrix dh_prev;
    Matrix dc_prev;
  };

  LstmCell() = default;
  LstmCell(const std::string& name, Index input_size, Index hidden_size);

  /// Uniform +-1/sqrt(hidden) weights, zero bias except +1 on the forget gate.
  void initialize(Rng& rng);

  Index input_size() const { return w_input.value.cols(); }
  Index hidden_size() const { return w_hidden.value.cols(); }

  State step(const Matrix& x, const State& prev) const;
  State step(const Matrix& x, const State& prev, Cache& cache) const;

  /// `dh` and `dc` are the total loss gradients w.r.t. this step's outputs.
  StepGrad backward(const Matrix& dh, const Matrix& dc, const Cache& cache);

  void collect(ParameterList& out);

  Parameter w_input;
  Parameter w_hidden;
  Parameter bias;
};

}  // namespace ploco::nn
