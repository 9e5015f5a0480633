// include/structseq/mlp.hpp

// Copyright 2026  The structseq authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRUCTSEQ_MLP_HPP
#define STRUCTSEQ_MLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "structseq/types.hpp"

namespace structseq {

double sigmoid(double z);

/// Numerically shifted softmax; entries sum to 1.
Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd> &logits);

// A stack of affine layers. weights[l] has shape out x (in + 1); the last
// column is the bias, applied to a constant-1 input. Hidden layers take a
// logistic sigmoid; the output head is chosen at the call site.
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_size() const;
  int output_size() const;
  std::vector<int> layer_sizes() const;

  /// Throws ShapeError unless adjacent layer dimensions chain and all
  /// entries are finite.
  void validate() const;
};

enum class OutputHead { kSigmoid, kSoftmax };

// Everything the backward pass needs: the input, each hidden layer's
// post-sigmoid activation, the final pre-activation and the head output.
struct MlpTrace {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> hidden;
  Eigen::VectorXd output_pre;
  Eigen::VectorXd output;
  OutputHead head = OutputHead::kSigmoid;
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  Eigen::VectorXd input;
};

MlpTrace stack_forward(const MlpParams &params,
                       const Eigen::Ref<const Eigen::VectorXd> &input,
                       OutputHead head);

/// Backward pass from a gradient w.r.t. the head output (post-activation).
MlpGradients stack_backward(
    const MlpParams &params, const MlpTrace &trace,
    const Eigen::Ref<const Eigen::VectorXd> &output_grad);

/// Scalar scoring network: every layer sigmoid, last weight matrix a single
/// row, score strictly inside (0, 1).
std::pair<double, MlpTrace> mlp_forward(
    const MlpParams &params, const Eigen::Ref<const Eigen::VectorXd> &input);

/// Gradients of upstream * score w.r.t. all weights and the input.
MlpGradients mlp_backward(const MlpParams &params, const MlpTrace &trace,
                          double upstream);

struct SgdConfig {
  double learning_rate = 4e-6;
  double momentum = 0.9;
  // Halve the learning rate when the relative epoch-loss improvement drops
  // below this.
  double halving_threshold = 1e-3;
  double l2_weight = 0.0;
};

using MlpVelocity = std::vector<Eigen::MatrixXd>;

MlpVelocity zero_velocity(const MlpParams &params);

/// velocity <- momentum*velocity - lr*(grad + l2*param); param += velocity.
void sgd_momentum_step(MlpParams &params,
                       const std::vector<Eigen::MatrixXd> &gradients,
                       MlpVelocity &velocity, const SgdConfig &config);

/// Glorot-uniform weights, zero biases, deterministic in the seed.
/// layer_sizes runs input, hidden..., output.
MlpParams init_weights(const std::vector<int> &layer_sizes,
                       std::uint64_t seed);

}  // namespace structseq

#endif  // STRUCTSEQ_MLP_HPP
