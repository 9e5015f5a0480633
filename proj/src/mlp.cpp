// src/mlp.cpp

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

#include "structseq/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "structseq/error.hpp"

namespace structseq {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd> &logits) {
  if (logits.size() == 0) {
    throw InvalidArgument("softmax: empty input");
  }
  Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

int MlpParams::input_size() const {
  if (weights.empty()) {
    throw InvalidArgument("MlpParams: no layers");
  }
  return static_cast<int>(weights.front().cols()) - 1;
}

int MlpParams::output_size() const {
  if (weights.empty()) {
    throw InvalidArgument("MlpParams: no layers");
  }
  return static_cast<int>(weights.back().rows());
}

std::vector<int> MlpParams::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(input_size());
  for (const Eigen::MatrixXd &w : weights) {
    sizes.push_back(static_cast<int>(w.rows()));
  }
  return sizes;
}

void MlpParams::validate() const {
  if (weights.empty()) {
    throw ShapeError("MlpParams: no layers");
  }
  for (size_t l = 0; l < weights.size(); ++l) {
    const Eigen::MatrixXd &w = weights[l];
    if (w.rows() < 1 || w.cols() < 2) {
      throw ShapeError("MlpParams: layer " + std::to_string(l) +
                       " has shape " + std::to_string(w.rows()) + "x" +
                       std::to_string(w.cols()));
    }
    if (!w.allFinite()) {
      throw ShapeError("MlpParams: layer " + std::to_string(l) +
                       " has non-finite entries");
    }
    if (l > 0 && w.cols() != weights[l - 1].rows() + 1) {
      throw ShapeError("MlpParams: layer " + std::to_string(l) + " expects " +
                       std::to_string(w.cols() - 1) + " inputs but layer " +
                       std::to_string(l - 1) + " emits " +
                       std::to_string(weights[l - 1].rows()));
    }
  }
}

namespace {

// Affine layer on [x; 1].
Eigen::VectorXd affine(const Eigen::MatrixXd &w, const Eigen::VectorXd &x) {
  int in = static_cast<int>(w.cols()) - 1;
  return w.leftCols(in) * x + w.col(in);
}

}  // namespace

MlpTrace stack_forward(const MlpParams &params,
                       const Eigen::Ref<const Eigen::VectorXd> &input,
                       OutputHead head) {
  params.validate();
  if (input.size() != params.input_size()) {
    throw ShapeError("stack_forward: input size " +
                     std::to_string(input.size()) + " but network expects " +
                     std::to_string(params.input_size()));
  }
  if (!input.allFinite()) {
    throw NumericError("stack_forward: non-finite input");
  }
  MlpTrace trace;
  trace.input = input;
  trace.head = head;
  Eigen::VectorXd x = input;
  int last = params.num_layers() - 1;
  for (int l = 0; l < last; ++l) {
    Eigen::VectorXd z = affine(params.weights[l], x);
    x = z.unaryExpr([](double v) { return sigmoid(v); });
    trace.hidden.push_back(x);
  }
  trace.output_pre = affine(params.weights[last], x);
  switch (head) {
    case OutputHead::kSigmoid:
      trace.output =
          trace.output_pre.unaryExpr([](double v) { return sigmoid(v); });
      break;
    case OutputHead::kSoftmax:
      trace.output = softmax(trace.output_pre);
      break;
  }
  if (!trace.output.allFinite()) {
    throw NumericError("stack_forward: non-finite output");
  }
  return trace;
}

MlpGradients stack_backward(
    const MlpParams &params, const MlpTrace &trace,
    const Eigen::Ref<const Eigen::VectorXd> &output_grad) {
  int last = params.num_layers() - 1;
  if (output_grad.size() != trace.output.size()) {
    throw ShapeError("stack_backward: output_grad size " +
                     std::to_string(output_grad.size()) + " but output is " +
                     std::to_string(trace.output.size()));
  }
  // Head backward: gradient w.r.t. the final pre-activation.
  Eigen::VectorXd dz;
  switch (trace.head) {
    case OutputHead::kSigmoid:
      dz = output_grad.array() * trace.output.array() *
           (1.0 - trace.output.array());
      break;
    case OutputHead::kSoftmax: {
      const Eigen::VectorXd &p = trace.output;
      double dot = output_grad.dot(p);
      dz = p.array() * (output_grad.array() - dot);
      break;
    }
  }
  MlpGradients grads;
  grads.weights.resize(params.weights.size());
  for (int l = last; l >= 0; --l) {
    const Eigen::MatrixXd &w = params.weights[l];
    int in = static_cast<int>(w.cols()) - 1;
    const Eigen::VectorXd &x = (l == 0) ? trace.input : trace.hidden[l - 1];
    grads.weights[l].resize(w.rows(), w.cols());
    grads.weights[l].leftCols(in) = dz * x.transpose();
    grads.weights[l].col(in) = dz;
    Eigen::VectorXd dx = w.leftCols(in).transpose() * dz;
    if (l == 0) {
      grads.input = dx;
    } else {
      const Eigen::VectorXd &a = trace.hidden[l - 1];
      dz = dx.array() * a.array() * (1.0 - a.array());
    }
  }
  return grads;
}

std::pair<double, MlpTrace> mlp_forward(
    const MlpParams &params, const Eigen::Ref<const Eigen::VectorXd> &input) {
  if (!params.weights.empty() && params.weights.back().rows() != 1) {
    throw ShapeError("mlp_forward: scoring network needs a single output, "
                     "last layer emits " +
                     std::to_string(params.weights.back().rows()));
  }
  MlpTrace trace = stack_forward(params, input, OutputHead::kSigmoid);
  return {trace.output(0), trace};
}

MlpGradients mlp_backward(const MlpParams &params, const MlpTrace &trace,
                          double upstream) {
  Eigen::VectorXd g(1);
  g(0) = upstream;
  return stack_backward(params, trace, g);
}

MlpVelocity zero_velocity(const MlpParams &params) {
  MlpVelocity velocity;
  velocity.reserve(params.weights.size());
  for (const Eigen::MatrixXd &w : params.weights) {
    velocity.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  return velocity;
}

void sgd_momentum_step(MlpParams &params,
                       const std::vector<Eigen::MatrixXd> &gradients,
                       MlpVelocity &velocity, const SgdConfig &config) {
  if (gradients.size() != params.weights.size() ||
      velocity.size() != params.weights.size()) {
    throw ShapeError("sgd_momentum_step: layer count mismatch");
  }
  for (size_t l = 0; l < params.weights.size(); ++l) {
    if (gradients[l].rows() != params.weights[l].rows() ||
        gradients[l].cols() != params.weights[l].cols()) {
      throw ShapeError("sgd_momentum_step: gradient shape mismatch at layer " +
                       std::to_string(l));
    }
    velocity[l] = config.momentum * velocity[l] -
                  config.learning_rate *
                      (gradients[l] + config.l2_weight * params.weights[l]);
    params.weights[l] += velocity[l];
    if (!params.weights[l].allFinite()) {
      throw NumericError("sgd_momentum_step: non-finite weights at layer " +
                         std::to_string(l));
    }
  }
}

MlpParams init_weights(const std::vector<int> &layer_sizes,
                       std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw InvalidArgument("init_weights: need at least input and output");
  }
  for (int s : layer_sizes) {
    if (s < 1) {
      throw InvalidArgument("init_weights: layer sizes must be positive");
    }
  }
  std::mt19937_64 rng(seed);
  MlpParams params;
  for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    int in = layer_sizes[l];
    int out = layer_sizes[l + 1];
    double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd w(out, in + 1);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) {
        w(r, c) = dist(rng);
      }
    }
    w.col(in).setZero();
    params.weights.push_back(std::move(w));
  }
  return params;
}

}  // namespace structseq
