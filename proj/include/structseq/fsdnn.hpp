// include/structseq/fsdnn.hpp

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

#ifndef STRUCTSEQ_FSDNN_HPP
#define STRUCTSEQ_FSDNN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "structseq/features.hpp"
#include "structseq/mlp.hpp"
#include "structseq/sdnn.hpp"
#include "structseq/types.hpp"

namespace structseq {

// Frame-wise classifier with a softmax head: raw features in, a posteriorgram
// row per frame out.
struct FrontEndParams {
  MlpParams net;

  int input_dim() const { return net.input_size(); }
  int num_labels() const { return net.output_size(); }
  void validate() const;
};

// The full pipeline: frontend posteriorgrams, psi, then the structured
// scorer whose input width is K*K + K*K (observation D equals K here).
struct FsdnnParams {
  FrontEndParams frontend;
  MlpParams scorer;

  void validate() const;
};

/// Frame-wise softmax forward; every output row sums to 1.
FrameMatrix frontend_forward(const FrontEndParams &frontend,
                             const Eigen::Ref<const FrameMatrix> &raw);

struct FsdnnTrace {
  std::vector<MlpTrace> frames;  // per-frame frontend traces
  FrameMatrix posteriorgram;
  PsiGradientBlocks blocks;
  StructuredFeature psi;
  MlpTrace scorer;
};

std::pair<double, FsdnnTrace> fsdnn_forward(
    const FsdnnParams &params, const Eigen::Ref<const FrameMatrix> &raw,
    const LabelSequence &labels);

struct FsdnnGradients {
  std::vector<Eigen::MatrixXd> frontend;
  std::vector<Eigen::MatrixXd> scorer;
};

/// Gradients of upstream * score for both networks; the scorer's input
/// gradient is routed through psi's observation blocks and the softmax.
FsdnnGradients fsdnn_backward(const FsdnnParams &params,
                              const FsdnnTrace &trace, double upstream);

/// Frontend weight gradients for a given d(loss)/d(posteriorgram);
/// recomputes the frame traces from raw.
std::vector<Eigen::MatrixXd> frontend_backward(
    const FrontEndParams &frontend, const Eigen::Ref<const FrameMatrix> &raw,
    const Eigen::Ref<const FrameMatrix> &posteriorgram_grad);

struct FrontendTrainConfig {
  int epochs = 10;
  int batch_frames = 16;
  SgdConfig sgd{0.05, 0.9, 1e-3, 0.0};
  std::uint64_t seed = 0;
};

struct FrontendTrainResult {
  FrontEndParams params;
  std::vector<double> losses;      // mean frame cross-entropy per epoch
  std::vector<double> accuracies;  // frame accuracy per epoch
};

/// Frame-wise cross-entropy pretraining from random initial weights.
FrontendTrainResult pretrain_frontend(std::span<const Utterance> corpus,
                                      const std::vector<int> &hidden_sizes,
                                      const FrontendTrainConfig &config);

struct FsdnnTrainConfig {
  SdnnTrainConfig sdnn;
  // Learning rate for the front end during joint training; 0 freezes it and
  // reproduces the plain structured-DNN trajectory bit for bit.
  double frontend_lr = 0.0;
};

struct FsdnnTrainResult {
  FsdnnParams params;
  std::vector<double> losses;
  std::vector<double> learning_rates;
  std::vector<double> dev_per;
};

FsdnnTrainResult train_fsdnn(std::span<const Utterance> train,
                             std::span<const Utterance> dev,
                             const LatticeArchive &lattices,
                             const FsdnnParams &start,
                             const FsdnnTrainConfig &config);

}  // namespace structseq

#endif  // STRUCTSEQ_FSDNN_HPP
