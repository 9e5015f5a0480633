// src/fsdnn.cpp

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

#include "structseq/fsdnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "structseq/error.hpp"
#include "structseq/log.hpp"
#include "structseq/rng.hpp"

namespace structseq {

void FrontEndParams::validate() const {
  net.validate();
  if (net.output_size() < 2) {
    throw ShapeError("FrontEndParams: need at least 2 posterior outputs");
  }
}

void FsdnnParams::validate() const {
  frontend.validate();
  scorer.validate();
  int k = frontend.num_labels();
  Eigen::Index want = feature_size(FeatureOrder::kFirst, k, k);
  if (scorer.input_size() != want) {
    throw ShapeError("FsdnnParams: scorer takes " +
                     std::to_string(scorer.input_size()) +
                     " inputs, posteriorgram features need " +
                     std::to_string(want));
  }
}

FrameMatrix frontend_forward(const FrontEndParams &frontend,
                             const Eigen::Ref<const FrameMatrix> &raw) {
  frontend.validate();
  if (raw.cols() != frontend.input_dim()) {
    throw ShapeError("frontend_forward: raw frame width " +
                     std::to_string(raw.cols()) + ", network expects " +
                     std::to_string(frontend.input_dim()));
  }
  FrameMatrix post(raw.rows(), frontend.num_labels());
  for (Eigen::Index j = 0; j < raw.rows(); ++j) {
    MlpTrace trace = stack_forward(frontend.net, raw.row(j).transpose(),
                                   OutputHead::kSoftmax);
    post.row(j) = trace.output.transpose();
  }
  return post;
}

std::pair<double, FsdnnTrace> fsdnn_forward(
    const FsdnnParams &params, const Eigen::Ref<const FrameMatrix> &raw,
    const LabelSequence &labels) {
  params.validate();
  int k = params.frontend.num_labels();
  validate_pair(raw, labels, k);
  FsdnnTrace trace;
  trace.posteriorgram.resize(raw.rows(), k);
  for (Eigen::Index j = 0; j < raw.rows(); ++j) {
    MlpTrace frame = stack_forward(params.frontend.net,
                                   raw.row(j).transpose(),
                                   OutputHead::kSoftmax);
    trace.posteriorgram.row(j) = frame.output.transpose();
    trace.frames.push_back(std::move(frame));
  }
  trace.psi = psi_first_order(trace.posteriorgram, labels, k);
  trace.blocks =
      psi_gradient_blocks(labels, k, k, FeatureOrder::kFirst);
  auto [score, scorer_trace] = mlp_forward(params.scorer, trace.psi.values);
  trace.scorer = std::move(scorer_trace);
  return {score, std::move(trace)};
}

FsdnnGradients fsdnn_backward(const FsdnnParams &params,
                              const FsdnnTrace &trace, double upstream) {
  FsdnnGradients grads;
  MlpGradients scorer = mlp_backward(params.scorer, trace.scorer, upstream);
  grads.scorer = std::move(scorer.weights);
  FrameMatrix post_grad = psi_backprop_frames(trace.blocks, scorer.input);
  for (const Eigen::MatrixXd &w : params.frontend.net.weights) {
    grads.frontend.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (Eigen::Index j = 0; j < post_grad.rows(); ++j) {
    MlpGradients frame = stack_backward(params.frontend.net, trace.frames[j],
                                        post_grad.row(j).transpose());
    for (size_t l = 0; l < grads.frontend.size(); ++l) {
      grads.frontend[l] += frame.weights[l];
    }
  }
  return grads;
}

std::vector<Eigen::MatrixXd> frontend_backward(
    const FrontEndParams &frontend, const Eigen::Ref<const FrameMatrix> &raw,
    const Eigen::Ref<const FrameMatrix> &posteriorgram_grad) {
  if (posteriorgram_grad.rows() != raw.rows() ||
      posteriorgram_grad.cols() != frontend.num_labels()) {
    throw ShapeError("frontend_backward: gradient shape mismatch");
  }
  std::vector<Eigen::MatrixXd> grads;
  for (const Eigen::MatrixXd &w : frontend.net.weights) {
    grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (Eigen::Index j = 0; j < raw.rows(); ++j) {
    MlpTrace trace = stack_forward(frontend.net, raw.row(j).transpose(),
                                   OutputHead::kSoftmax);
    MlpGradients frame = stack_backward(
        frontend.net, trace, posteriorgram_grad.row(j).transpose());
    for (size_t l = 0; l < grads.size(); ++l) {
      grads[l] += frame.weights[l];
    }
  }
  return grads;
}

FrontendTrainResult pretrain_frontend(std::span<const Utterance> corpus,
                                      const std::vector<int> &hidden_sizes,
                                      const FrontendTrainConfig &config) {
  if (corpus.empty()) {
    throw ConfigError("pretrain_frontend: empty corpus");
  }
  if (config.epochs < 1 || config.batch_frames < 1) {
    throw ConfigError("pretrain_frontend: epochs and batch_frames must be "
                      "at least 1");
  }
  int d = corpus[0].frame_dim();
  int k = 0;
  for (const Utterance &utt : corpus) {
    for (int label : utt.labels) {
      k = std::max(k, label + 1);
    }
  }
  k = std::max(k, 2);

  std::vector<int> sizes;
  sizes.push_back(d);
  for (int h : hidden_sizes) {
    sizes.push_back(h);
  }
  sizes.push_back(k);
  FrontendTrainResult result;
  result.params.net = init_weights(sizes, substream(config.seed, 0xf0e));
  MlpVelocity velocity = zero_velocity(result.params.net);

  // Flat frame index over the corpus.
  std::vector<std::pair<int, int>> frames;
  for (size_t u = 0; u < corpus.size(); ++u) {
    for (int j = 0; j < corpus[u].num_frames(); ++j) {
      frames.emplace_back(static_cast<int>(u), j);
    }
  }

  SgdConfig sgd = config.sgd;
  double previous = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::mt19937_64 rng = make_rng(config.seed, 0xf0e5, epoch);
    std::shuffle(frames.begin(), frames.end(), rng);
    double epoch_loss = 0.0;
    long correct = 0;
    size_t begin = 0;
    while (begin < frames.size()) {
      size_t end = std::min(frames.size(),
                            begin + static_cast<size_t>(config.batch_frames));
      std::vector<Eigen::MatrixXd> grads;
      for (const Eigen::MatrixXd &w : result.params.net.weights) {
        grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      }
      for (size_t i = begin; i < end; ++i) {
        auto [u, j] = frames[i];
        Eigen::VectorXd input = corpus[u].frames.row(j).transpose();
        int label = corpus[u].labels[j];
        MlpTrace trace = stack_forward(result.params.net, input,
                                       OutputHead::kSoftmax);
        double p = std::max(trace.output(label), 1e-300);
        epoch_loss += -std::log(p);
        int arg = 0;
        trace.output.maxCoeff(&arg);
        if (arg == label) {
          ++correct;
        }
        // d(-log p_y)/d(output); the softmax backward collapses this to
        // output - one_hot(y) on the logits.
        Eigen::VectorXd output_grad = Eigen::VectorXd::Zero(k);
        output_grad(label) = -1.0 / p;
        MlpGradients g = stack_backward(result.params.net, trace,
                                        output_grad);
        for (size_t l = 0; l < grads.size(); ++l) {
          grads[l] += g.weights[l];
        }
      }
      double scale = 1.0 / static_cast<double>(end - begin);
      for (Eigen::MatrixXd &g : grads) {
        g *= scale;
      }
      sgd_momentum_step(result.params.net, grads, velocity, sgd);
      begin = end;
    }
    double mean_loss = epoch_loss / frames.size();
    result.losses.push_back(mean_loss);
    result.accuracies.push_back(static_cast<double>(correct) /
                                frames.size());
    Log(2) << "pretrain_frontend epoch " << epoch << " ce " << mean_loss
           << " acc " << result.accuracies.back();
    if (epoch > 0) {
      double improvement =
          (previous - mean_loss) / std::max(std::abs(previous), 1e-12);
      if (improvement < sgd.halving_threshold) {
        sgd.learning_rate *= 0.5;
      }
    }
    previous = mean_loss;
  }
  return result;
}

namespace {

// Adapts the shared sdnn loop: features come from the current front end and
// feature gradients are pushed back into it.
class FrontendClient : public StructuredTrainClient {
 public:
  FrontendClient(const FrontEndParams &start, const SgdConfig &scorer_sgd,
                 double frontend_lr)
      : frontend_(start) {
    sgd_ = scorer_sgd;
    sgd_.learning_rate = frontend_lr;
    velocity_ = zero_velocity(frontend_.net);
    reset_batch();
  }

  FrameMatrix features(const Utterance &utterance) override {
    return frontend_forward(frontend_, utterance.frames);
  }

  void on_feature_gradient(const Utterance &utterance,
                           const FrameMatrix &gradient) override {
    std::vector<Eigen::MatrixXd> g =
        frontend_backward(frontend_, utterance.frames, gradient);
    if (grads_.empty()) {
      grads_ = std::move(g);
    } else {
      for (size_t l = 0; l < grads_.size(); ++l) {
        grads_[l] += g[l];
      }
    }
  }

  void on_step(int utterances_in_batch) override {
    if (grads_.empty()) {
      reset_batch();
      return;
    }
    double scale = 1.0 / utterances_in_batch;
    for (Eigen::MatrixXd &g : grads_) {
      g *= scale;
    }
    sgd_momentum_step(frontend_.net, grads_, velocity_, sgd_);
    reset_batch();
  }

  void on_halve() override { sgd_.learning_rate *= 0.5; }

  const FrontEndParams &frontend() const { return frontend_; }

 private:
  void reset_batch() { grads_.clear(); }

  FrontEndParams frontend_;
  SgdConfig sgd_;
  MlpVelocity velocity_;
  std::vector<Eigen::MatrixXd> grads_;
};

}  // namespace

FsdnnTrainResult train_fsdnn(std::span<const Utterance> train,
                             std::span<const Utterance> dev,
                             const LatticeArchive &lattices,
                             const FsdnnParams &start,
                             const FsdnnTrainConfig &config) {
  start.validate();
  if (config.frontend_lr < 0.0) {
    throw ConfigError("train_fsdnn: frontend_lr must be nonnegative");
  }
  FrontendClient client(start.frontend, config.sdnn.sgd, config.frontend_lr);
  SdnnTrainResult scorer = train_sdnn_engine(train, dev, lattices,
                                             start.scorer, config.sdnn,
                                             client);
  FsdnnTrainResult result;
  result.params.frontend = client.frontend();
  result.params.scorer = std::move(scorer.params);
  result.losses = std::move(scorer.losses);
  result.learning_rates = std::move(scorer.learning_rates);
  result.dev_per = std::move(scorer.dev_per);
  return result;
}

}  // namespace structseq
