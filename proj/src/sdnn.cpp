// src/sdnn.cpp

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

#include "structseq/sdnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "structseq/error.hpp"
#include "structseq/features.hpp"
#include "structseq/log.hpp"
#include "structseq/metrics.hpp"
#include "structseq/rng.hpp"

namespace structseq {

std::pair<double, double> loss_approx_acc(double score, double target_c) {
  double gap = target_c - score;
  return {gap * gap, -2.0 * gap};
}

MarginLossResult loss_max_margin(double pos_score,
                                 const std::vector<MarginTerm> &negatives) {
  MarginLossResult result;
  result.active.resize(negatives.size(), 0);
  for (size_t i = 0; i < negatives.size(); ++i) {
    if (negatives[i].delta_value < 0.0) {
      throw InvalidArgument("loss_max_margin: negative distance");
    }
    double hinge =
        negatives[i].neg_score + negatives[i].delta_value - pos_score;
    if (hinge > 0.0) {
      result.loss += hinge;
      result.active[i] = 1;
      result.pos_grad -= 1.0;
    }
  }
  return result;
}

TrainingExampleSet build_examples(const Utterance &utterance,
                                  const Lattice &lattice,
                                  const SdnnTrainConfig &config,
                                  std::mt19937_64 &rng) {
  if (config.n_negative < 1) {
    throw ConfigError("build_examples: n_negative must be at least 1");
  }
  if (lattice.num_frames() != utterance.num_frames()) {
    throw ShapeError("build_examples: lattice has " +
                     std::to_string(lattice.num_frames()) +
                     " frames, utterance " + utterance.id + " has " +
                     std::to_string(utterance.num_frames()));
  }
  TrainingExampleSet set;
  set.reference = utterance.labels;
  auto add = [&](LabelSequence labels, NegativeSource source) {
    if (labels == set.reference) {
      return;
    }
    NegativeExample neg;
    neg.delta_value =
        delta(set.reference, labels, DistanceKind::kPhoneEdit);
    neg.labels = std::move(labels);
    neg.source = source;
    set.negatives.push_back(std::move(neg));
  };
  for (int i = 0; i < config.n_negative; ++i) {
    add(random_sequence(lattice.num_labels(), lattice.num_frames(), rng),
        NegativeSource::kRandom);
  }
  for (int i = 0; i < config.n_negative; ++i) {
    add(random_lattice_path(lattice, rng).labels,
        NegativeSource::kLatticeRandom);
  }
  for (ScoredPath &path : nbest(lattice, config.n_negative)) {
    add(std::move(path.labels), NegativeSource::kLatticeNbest);
  }
  return set;
}

namespace {

void check_scorer(const MlpParams &scorer,
                  const Eigen::Ref<const FrameMatrix> &features,
                  int num_labels, const char *who) {
  Eigen::Index want = feature_size(
      FeatureOrder::kFirst, static_cast<int>(features.cols()), num_labels);
  if (scorer.input_size() != want) {
    throw ShapeError(std::string(who) + ": scorer takes " +
                     std::to_string(scorer.input_size()) +
                     " inputs, features need " + std::to_string(want));
  }
}

// Forward one candidate sequence and optionally pull gradients back to the
// scorer weights and the observation matrix.
struct TermBackward {
  const MlpParams *scorer = nullptr;
  int frame_dim = 0;
  int num_labels = 0;
  std::vector<Eigen::MatrixXd> *weight_grads = nullptr;
  FrameMatrix *feature_grad = nullptr;

  void apply(const LabelSequence &labels, const MlpTrace &trace,
             double upstream) const {
    if (upstream == 0.0 ||
        (weight_grads == nullptr && feature_grad == nullptr)) {
      return;
    }
    MlpGradients grads = mlp_backward(*scorer, trace, upstream);
    if (weight_grads != nullptr) {
      for (size_t l = 0; l < grads.weights.size(); ++l) {
        (*weight_grads)[l] += grads.weights[l];
      }
    }
    if (feature_grad != nullptr) {
      PsiGradientBlocks blocks = psi_gradient_blocks(
          labels, num_labels, frame_dim, FeatureOrder::kFirst);
      *feature_grad += psi_backprop_frames(blocks, grads.input);
    }
  }
};

}  // namespace

double sdnn_example_pass(const MlpParams &scorer,
                         const Eigen::Ref<const FrameMatrix> &features,
                         const TrainingExampleSet &examples, SdnnLoss loss,
                         int num_labels,
                         std::vector<Eigen::MatrixXd> *weight_grads,
                         FrameMatrix *feature_grad) {
  check_scorer(scorer, features, num_labels, "sdnn_example_pass");
  TermBackward backward{&scorer, static_cast<int>(features.cols()),
                        num_labels, weight_grads, feature_grad};

  StructuredFeature pos_psi =
      psi_first_order(features, examples.reference, num_labels);
  auto [pos_score, pos_trace] = mlp_forward(scorer, pos_psi.values);

  std::vector<double> neg_scores;
  std::vector<MlpTrace> neg_traces;
  neg_scores.reserve(examples.negatives.size());
  for (const NegativeExample &neg : examples.negatives) {
    StructuredFeature psi = psi_first_order(features, neg.labels, num_labels);
    auto [score, trace] = mlp_forward(scorer, psi.values);
    neg_scores.push_back(score);
    neg_traces.push_back(std::move(trace));
  }

  double total = 0.0;
  switch (loss) {
    case SdnnLoss::kApproxAcc: {
      auto [pos_loss, pos_grad] = loss_approx_acc(pos_score, 1.0);
      total += pos_loss;
      backward.apply(examples.reference, pos_trace, pos_grad);
      for (size_t i = 0; i < examples.negatives.size(); ++i) {
        double target = std::clamp(
            1.0 - examples.negatives[i].delta_value, 0.0, 1.0);
        auto [neg_loss, neg_grad] = loss_approx_acc(neg_scores[i], target);
        total += neg_loss;
        backward.apply(examples.negatives[i].labels, neg_traces[i], neg_grad);
      }
      break;
    }
    case SdnnLoss::kMaxMargin: {
      std::vector<MarginTerm> terms(examples.negatives.size());
      for (size_t i = 0; i < terms.size(); ++i) {
        terms[i] = {neg_scores[i], examples.negatives[i].delta_value};
      }
      MarginLossResult margin = loss_max_margin(pos_score, terms);
      total = margin.loss;
      backward.apply(examples.reference, pos_trace, margin.pos_grad);
      for (size_t i = 0; i < terms.size(); ++i) {
        if (margin.active[i]) {
          backward.apply(examples.negatives[i].labels, neg_traces[i], 1.0);
        }
      }
      break;
    }
  }
  return total;
}

namespace {

double rescoring_per(std::span<const Utterance> utts,
                     const LatticeArchive &lattices, const MlpParams &scorer,
                     int n, StructuredTrainClient &client) {
  std::vector<LabelSequence> refs;
  std::vector<LabelSequence> hyps;
  for (const Utterance &utt : utts) {
    const Lattice &lattice = lattices.lattices[lattices.find(utt.id)];
    FrameMatrix features = client.features(utt);
    refs.push_back(utt.labels);
    hyps.push_back(rescore_decode(features, lattice, scorer, n));
  }
  return corpus_per(refs, hyps);
}

}  // namespace

SdnnTrainResult train_sdnn_engine(std::span<const Utterance> train,
                                  std::span<const Utterance> dev,
                                  const LatticeArchive &lattices,
                                  const MlpParams &start,
                                  const SdnnTrainConfig &config,
                                  StructuredTrainClient &client) {
  if (train.empty()) {
    throw ConfigError("train_sdnn: empty corpus");
  }
  if (config.epochs < 1 || config.batch_size < 1 || config.n_negative < 1 ||
      config.rescore_n < 1) {
    throw ConfigError("train_sdnn: epochs, batch_size, n_negative and "
                      "rescore_n must be at least 1");
  }
  start.validate();
  {
    FrameMatrix probe = client.features(train[0]);
    const Lattice &lat = lattices.lattices[lattices.find(train[0].id)];
    Eigen::Index want = feature_size(
        FeatureOrder::kFirst, static_cast<int>(probe.cols()),
        lat.num_labels());
    if (start.input_size() != want) {
      throw ConfigError("train_sdnn: scorer takes " +
                        std::to_string(start.input_size()) +
                        " inputs, features need " + std::to_string(want));
    }
  }

  SdnnTrainResult result;
  result.params = start;
  MlpVelocity velocity = zero_velocity(result.params);
  SgdConfig sgd = config.sgd;
  int n = static_cast<int>(train.size());
  double previous = std::numeric_limits<double>::infinity();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng = make_rng(config.seed, 0x0bde, epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (int begin = 0; begin < n; begin += config.batch_size) {
      int end = std::min(n, begin + config.batch_size);
      std::vector<Eigen::MatrixXd> grads;
      for (const Eigen::MatrixXd &w : result.params.weights) {
        grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      }
      for (int pos = begin; pos < end; ++pos) {
        int i = order[pos];
        const Utterance &utt = train[i];
        const Lattice &lattice = lattices.lattices[lattices.find(utt.id)];
        std::mt19937_64 rng = make_rng(
            config.seed, 0xe6a,
            (static_cast<std::uint64_t>(epoch) << 32) |
                static_cast<std::uint64_t>(i));
        TrainingExampleSet examples =
            build_examples(utt, lattice, config, rng);
        FrameMatrix features = client.features(utt);
        FrameMatrix feature_grad =
            FrameMatrix::Zero(features.rows(), features.cols());
        epoch_loss += sdnn_example_pass(result.params, features, examples,
                                        config.loss, lattice.num_labels(),
                                        &grads, &feature_grad);
        client.on_feature_gradient(utt, feature_grad);
      }
      double scale = 1.0 / (end - begin);
      for (Eigen::MatrixXd &g : grads) {
        g *= scale;
      }
      sgd_momentum_step(result.params, grads, velocity, sgd);
      client.on_step(end - begin);
    }
    double mean_loss = epoch_loss / n;
    result.losses.push_back(mean_loss);
    result.learning_rates.push_back(sgd.learning_rate);
    result.dev_per.push_back(
        dev.empty() ? std::numeric_limits<double>::quiet_NaN()
                    : rescoring_per(dev, lattices, result.params,
                                    config.rescore_n, client));
    Log(2) << "train_sdnn epoch " << epoch << " loss " << mean_loss << " lr "
           << sgd.learning_rate;
    if (epoch > 0) {
      double improvement =
          (previous - mean_loss) / std::max(std::abs(previous), 1e-12);
      if (improvement < sgd.halving_threshold) {
        sgd.learning_rate *= 0.5;
        client.on_halve();
      }
    }
    previous = mean_loss;
  }
  return result;
}

SdnnTrainResult train_sdnn(std::span<const Utterance> train,
                           std::span<const Utterance> dev,
                           const LatticeArchive &lattices,
                           const MlpParams &start,
                           const SdnnTrainConfig &config) {
  StructuredTrainClient client;
  return train_sdnn_engine(train, dev, lattices, start, config, client);
}

LabelSequence rescore_decode(const Eigen::Ref<const FrameMatrix> &features,
                             const Lattice &lattice, const MlpParams &scorer,
                             int n) {
  if (n < 1) {
    throw InvalidArgument("rescore_decode: n must be at least 1");
  }
  if (lattice.num_frames() != features.rows()) {
    throw ShapeError("rescore_decode: lattice has " +
                     std::to_string(lattice.num_frames()) + " frames for " +
                     std::to_string(features.rows()) + " feature rows");
  }
  check_scorer(scorer, features, lattice.num_labels(), "rescore_decode");
  std::vector<ScoredPath> paths = nbest(lattice, n);
  if (paths.empty()) {
    throw StructureError("rescore_decode: lattice has no complete path");
  }
  // nbest order is (path score desc, labels asc), so keeping the first
  // maximum realizes the tie-breaking contract.
  int best = 0;
  double best_score = -1.0;
  for (size_t i = 0; i < paths.size(); ++i) {
    StructuredFeature psi = psi_first_order(features, paths[i].labels,
                                            lattice.num_labels());
    double score = mlp_forward(scorer, psi.values).first;
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return paths[best].labels;
}

LabelSequence exhaustive_decode(const Eigen::Ref<const FrameMatrix> &features,
                                const MlpParams &scorer, int num_labels) {
  if (num_labels < 1) {
    throw InvalidArgument("exhaustive_decode: need K >= 1");
  }
  check_scorer(scorer, features, num_labels, "exhaustive_decode");
  int m = static_cast<int>(features.rows());
  double combinations = std::pow(num_labels, m);
  if (combinations > 1e6) {
    throw InvalidArgument("exhaustive_decode: K^M = " +
                          std::to_string(combinations) +
                          " exceeds the 1e6 budget");
  }
  LabelSequence current(m, 0);
  LabelSequence best = current;
  double best_score = -std::numeric_limits<double>::infinity();
  // Odometer enumeration visits sequences in lexicographic order, so strict
  // improvement keeps the lexicographically smallest argmax.
  while (true) {
    StructuredFeature psi = psi_first_order(features, current, num_labels);
    double score = mlp_forward(scorer, psi.values).first;
    if (score > best_score) {
      best_score = score;
      best = current;
    }
    int j = m - 1;
    while (j >= 0 && current[j] == num_labels - 1) {
      current[j] = 0;
      --j;
    }
    if (j < 0) {
      break;
    }
    ++current[j];
  }
  return best;
}

}  // namespace structseq
