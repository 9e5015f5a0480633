// include/structseq/sdnn.hpp

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

#ifndef STRUCTSEQ_SDNN_HPP
#define STRUCTSEQ_SDNN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "structseq/lattice.hpp"
#include "structseq/mlp.hpp"
#include "structseq/types.hpp"

namespace structseq {

enum class SdnnLoss { kApproxAcc, kMaxMargin };

enum class NegativeSource { kRandom, kLatticeRandom, kLatticeNbest };

struct NegativeExample {
  LabelSequence labels;
  double delta_value = 0.0;  // phone edit distance to the reference
  NegativeSource source = NegativeSource::kRandom;
};

// The sampled candidate set for one utterance: its reference labels and the
// surviving negatives. Negatives identical to the reference are dropped.
struct TrainingExampleSet {
  LabelSequence reference;
  std::vector<NegativeExample> negatives;
};

struct SdnnTrainConfig {
  SdnnLoss loss = SdnnLoss::kMaxMargin;
  int n_negative = 1;  // per source
  int epochs = 20;
  int batch_size = 1;  // utterances per optimizer step
  int rescore_n = 10;  // n-best depth for dev scoring
  SgdConfig sgd{4e-6, 0.9, 1e-3, 1e-4};
  std::uint64_t seed = 0;
};

/// Squared error against the accuracy target: loss (C - s)^2, derivative
/// d(loss)/ds = -2 (C - s).
std::pair<double, double> loss_approx_acc(double score, double target_c);

struct MarginTerm {
  double neg_score = 0.0;
  double delta_value = 0.0;
};

struct MarginLossResult {
  double loss = 0.0;
  std::vector<char> active;  // per term: hinge argument > 0
  // Subgradients on the raw scores: +1 per active negative, -#active on the
  // positive.
  double pos_grad = 0.0;
};

MarginLossResult loss_max_margin(double pos_score,
                                 const std::vector<MarginTerm> &negatives);

/// Draws n_negative candidates from each source (random sequences, random
/// lattice paths, n-best lattice paths), attaches phone-edit distances and
/// drops candidates equal to the reference.
TrainingExampleSet build_examples(const Utterance &utterance,
                                  const Lattice &lattice,
                                  const SdnnTrainConfig &config,
                                  std::mt19937_64 &rng);

/// Loss of one utterance's example set under the scorer, with optional
/// gradient accumulation into weight_grads (scorer layers) and feature_grad
/// (d loss / d observation matrix, M x D). Both may be null.
double sdnn_example_pass(const MlpParams &scorer,
                         const Eigen::Ref<const FrameMatrix> &features,
                         const TrainingExampleSet &examples, SdnnLoss loss,
                         int num_labels,
                         std::vector<Eigen::MatrixXd> *weight_grads,
                         FrameMatrix *feature_grad);

struct SdnnTrainResult {
  MlpParams params;
  // Per epoch: mean example-set loss, the learning rate in force and dev
  // rescoring PER (NaN without a dev set).
  std::vector<double> losses;
  std::vector<double> learning_rates;
  std::vector<double> dev_per;
};

// Hook interface letting the joint front-end trainer reuse this module's
// training loop; the default implementation is the plain structured DNN
// (features are the corpus frames, feature gradients discarded).
class StructuredTrainClient {
 public:
  virtual ~StructuredTrainClient() = default;

  /// Observation matrix the scorer sees for this utterance.
  virtual FrameMatrix features(const Utterance &utterance) {
    return utterance.frames;
  }

  /// d(example-set loss)/d(features), before mini-batch averaging.
  virtual void on_feature_gradient(const Utterance &utterance,
                                   const FrameMatrix &gradient) {
    (void)utterance;
    (void)gradient;
  }

  /// End of a mini-batch of `utterances_in_batch` example sets.
  virtual void on_step(int utterances_in_batch) { (void)utterances_in_batch; }

  /// The engine halved its learning rate.
  virtual void on_halve() {}
};

/// Shared training loop; train_sdnn passes the default client.
SdnnTrainResult train_sdnn_engine(std::span<const Utterance> train,
                                  std::span<const Utterance> dev,
                                  const LatticeArchive &lattices,
                                  const MlpParams &start,
                                  const SdnnTrainConfig &config,
                                  StructuredTrainClient &client);

SdnnTrainResult train_sdnn(std::span<const Utterance> train,
                           std::span<const Utterance> dev,
                           const LatticeArchive &lattices,
                           const MlpParams &start,
                           const SdnnTrainConfig &config);

/// Best of the lattice's n-best paths under the scorer; ties prefer the
/// higher lattice path score, then the lexicographically smaller sequence.
LabelSequence rescore_decode(const Eigen::Ref<const FrameMatrix> &features,
                             const Lattice &lattice, const MlpParams &scorer,
                             int n);

/// Exact argmax over all K^M sequences; refuses budgets above 10^6.
LabelSequence exhaustive_decode(const Eigen::Ref<const FrameMatrix> &features,
                                const MlpParams &scorer, int num_labels);

}  // namespace structseq

#endif  // STRUCTSEQ_SDNN_HPP
