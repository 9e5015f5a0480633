// include/structseq/linear.hpp

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

#ifndef STRUCTSEQ_LINEAR_HPP
#define STRUCTSEQ_LINEAR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "structseq/lattice.hpp"
#include "structseq/metrics.hpp"
#include "structseq/types.hpp"

namespace structseq {

// Linear structured scorer: theta laid out exactly like the first-order
// feature vector, observation half (D*K) then transition half (K*K).
struct LinearParams {
  Eigen::VectorXd theta;
  int frame_dim = 0;   // D
  int num_labels = 0;  // K

  /// Throws ShapeError unless theta has length D*K + K*K with finite
  /// entries.
  void validate() const;

  /// Zero-initialized parameters for the given dimensions.
  static LinearParams zeros(int frame_dim, int num_labels);

  /// Observation weights for one phone, a D-long view.
  auto observation(int label) const {
    return theta.segment(static_cast<Eigen::Index>(label) * frame_dim,
                         frame_dim);
  }
  double transition(int from, int to) const {
    return theta(static_cast<Eigen::Index>(frame_dim) * num_labels + from +
                 static_cast<Eigen::Index>(to) * num_labels);
  }
};

struct LinearTrainConfig {
  double cost_c = 1.0;
  int epochs = 10;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Only the decomposable frame-error distance admits exact loss-augmented
  // Viterbi; anything else is rejected.
  DistanceKind delta_kind = DistanceKind::kFrameError;
};

struct LinearTrainResult {
  LinearParams params;
  // Per epoch: regularized objective on the training set, the learning rate
  // in force, and dev PER (NaN when no dev utterances were given).
  std::vector<double> objectives;
  std::vector<double> learning_rates;
  std::vector<double> dev_per;
};

double score_linear(const Eigen::Ref<const FrameMatrix> &frames,
                    const LabelSequence &labels, const LinearParams &params);

/// Exact argmax of score_linear over all K^M sequences; ties go to the
/// lexicographically smallest sequence.
LabelSequence viterbi_decode(const Eigen::Ref<const FrameMatrix> &frames,
                             const LinearParams &params);

/// Argmax of score + frame-error distance to the reference (the
/// most-violating sequence for margin training).
LabelSequence loss_augmented_decode(const Eigen::Ref<const FrameMatrix> &frames,
                                    const LabelSequence &reference,
                                    const LinearParams &params);

/// Regularized hinge objective ||theta||^2 + C * sum_i max-violation.
double linear_objective(std::span<const Utterance> corpus,
                        const LinearParams &params, double cost_c);

/// Stochastic subgradient training from the given starting point; pass
/// LinearParams::zeros for a cold start. dev may be empty.
LinearTrainResult train_linear(std::span<const Utterance> corpus,
                               std::span<const Utterance> dev,
                               const LinearParams &start,
                               const LinearTrainConfig &config);

/// Frame-synchronous beam search; with beam_width >= K the lattice is the
/// full K^M grid and contains the Viterbi path.
Lattice beam_lattice(const Eigen::Ref<const FrameMatrix> &frames,
                     const LinearParams &params, int beam_width);

}  // namespace structseq

#endif  // STRUCTSEQ_LINEAR_HPP
