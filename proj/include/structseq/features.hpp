// include/structseq/features.hpp

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

#ifndef STRUCTSEQ_FEATURES_HPP
#define STRUCTSEQ_FEATURES_HPP

#include <Eigen/Dense>
#include <vector>

#include "structseq/types.hpp"

namespace structseq {

enum class FeatureOrder { kFirst, kSecond };

// The joint feature vector of an (acoustic sequence, label sequence) pair.
//
// First order: the observation half stacks, for each phone k, the sum of the
// frame vectors labeled k (block k at [k*D, (k+1)*D)); the transition half
// counts adjacent label pairs (from, to) at index from + to*K. Total length
// D*K + K*K.
//
// Second order: observations are keyed by label bigrams (block start
// D*(y_n + K*y_{n+1}), frames 0..M-2) and transitions by label trigrams
// (index y_n + K*y_{n+1} + K*K*y_{n+2}). Total length D*K*K + K*K*K.
struct StructuredFeature {
  Eigen::VectorXd values;
  FeatureOrder order = FeatureOrder::kFirst;
  int frame_dim = 0;   // D
  int num_labels = 0;  // K

  Eigen::Index observation_size() const;
  Eigen::Index transition_size() const;
  auto observation_half() const {
    return values.head(observation_size());
  }
  auto transition_half() const {
    return values.tail(transition_size());
  }
};

/// Feature length for the given order and dimensions.
Eigen::Index feature_size(FeatureOrder order, int frame_dim, int num_labels);

StructuredFeature psi_first_order(const Eigen::Ref<const FrameMatrix> &frames,
                                  const LabelSequence &labels, int num_labels);

StructuredFeature psi_second_order(const Eigen::Ref<const FrameMatrix> &frames,
                                   const LabelSequence &labels,
                                   int num_labels);

// Psi is linear in the frames: each frame is copied into exactly one
// D-wide block of the observation half, selected by its label (first order)
// or its label bigram (second order). block_start[j] is that block's offset,
// or -1 where the frame does not reach the feature (last frame, second
// order). The transition half never depends on the frames.
struct PsiGradientBlocks {
  int frame_dim = 0;  // D, the width of every block
  std::vector<Eigen::Index> block_start;
};

PsiGradientBlocks psi_gradient_blocks(const LabelSequence &labels,
                                      int num_labels, int frame_dim,
                                      FeatureOrder order);

/// Pulls a gradient w.r.t. the feature vector back to a gradient w.r.t. the
/// frame matrix (M x D). Entries of the transition half are ignored.
FrameMatrix psi_backprop_frames(
    const PsiGradientBlocks &blocks,
    const Eigen::Ref<const Eigen::VectorXd> &feature_grad);

}  // namespace structseq

#endif  // STRUCTSEQ_FEATURES_HPP
