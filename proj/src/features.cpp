// src/features.cpp

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

#include "structseq/features.hpp"

#include "structseq/error.hpp"

namespace structseq {

Eigen::Index StructuredFeature::observation_size() const {
  const Eigen::Index d = frame_dim, k = num_labels;
  return order == FeatureOrder::kFirst ? d * k : d * k * k;
}

Eigen::Index StructuredFeature::transition_size() const {
  const Eigen::Index k = num_labels;
  return order == FeatureOrder::kFirst ? k * k : k * k * k;
}

Eigen::Index feature_size(FeatureOrder order, int frame_dim, int num_labels) {
  const Eigen::Index d = frame_dim, k = num_labels;
  return order == FeatureOrder::kFirst ? d * k + k * k
                                       : d * k * k + k * k * k;
}

StructuredFeature psi_first_order(const Eigen::Ref<const FrameMatrix> &frames,
                                  const LabelSequence &labels,
                                  int num_labels) {
  validate_pair(frames, labels, num_labels);
  const int num_frames = static_cast<int>(frames.rows());
  const int d = static_cast<int>(frames.cols());
  const int k = num_labels;

  StructuredFeature psi;
  psi.order = FeatureOrder::kFirst;
  psi.frame_dim = d;
  psi.num_labels = k;
  psi.values = Eigen::VectorXd::Zero(feature_size(psi.order, d, k));

  for (int j = 0; j < num_frames; ++j)
    psi.values.segment(labels[j] * d, d) += frames.row(j);
  for (int j = 0; j + 1 < num_frames; ++j)
    psi.values(d * k + labels[j] + labels[j + 1] * k) += 1.0;
  return psi;
}

StructuredFeature psi_second_order(const Eigen::Ref<const FrameMatrix> &frames,
                                   const LabelSequence &labels,
                                   int num_labels) {
  validate_pair(frames, labels, num_labels);
  const int num_frames = static_cast<int>(frames.rows());
  const int d = static_cast<int>(frames.cols());
  const int k = num_labels;

  StructuredFeature psi;
  psi.order = FeatureOrder::kSecond;
  psi.frame_dim = d;
  psi.num_labels = k;
  psi.values = Eigen::VectorXd::Zero(feature_size(psi.order, d, k));

  // Observation terms are keyed by the (y_n, y_{n+1}) bigram; the last frame
  // has no successor and contributes nothing.
  for (int n = 0; n + 1 < num_frames; ++n)
    psi.values.segment(d * (labels[n] + k * labels[n + 1]), d) +=
        frames.row(n);
  for (int n = 0; n + 2 < num_frames; ++n)
    psi.values(d * k * k + labels[n] + k * labels[n + 1] +
               k * k * labels[n + 2]) += 1.0;
  return psi;
}

PsiGradientBlocks psi_gradient_blocks(const LabelSequence &labels,
                                      int num_labels, int frame_dim,
                                      FeatureOrder order) {
  validate_labels(labels, num_labels);
  if (frame_dim < 1) throw InvalidArgument("frame_dim must be >= 1");
  const int num_frames = static_cast<int>(labels.size());
  const Eigen::Index d = frame_dim, k = num_labels;

  PsiGradientBlocks blocks;
  blocks.frame_dim = frame_dim;
  blocks.block_start.resize(num_frames, -1);
  for (int j = 0; j < num_frames; ++j) {
    if (order == FeatureOrder::kFirst) {
      blocks.block_start[j] = labels[j] * d;
    } else if (j + 1 < num_frames) {
      blocks.block_start[j] = d * (labels[j] + k * labels[j + 1]);
    }
  }
  return blocks;
}

FrameMatrix psi_backprop_frames(
    const PsiGradientBlocks &blocks,
    const Eigen::Ref<const Eigen::VectorXd> &feature_grad) {
  const int num_frames = static_cast<int>(blocks.block_start.size());
  const int d = blocks.frame_dim;
  FrameMatrix grad = FrameMatrix::Zero(num_frames, d);
  for (int j = 0; j < num_frames; ++j) {
    const Eigen::Index start = blocks.block_start[j];
    if (start < 0) continue;
    if (start + d > feature_grad.size())
      throw ShapeError("feature gradient shorter than block layout");
    grad.row(j) = feature_grad.segment(start, d);
  }
  return grad;
}

}  // namespace structseq
