// include/structseq/types.hpp

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

#ifndef STRUCTSEQ_TYPES_HPP
#define STRUCTSEQ_TYPES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace structseq {

// Per-frame label ids are zero-based ints in [0, K).
using LabelSequence = std::vector<int>;

// An utterance's acoustic features, one frame per row (M x D).
using FrameMatrix = Eigen::MatrixXd;

enum class Split { kTrain, kDev, kTest };

std::string split_name(Split split);
Split split_from_name(const std::string &name);

/// The closed set of K >= 2 distinct phone symbols.
struct PhonemeAlphabet {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }

  /// Throws InvalidArgument unless K >= 2 and the names are distinct and
  /// non-empty.
  void validate() const;

  /// K generic symbols p0..p{K-1}.
  static PhonemeAlphabet generic(int num_labels);
};

struct Utterance {
  std::string id;
  FrameMatrix frames;    // M x D, all entries finite
  LabelSequence labels;  // reference labels, length M
  Split split = Split::kTrain;

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int frame_dim() const { return static_cast<int>(frames.cols()); }
};

/// Throws InvalidArgument if any label falls outside [0, num_labels).
void validate_labels(const LabelSequence &labels, int num_labels);

/// Throws InvalidArgument on non-finite entries or an empty matrix.
void validate_frames(const Eigen::Ref<const FrameMatrix> &frames);

/// Frame/label lengths must agree and labels must be in range.
void validate_pair(const Eigen::Ref<const FrameMatrix> &frames,
                   const LabelSequence &labels, int num_labels);

}  // namespace structseq

#endif  // STRUCTSEQ_TYPES_HPP
