// src/types.cpp

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

#include "structseq/types.hpp"

#include <set>

#include "structseq/error.hpp"

namespace structseq {

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split split_from_name(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw InvalidArgument("unknown split name: " + name);
}

void PhonemeAlphabet::validate() const {
  if (size() < 2)
    throw InvalidArgument("alphabet needs at least 2 phones, got " +
                          std::to_string(size()));
  std::set<std::string> seen;
  for (const std::string &name : names) {
    if (name.empty()) throw InvalidArgument("empty phone name");
    if (!seen.insert(name).second)
      throw InvalidArgument("duplicate phone name: " + name);
  }
}

PhonemeAlphabet PhonemeAlphabet::generic(int num_labels) {
  PhonemeAlphabet alphabet;
  alphabet.names.reserve(num_labels);
  for (int k = 0; k < num_labels; ++k)
    alphabet.names.push_back("p" + std::to_string(k));
  alphabet.validate();
  return alphabet;
}

void validate_labels(const LabelSequence &labels, int num_labels) {
  for (int label : labels) {
    if (label < 0 || label >= num_labels)
      throw InvalidArgument("label " + std::to_string(label) +
                            " outside [0, " + std::to_string(num_labels) +
                            ")");
  }
}

void validate_frames(const Eigen::Ref<const FrameMatrix> &frames) {
  if (frames.rows() < 1 || frames.cols() < 1)
    throw InvalidArgument("acoustic sequence needs M >= 1 and D >= 1");
  if (!frames.allFinite())
    throw InvalidArgument("acoustic sequence has non-finite entries");
}

void validate_pair(const Eigen::Ref<const FrameMatrix> &frames,
                   const LabelSequence &labels, int num_labels) {
  validate_frames(frames);
  if (static_cast<Eigen::Index>(labels.size()) != frames.rows())
    throw ShapeError("label sequence length " +
                     std::to_string(labels.size()) +
                     " does not match frame count " +
                     std::to_string(frames.rows()));
  validate_labels(labels, num_labels);
}

}  // namespace structseq
