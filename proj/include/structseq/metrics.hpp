// include/structseq/metrics.hpp

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

#ifndef STRUCTSEQ_METRICS_HPP
#define STRUCTSEQ_METRICS_HPP

#include <span>
#include <vector>

#include "structseq/types.hpp"

namespace structseq {

enum class DistanceKind {
  // Edit distance between run-collapsed phone strings, divided by the
  // collapsed reference length. May exceed 1 for insertion-heavy hypotheses.
  kPhoneEdit,
  // Fraction of mismatched frames; decomposes per frame, which the
  // loss-augmented decoder requires.
  kFrameError,
};

/// Merges consecutive duplicate labels: (A,A,B,B,C) -> (A,B,C).
LabelSequence collapse_runs(const LabelSequence &labels);

/// Levenshtein distance with unit substitution/insertion/deletion costs.
int edit_distance(const LabelSequence &a, const LabelSequence &b);

/// Distance between a reference and a hypothesis label sequence (>= 0).
double delta(const LabelSequence &reference, const LabelSequence &hypothesis,
             DistanceKind kind);

/// 1 - delta(phone_edit), clamped into [0, 1] so it can serve as a
/// regression target for a sigmoid-valued scorer.
double accuracy(const LabelSequence &reference,
                const LabelSequence &hypothesis);

/// Corpus-level phone error rate: total edit errors over total collapsed
/// reference phones.
double corpus_per(std::span<const LabelSequence> references,
                  std::span<const LabelSequence> hypotheses);

/// Spearman rank correlation with average ranks on ties. Returns 0 when
/// either side is constant.
double spearman(const std::vector<double> &a, const std::vector<double> &b);

}  // namespace structseq

#endif  // STRUCTSEQ_METRICS_HPP
