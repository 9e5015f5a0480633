// src/metrics.cpp

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

#include "structseq/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "structseq/error.hpp"

namespace structseq {

LabelSequence collapse_runs(const LabelSequence &labels) {
  if (labels.empty())
    throw InvalidArgument("cannot collapse an empty label sequence");
  LabelSequence collapsed;
  collapsed.reserve(labels.size());
  for (int label : labels) {
    if (collapsed.empty() || collapsed.back() != label)
      collapsed.push_back(label);
  }
  return collapsed;
}

int edit_distance(const LabelSequence &a, const LabelSequence &b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::vector<int> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (int i = 1; i <= n; ++i) {
    cur[0] = i;
    for (int j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double delta(const LabelSequence &reference, const LabelSequence &hypothesis,
             DistanceKind kind) {
  if (kind == DistanceKind::kFrameError) {
    if (reference.size() != hypothesis.size())
      throw ShapeError("frame_error distance needs equal lengths, got " +
                       std::to_string(reference.size()) + " vs " +
                       std::to_string(hypothesis.size()));
    if (reference.empty())
      throw InvalidArgument("frame_error distance on empty sequences");
    int mismatches = 0;
    for (size_t j = 0; j < reference.size(); ++j)
      mismatches += reference[j] != hypothesis[j] ? 1 : 0;
    return static_cast<double>(mismatches) /
           static_cast<double>(reference.size());
  }
  const LabelSequence ref_phones = collapse_runs(reference);
  const LabelSequence hyp_phones = collapse_runs(hypothesis);
  return static_cast<double>(edit_distance(ref_phones, hyp_phones)) /
         static_cast<double>(ref_phones.size());
}

double accuracy(const LabelSequence &reference,
                const LabelSequence &hypothesis) {
  const double d = delta(reference, hypothesis, DistanceKind::kPhoneEdit);
  return std::clamp(1.0 - d, 0.0, 1.0);
}

double corpus_per(std::span<const LabelSequence> references,
                  std::span<const LabelSequence> hypotheses) {
  if (references.size() != hypotheses.size())
    throw ShapeError("corpus_per needs matched lists, got " +
                     std::to_string(references.size()) + " refs vs " +
                     std::to_string(hypotheses.size()) + " hyps");
  long total_errors = 0, total_phones = 0;
  for (size_t i = 0; i < references.size(); ++i) {
    const LabelSequence ref_phones = collapse_runs(references[i]);
    const LabelSequence hyp_phones = collapse_runs(hypotheses[i]);
    total_errors += edit_distance(ref_phones, hyp_phones);
    total_phones += static_cast<long>(ref_phones.size());
  }
  if (total_phones == 0) throw InvalidArgument("corpus_per on empty corpus");
  return static_cast<double>(total_errors) /
         static_cast<double>(total_phones);
}

namespace {

// Average ranks on ties, 1-based.
std::vector<double> ranks(const std::vector<double> &values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return values[i] < values[j];
  });
  std::vector<double> rank(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) rank[order[t]] = mean_rank;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size())
    throw ShapeError("spearman needs equal-length inputs");
  if (a.size() < 2) throw InvalidArgument("spearman needs >= 2 points");
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double mean = (n + 1.0) / 2.0;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    var_a += (ra[i] - mean) * (ra[i] - mean);
    var_b += (rb[i] - mean) * (rb[i] - mean);
  }
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace structseq
