// include/structseq/corpus.hpp

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

#ifndef STRUCTSEQ_CORPUS_HPP
#define STRUCTSEQ_CORPUS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "structseq/types.hpp"

namespace structseq {

// Markov-chain labels with diagonal-Gaussian emissions. Each phone may carry
// several mixture components; a component is drawn once per phone run, so
// with well separated components the class regions are not linearly
// separable in frame space.
struct SyntheticSpec {
  int num_labels = 6;  // K
  int frame_dim = 8;   // D
  Eigen::MatrixXd transition;              // K x K, rows sum to 1
  std::vector<Eigen::MatrixXd> means;      // per component, each K x D
  Eigen::MatrixXd variances;               // K x D, strictly positive
  double duration_bias = 0.0;              // added to self-loops, renormalized
  int min_frames = 2;
  int max_frames = 20;
  std::uint64_t seed = 0;

  /// Throws ConfigError on invalid dimensions, non-stochastic rows,
  /// non-positive variances or min_frames < 2.
  void validate() const;

  /// Transition matrix with the self-loop bias folded in.
  Eigen::MatrixXd effective_transition() const;
};

struct Corpus {
  PhonemeAlphabet alphabet;
  std::vector<Utterance> utterances;

  int num_labels() const { return alphabet.size(); }
  int frame_dim() const {
    return utterances.empty() ? 0 : utterances.front().frame_dim();
  }

  /// Indices of the utterances carrying the given split tag.
  std::vector<int> split_indices(Split split) const;

  /// Copies of the utterances in a split.
  std::vector<Utterance> split_utterances(Split split) const;

  /// Throws on inconsistent dimensions or invalid labels.
  void validate() const;
};

/// Single-Gaussian emissions on well separated means; a linear scorer can do
/// well here.
SyntheticSpec default_spec(int num_labels, int frame_dim, std::uint64_t seed);

/// Half of the phones get a second, antipodal mixture component, which folds
/// the two modes of each such phone onto opposite sides of the origin.
SyntheticSpec mixture_spec(int num_labels, int frame_dim, std::uint64_t seed);

/// Deterministic given spec.seed. Splits by utterance index: 8 mod 10 is
/// dev, 9 mod 10 is test, the rest train.
Corpus generate_corpus(const SyntheticSpec &spec, int n_utterances);

void save_corpus(std::ostream &os, const Corpus &corpus);
void save_corpus_file(const std::string &path, const Corpus &corpus);

/// Throws ParseError (with a line number) on malformed input.
Corpus load_corpus(std::istream &is);
Corpus load_corpus_file(const std::string &path);

}  // namespace structseq

#endif  // STRUCTSEQ_CORPUS_HPP
