// include/structseq/lattice.hpp

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

#ifndef STRUCTSEQ_LATTICE_HPP
#define STRUCTSEQ_LATTICE_HPP

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "structseq/types.hpp"

namespace structseq {

// One scored, labeled hop from a node before frame `frame` to a node after
// it. A complete path therefore reads off exactly M labels.
struct LatticeArc {
  int frame = 0;
  int src = 0;
  int dst = 0;
  int label = 0;
  double score = 0.0;
};

// Frame-synchronous acyclic lattice. Node ids are dense; node 0 is the
// unique start (before frame 0) and the highest id is the unique end (after
// frame M-1). Immutable once built; all queries are const.
class Lattice {
 public:
  Lattice(int num_labels, int num_frames, int num_nodes,
          std::vector<LatticeArc> arcs);

  int num_labels() const { return num_labels_; }
  int num_frames() const { return num_frames_; }
  int num_nodes() const { return num_nodes_; }
  int start_node() const { return 0; }
  int end_node() const { return num_nodes_ - 1; }

  const std::vector<LatticeArc> &arcs() const { return arcs_; }

  /// Arc indices leaving `node`, in insertion order.
  const std::vector<int> &arcs_from(int node) const;

  /// Boundary index of a node: 0 for start, M for end.
  int node_frame(int node) const;

 private:
  /// Throws StructureError unless every node lies on a start-to-end path,
  /// every arc advances the frame boundary by one and labels are in range.
  void validate() const;

  int num_labels_;
  int num_frames_;
  int num_nodes_;
  std::vector<LatticeArc> arcs_;
  std::vector<std::vector<int>> out_arcs_;
  std::vector<int> node_frame_;
};

struct ScoredPath {
  LabelSequence labels;
  double path_score = 0.0;
};

/// The n highest-scoring distinct complete paths, score descending, exact.
/// Ties break toward the lexicographically smaller label sequence.
std::vector<ScoredPath> nbest(const Lattice &lattice, int n);

/// Uniform arc choice at every node; deterministic given the rng state.
ScoredPath random_lattice_path(const Lattice &lattice, std::mt19937_64 &rng);

/// Labels i.i.d. uniform over [0, K); K >= 2 required.
LabelSequence random_sequence(int num_labels, int num_frames,
                              std::mt19937_64 &rng);

/// Fewest phone edit errors any complete path achieves against the
/// reference, computed exactly (run-collapsed Levenshtein over the lattice).
int oracle_best_errors(const Lattice &lattice, const LabelSequence &reference);

/// Text form: header `K M`, then one `frame src dst label score` line per
/// arc. Bit-exact round-trip.
void save_lattice(std::ostream &os, const Lattice &lattice);
Lattice load_lattice(std::istream &is);

/// Several lattices keyed by utterance id, in corpus order.
struct LatticeArchive {
  std::vector<std::string> ids;
  std::vector<Lattice> lattices;

  int size() const { return static_cast<int>(lattices.size()); }
  /// Index of an id; throws InvalidArgument when absent.
  int find(const std::string &id) const;
};

void save_lattice_archive(std::ostream &os, const LatticeArchive &archive);
void save_lattice_archive_file(const std::string &path,
                               const LatticeArchive &archive);
LatticeArchive load_lattice_archive(std::istream &is);
LatticeArchive load_lattice_archive_file(const std::string &path);

}  // namespace structseq

#endif  // STRUCTSEQ_LATTICE_HPP
