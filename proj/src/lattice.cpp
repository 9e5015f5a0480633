// src/lattice.cpp

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

#include "structseq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <utility>

#include "structseq/error.hpp"
#include "structseq/metrics.hpp"
#include "structseq/textio.hpp"

namespace structseq {

Lattice::Lattice(int num_labels, int num_frames, int num_nodes,
                 std::vector<LatticeArc> arcs)
    : num_labels_(num_labels),
      num_frames_(num_frames),
      num_nodes_(num_nodes),
      arcs_(std::move(arcs)) {
  if (num_labels_ < 1 || num_frames_ < 1 || num_nodes_ < 2) {
    throw StructureError("Lattice: need K >= 1, M >= 1 and two nodes");
  }
  node_frame_.assign(num_nodes_, -1);
  out_arcs_.assign(num_nodes_, {});
  for (size_t i = 0; i < arcs_.size(); ++i) {
    const LatticeArc &a = arcs_[i];
    if (a.frame < 0 || a.frame >= num_frames_ || a.src < 0 ||
        a.src >= num_nodes_ || a.dst < 0 || a.dst >= num_nodes_) {
      throw StructureError("Lattice: arc " + std::to_string(i) +
                           " out of bounds");
    }
    if (a.label < 0 || a.label >= num_labels_) {
      throw StructureError("Lattice: arc " + std::to_string(i) +
                           " label outside [0, " +
                           std::to_string(num_labels_) + ")");
    }
    if (!std::isfinite(a.score)) {
      throw StructureError("Lattice: arc " + std::to_string(i) +
                           " has a non-finite score");
    }
    for (auto [node, frame] : {std::pair{a.src, a.frame},
                               std::pair{a.dst, a.frame + 1}}) {
      if (node_frame_[node] == -1) {
        node_frame_[node] = frame;
      } else if (node_frame_[node] != frame) {
        throw StructureError("Lattice: node " + std::to_string(node) +
                             " sits on two frame boundaries");
      }
    }
    out_arcs_[a.src].push_back(static_cast<int>(i));
  }
  validate();
}

void Lattice::validate() const {
  if (node_frame_[start_node()] != 0) {
    throw StructureError("Lattice: node 0 is not the start boundary");
  }
  if (node_frame_[end_node()] != num_frames_) {
    throw StructureError("Lattice: last node is not the end boundary");
  }
  // Forward reachability from the start.
  std::vector<char> fwd(num_nodes_, 0);
  fwd[start_node()] = 1;
  // Arcs always advance one boundary, so two sweeps in arc order suffice if
  // we walk boundaries in order; arcs are unordered, so iterate to fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const LatticeArc &a : arcs_) {
      if (fwd[a.src] && !fwd[a.dst]) {
        fwd[a.dst] = 1;
        changed = true;
      }
    }
  }
  std::vector<char> bwd(num_nodes_, 0);
  bwd[end_node()] = 1;
  changed = true;
  while (changed) {
    changed = false;
    for (const LatticeArc &a : arcs_) {
      if (bwd[a.dst] && !bwd[a.src]) {
        bwd[a.src] = 1;
        changed = true;
      }
    }
  }
  for (int v = 0; v < num_nodes_; ++v) {
    if (!fwd[v] || !bwd[v]) {
      throw StructureError("Lattice: node " + std::to_string(v) +
                           " is off every start-to-end path");
    }
  }
}

const std::vector<int> &Lattice::arcs_from(int node) const {
  if (node < 0 || node >= num_nodes_) {
    throw InvalidArgument("Lattice: node " + std::to_string(node) +
                          " out of range");
  }
  return out_arcs_[node];
}

int Lattice::node_frame(int node) const {
  if (node < 0 || node >= num_nodes_) {
    throw InvalidArgument("Lattice: node " + std::to_string(node) +
                          " out of range");
  }
  return node_frame_[node];
}

namespace {

// Exact cost-to-go per node for the A* heuristic.
std::vector<double> backward_scores(const Lattice &lattice) {
  std::vector<double> beta(lattice.num_nodes(),
                           -std::numeric_limits<double>::infinity());
  beta[lattice.end_node()] = 0.0;
  std::vector<int> order(lattice.num_nodes());
  for (int v = 0; v < lattice.num_nodes(); ++v) {
    order[v] = v;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return lattice.node_frame(a) > lattice.node_frame(b);
  });
  for (int v : order) {
    for (int ai : lattice.arcs_from(v)) {
      const LatticeArc &a = lattice.arcs()[ai];
      beta[v] = std::max(beta[v], a.score + beta[a.dst]);
    }
  }
  return beta;
}

struct SearchItem {
  double f = 0.0;
  double g = 0.0;
  int node = 0;
  LabelSequence labels;
};

// Max-heap on f; ties prefer the lexicographically smaller prefix.
struct SearchOrder {
  bool operator()(const SearchItem &a, const SearchItem &b) const {
    if (a.f != b.f) {
      return a.f < b.f;
    }
    return a.labels > b.labels;
  }
};

}  // namespace

std::vector<ScoredPath> nbest(const Lattice &lattice, int n) {
  if (n < 1) {
    throw InvalidArgument("nbest: n must be at least 1");
  }
  std::vector<double> beta = backward_scores(lattice);
  std::priority_queue<SearchItem, std::vector<SearchItem>, SearchOrder> queue;
  queue.push({beta[lattice.start_node()], 0.0, lattice.start_node(), {}});
  std::vector<ScoredPath> result;
  std::set<LabelSequence> seen;
  while (!queue.empty() && static_cast<int>(result.size()) < n) {
    SearchItem item = queue.top();
    queue.pop();
    if (item.node == lattice.end_node()) {
      if (seen.insert(item.labels).second) {
        result.push_back({std::move(item.labels), item.g});
      }
      continue;
    }
    for (int ai : lattice.arcs_from(item.node)) {
      const LatticeArc &a = lattice.arcs()[ai];
      SearchItem next;
      next.g = item.g + a.score;
      next.f = next.g + beta[a.dst];
      next.node = a.dst;
      next.labels = item.labels;
      next.labels.push_back(a.label);
      queue.push(std::move(next));
    }
  }
  return result;
}

ScoredPath random_lattice_path(const Lattice &lattice, std::mt19937_64 &rng) {
  ScoredPath path;
  int node = lattice.start_node();
  while (node != lattice.end_node()) {
    const std::vector<int> &out = lattice.arcs_from(node);
    std::uniform_int_distribution<int> pick(0,
                                            static_cast<int>(out.size()) - 1);
    const LatticeArc &a = lattice.arcs()[out[pick(rng)]];
    path.labels.push_back(a.label);
    path.path_score += a.score;
    node = a.dst;
  }
  return path;
}

LabelSequence random_sequence(int num_labels, int num_frames,
                              std::mt19937_64 &rng) {
  if (num_labels < 2) {
    throw InvalidArgument("random_sequence: need K >= 2");
  }
  if (num_frames < 1) {
    throw InvalidArgument("random_sequence: need M >= 1");
  }
  std::uniform_int_distribution<int> pick(0, num_labels - 1);
  LabelSequence labels(num_frames);
  for (int j = 0; j < num_frames; ++j) {
    labels[j] = pick(rng);
  }
  return labels;
}

int oracle_best_errors(const Lattice &lattice,
                       const LabelSequence &reference) {
  LabelSequence ref = collapse_runs(reference);
  int r_len = static_cast<int>(ref.size());
  constexpr int kInf = 1 << 29;
  int m = lattice.num_frames();

  std::vector<std::vector<int>> arcs_by_frame(m);
  for (size_t i = 0; i < lattice.arcs().size(); ++i) {
    arcs_by_frame[lattice.arcs()[i].frame].push_back(static_cast<int>(i));
  }

  // row[arc] aligns the run-collapsed emissions of a path prefix ending with
  // that arc against ref prefixes; an arc emits only when its label differs
  // from the previous arc's.
  auto emit_step = [&](const std::vector<int> &u, int symbol) {
    std::vector<int> v(r_len + 1, kInf);
    for (int r = 0; r <= r_len; ++r) {
      if (u[r] >= kInf) {
        continue;
      }
      v[r] = std::min(v[r], u[r] + 1);  // insertion
      if (r < r_len) {
        v[r + 1] = std::min(v[r + 1], u[r] + (symbol == ref[r] ? 0 : 1));
      }
    }
    for (int r = 1; r <= r_len; ++r) {  // deletions
      v[r] = std::min(v[r], v[r - 1] + 1);
    }
    return v;
  };

  std::vector<std::vector<int>> row(lattice.arcs().size());
  for (int j = 0; j < m; ++j) {
    for (int ai : arcs_by_frame[j]) {
      const LatticeArc &arc = lattice.arcs()[ai];
      std::vector<int> best_emit(r_len + 1, kInf);
      std::vector<int> best_keep(r_len + 1, kInf);
      if (j == 0) {
        for (int r = 0; r <= r_len; ++r) {
          best_emit[r] = r;  // delete leading ref phones
        }
      } else {
        for (int bi : arcs_by_frame[j - 1]) {
          const LatticeArc &prev = lattice.arcs()[bi];
          if (prev.dst != arc.src) {
            continue;
          }
          std::vector<int> &target =
              (prev.label == arc.label) ? best_keep : best_emit;
          for (int r = 0; r <= r_len; ++r) {
            target[r] = std::min(target[r], row[bi][r]);
          }
        }
      }
      std::vector<int> v = emit_step(best_emit, arc.label);
      for (int r = 0; r <= r_len; ++r) {
        v[r] = std::min(v[r], best_keep[r]);
      }
      row[ai] = std::move(v);
    }
  }
  int best = kInf;
  for (int ai : arcs_by_frame[m - 1]) {
    best = std::min(best, row[ai][r_len]);
  }
  return best;
}

void save_lattice(std::ostream &os, const Lattice &lattice) {
  os << lattice.num_labels() << ' ' << lattice.num_frames() << "\n";
  for (const LatticeArc &a : lattice.arcs()) {
    os << a.frame << ' ' << a.src << ' ' << a.dst << ' ' << a.label << ' '
       << format_double(a.score) << "\n";
  }
}

namespace {

LatticeArc parse_arc(const std::vector<std::string> &tok,
                     const std::string &context) {
  LatticeArc a;
  a.frame = parse_int(tok[0], context);
  a.src = parse_int(tok[1], context);
  a.dst = parse_int(tok[2], context);
  a.label = parse_int(tok[3], context);
  a.score = parse_double(tok[4], context);
  return a;
}

Lattice finish_lattice(int num_labels, int num_frames,
                       std::vector<LatticeArc> arcs) {
  int num_nodes = 0;
  for (const LatticeArc &a : arcs) {
    num_nodes = std::max(num_nodes, std::max(a.src, a.dst) + 1);
  }
  return Lattice(num_labels, num_frames, num_nodes, std::move(arcs));
}

Lattice parse_lattice(LineReader &reader, long long num_arcs) {
  std::vector<std::string> head = reader.expect_tokens(2, "lattice header");
  int num_labels = parse_int(head[0], reader.context());
  int num_frames = parse_int(head[1], reader.context());
  std::vector<LatticeArc> arcs;
  if (num_arcs < 0) {
    std::string line;
    while (reader.next_nonempty(&line)) {
      std::vector<std::string> tok = split_tokens(line);
      if (tok.size() != 5) {
        throw ParseError(reader.context() + ": expected 5 arc fields, got " +
                         std::to_string(tok.size()));
      }
      arcs.push_back(parse_arc(tok, reader.context()));
    }
  } else {
    for (long long i = 0; i < num_arcs; ++i) {
      arcs.push_back(
          parse_arc(reader.expect_tokens(5, "arc"), reader.context()));
    }
  }
  try {
    return finish_lattice(num_labels, num_frames, std::move(arcs));
  } catch (const StructureError &e) {
    throw ParseError(reader.context() + ": " + e.what());
  }
}

constexpr const char *kArchiveMagic = "structseq lattices v1";

}  // namespace

Lattice load_lattice(std::istream &is) {
  LineReader reader(is);
  return parse_lattice(reader, -1);
}

int LatticeArchive::find(const std::string &id) const {
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) {
      return static_cast<int>(i);
    }
  }
  throw InvalidArgument("LatticeArchive: no lattice for utterance '" + id +
                        "'");
}

void save_lattice_archive(std::ostream &os, const LatticeArchive &archive) {
  if (archive.ids.size() != archive.lattices.size()) {
    throw InvalidArgument("LatticeArchive: id/lattice count mismatch");
  }
  os << kArchiveMagic << "\n";
  os << "count " << archive.size() << "\n";
  for (int i = 0; i < archive.size(); ++i) {
    os << "utt " << archive.ids[i] << ' '
       << archive.lattices[i].arcs().size() << "\n";
    save_lattice(os, archive.lattices[i]);
  }
}

void save_lattice_archive_file(const std::string &path,
                               const LatticeArchive &archive) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_lattice_archive(os, archive);
  if (!os) {
    throw ParseError("write failed: " + path);
  }
}

LatticeArchive load_lattice_archive(std::istream &is) {
  LineReader reader(is);
  std::string line;
  if (!reader.next_nonempty(&line) || line != kArchiveMagic) {
    throw VersionError(reader.context() + ": expected '" +
                       std::string(kArchiveMagic) + "'");
  }
  std::vector<std::string> tok = reader.expect_tokens(2, "count header");
  if (tok[0] != "count") {
    throw ParseError(reader.context() + ": expected 'count <n>'");
  }
  int count = parse_int(tok[1], reader.context());
  if (count < 0) {
    throw ParseError(reader.context() + ": negative count");
  }
  LatticeArchive archive;
  for (int i = 0; i < count; ++i) {
    std::vector<std::string> head = reader.expect_tokens(3, "utt header");
    if (head[0] != "utt") {
      throw ParseError(reader.context() + ": expected 'utt <id> <arcs>'");
    }
    long long num_arcs = parse_long(head[2], reader.context());
    archive.ids.push_back(head[1]);
    archive.lattices.push_back(parse_lattice(reader, num_arcs));
  }
  return archive;
}

LatticeArchive load_lattice_archive_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw ParseError("cannot open " + path);
  }
  return load_lattice_archive(is);
}

}  // namespace structseq
