// tests/lattice_test.cpp

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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "structseq/error.hpp"
#include "structseq/lattice.hpp"
#include "structseq/linear.hpp"
#include "structseq/metrics.hpp"
#include "test_util.hpp"

namespace structseq {

namespace {

// Varied valid lattices via beam search over random scores.
Lattice random_lattice(std::mt19937_64 &rng, int *k_out = nullptr) {
  int k = 2 + static_cast<int>(rng() % 3);
  int m = 1 + static_cast<int>(rng() % 5);
  int beam = 1 + static_cast<int>(rng() % k);
  FrameMatrix frames = testutil::random_frames(m, 2, rng);
  LinearParams params = testutil::random_linear(2, k, rng);
  if (k_out != nullptr) {
    *k_out = k;
  }
  return beam_lattice(frames, params, beam);
}

// A two-frame diamond with two distinct label readings.
Lattice diamond() {
  std::vector<LatticeArc> arcs{
      {0, 0, 1, 0, 1.0},  // start -> mid via label 0
      {0, 0, 2, 1, 2.0},  // start -> mid via label 1
      {1, 1, 3, 1, 5.0},
      {1, 2, 3, 0, 3.0},
  };
  return Lattice(2, 2, 4, arcs);
}

}  // namespace

TEST_CASE("lattice: nbest on a hand-built diamond [DERIVED]") {
  Lattice lattice = diamond();
  std::vector<ScoredPath> paths = nbest(lattice, 10);
  REQUIRE_EQ(paths.size(), 2u);
  CHECK_EQ(paths[0].labels, LabelSequence({0, 1}));
  CHECK_EQ(paths[0].path_score, 6.0);
  CHECK_EQ(paths[1].labels, LabelSequence({1, 0}));
  CHECK_EQ(paths[1].path_score, 5.0);
  std::vector<ScoredPath> top1 = nbest(lattice, 1);
  REQUIRE_EQ(top1.size(), 1u);
  CHECK_EQ(top1[0].labels, LabelSequence({0, 1}));
}

TEST_CASE("lattice: nbest enumerates exactly the distinct path readings "
          "[DERIVED]") {
  std::mt19937_64 rng(131);
  for (int c = 0; c < 60; ++c) {
    Lattice lattice = random_lattice(rng);
    // Highest score per distinct label sequence, by brute force.
    std::map<LabelSequence, double> best;
    for (const ScoredPath &path : testutil::all_paths(lattice)) {
      auto it = best.find(path.labels);
      if (it == best.end() || path.path_score > it->second) {
        best[path.labels] = path.path_score;
      }
    }
    std::vector<ScoredPath> got = nbest(
        lattice, static_cast<int>(best.size()) + 5);
    REQUIRE_EQ(got.size(), best.size());
    for (const ScoredPath &path : got) {
      auto it = best.find(path.labels);
      REQUIRE(it != best.end());
      CHECK(path.path_score == doctest::Approx(it->second).epsilon(1e-9));
    }
  }
}

TEST_CASE("lattice: nbest scores are non-increasing and label sequences "
          "unique [DERIVED]") {
  std::mt19937_64 rng(137);
  for (int c = 0; c < 60; ++c) {
    int k = 0;
    Lattice lattice = random_lattice(rng, &k);
    std::vector<ScoredPath> paths = nbest(lattice, 8);
    std::set<LabelSequence> seen;
    for (size_t i = 0; i < paths.size(); ++i) {
      CHECK_EQ(static_cast<int>(paths[i].labels.size()),
               lattice.num_frames());
      for (int label : paths[i].labels) {
        CHECK(label >= 0);
        CHECK(label < k);
      }
      CHECK(seen.insert(paths[i].labels).second);
      if (i > 0) {
        CHECK(paths[i - 1].path_score >= paths[i].path_score - 1e-12);
      }
    }
  }
}

TEST_CASE("lattice: nbest rejects n < 1 [TRIVIAL]") {
  CHECK_THROWS_AS(nbest(diamond(), 0), InvalidArgument);
}

TEST_CASE("lattice: random paths are complete and rng-deterministic "
          "[TRIVIAL]") {
  std::mt19937_64 rng(139);
  for (int c = 0; c < 40; ++c) {
    Lattice lattice = random_lattice(rng);
    std::mt19937_64 a(1000 + c), b(1000 + c);
    ScoredPath pa = random_lattice_path(lattice, a);
    ScoredPath pb = random_lattice_path(lattice, b);
    CHECK_EQ(pa.labels, pb.labels);
    CHECK_EQ(pa.path_score, pb.path_score);
    CHECK_EQ(static_cast<int>(pa.labels.size()), lattice.num_frames());
  }
}

TEST_CASE("lattice: random_sequence stays in range [TRIVIAL]") {
  std::mt19937_64 rng(149);
  LabelSequence y = random_sequence(4, 50, rng);
  CHECK_EQ(y.size(), 50u);
  CHECK(*std::max_element(y.begin(), y.end()) < 4);
  CHECK(*std::min_element(y.begin(), y.end()) >= 0);
  CHECK_THROWS_AS(random_sequence(1, 5, rng), InvalidArgument);
  CHECK_THROWS_AS(random_sequence(3, 0, rng), InvalidArgument);
}

TEST_CASE("lattice: oracle errors match a brute-force path minimum "
          "[DERIVED]") {
  std::mt19937_64 rng(151);
  for (int c = 0; c < 80; ++c) {
    int k = 0;
    Lattice lattice = random_lattice(rng, &k);
    LabelSequence reference =
        testutil::random_labels(1 + static_cast<int>(rng() % 6), k, rng);
    int brute = -1;
    for (const ScoredPath &path : testutil::all_paths(lattice)) {
      int errors = edit_distance(collapse_runs(reference),
                                 collapse_runs(path.labels));
      if (brute < 0 || errors < brute) {
        brute = errors;
      }
    }
    CHECK_EQ(oracle_best_errors(lattice, reference), brute);
  }
}

TEST_CASE("lattice: oracle errors are zero iff some path reads the "
          "reference phones [DERIVED]") {
  Lattice lattice = diamond();
  CHECK_EQ(oracle_best_errors(lattice, {0, 1}), 0);
  CHECK_EQ(oracle_best_errors(lattice, {1, 0}), 0);
  // (1,1) collapses to (1); best reading is one edit away.
  CHECK_EQ(oracle_best_errors(lattice, {1, 1}), 1);
}

TEST_CASE("lattice: save/load round-trip is bit exact [TRIVIAL]") {
  std::mt19937_64 rng(157);
  for (int c = 0; c < 20; ++c) {
    Lattice lattice = random_lattice(rng);
    std::stringstream ss;
    save_lattice(ss, lattice);
    Lattice loaded = load_lattice(ss);
    CHECK_EQ(loaded.num_labels(), lattice.num_labels());
    CHECK_EQ(loaded.num_frames(), lattice.num_frames());
    CHECK_EQ(loaded.num_nodes(), lattice.num_nodes());
    REQUIRE_EQ(loaded.arcs().size(), lattice.arcs().size());
    for (size_t i = 0; i < lattice.arcs().size(); ++i) {
      CHECK_EQ(loaded.arcs()[i].frame, lattice.arcs()[i].frame);
      CHECK_EQ(loaded.arcs()[i].src, lattice.arcs()[i].src);
      CHECK_EQ(loaded.arcs()[i].dst, lattice.arcs()[i].dst);
      CHECK_EQ(loaded.arcs()[i].label, lattice.arcs()[i].label);
      CHECK_EQ(loaded.arcs()[i].score, lattice.arcs()[i].score);
    }
  }
}

TEST_CASE("lattice: archive round-trip preserves ids and order [TRIVIAL]") {
  std::mt19937_64 rng(163);
  LatticeArchive archive;
  archive.ids = {"utt1", "utt2", "utt3"};
  for (int i = 0; i < 3; ++i) {
    archive.lattices.push_back(random_lattice(rng));
  }
  std::stringstream ss;
  save_lattice_archive(ss, archive);
  LatticeArchive loaded = load_lattice_archive(ss);
  CHECK_EQ(loaded.ids, archive.ids);
  CHECK_EQ(loaded.size(), 3);
  CHECK_EQ(loaded.find("utt2"), 1);
  CHECK_THROWS_AS(loaded.find("nope"), InvalidArgument);
}

TEST_CASE("lattice: malformed structures are rejected [TRIVIAL]") {
  // Arc that skips a frame boundary.
  std::vector<LatticeArc> skip{{0, 0, 1, 0, 0.0}, {0, 1, 2, 0, 0.0}};
  CHECK_THROWS_AS(Lattice(2, 2, 3, skip), StructureError);
  // Dead-end interior node.
  std::vector<LatticeArc> dead{
      {0, 0, 1, 0, 0.0}, {0, 0, 2, 1, 0.0}, {1, 1, 3, 0, 0.0}};
  CHECK_THROWS_AS(Lattice(2, 2, 4, dead), StructureError);
  // Label out of range.
  std::vector<LatticeArc> badlabel{{0, 0, 1, 5, 0.0}};
  CHECK_THROWS_AS(Lattice(2, 1, 2, badlabel), StructureError);
}

TEST_CASE("lattice: truncated serialization raises a parse error "
          "[TRIVIAL]") {
  std::stringstream ss("2 2\n0 0 1 0 1.5\n");
  CHECK_THROWS_AS(load_lattice(ss), ParseError);
}

}  // namespace structseq
