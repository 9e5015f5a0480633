// tests/io_test.cpp

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

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "structseq/error.hpp"
#include "structseq/io.hpp"
#include "test_util.hpp"

namespace structseq {

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (!same_bits(a(r, c), b(r, c))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("io: model kinds name their alternative [TRIVIAL]") {
  std::mt19937_64 rng(401);
  CHECK_EQ(model_kind(Model(LinearParams::zeros(2, 3))), "linear");
  CHECK_EQ(model_kind(Model(testutil::random_net({3, 2, 1}, rng))), "mlp");
  FsdnnParams pipeline;
  pipeline.frontend.net = testutil::random_net({2, 3}, rng);
  pipeline.scorer = testutil::random_net({18, 1}, rng);
  CHECK_EQ(model_kind(Model(pipeline)), "fsdnn");
}

TEST_CASE("io: linear models survive a round-trip bit for bit [DERIVED]") {
  LinearParams params = LinearParams::zeros(2, 2);
  // Awkward values: repeating fractions, tiny magnitudes, signed zero.
  Eigen::VectorXd theta(8);
  theta << 0.1, 1.0 / 3.0, -2.5e-17, 1e-300, 123456.78901234567, -0.0,
      3.0 + 1e-15, -1.0 / 7.0;
  params.theta = theta;
  std::stringstream ss;
  save_model(ss, Model(params));
  Model loaded = load_model(ss);
  REQUIRE(std::holds_alternative<LinearParams>(loaded));
  const LinearParams &got = std::get<LinearParams>(loaded);
  CHECK_EQ(got.frame_dim, 2);
  CHECK_EQ(got.num_labels, 2);
  REQUIRE_EQ(got.theta.size(), theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    CHECK(same_bits(got.theta(i), theta(i)));
  }
}

TEST_CASE("io: mlp and fsdnn models survive a round-trip bit for bit "
          "[DERIVED]") {
  std::mt19937_64 rng(409);
  Model mlp(testutil::random_net({5, 4, 1}, rng));
  std::stringstream ss;
  save_model(ss, mlp);
  Model mlp_back = load_model(ss);
  REQUIRE(std::holds_alternative<MlpParams>(mlp_back));
  const MlpParams &a = std::get<MlpParams>(mlp);
  const MlpParams &b = std::get<MlpParams>(mlp_back);
  REQUIRE_EQ(a.weights.size(), b.weights.size());
  for (size_t l = 0; l < a.weights.size(); ++l) {
    CHECK(same_bits(a.weights[l], b.weights[l]));
  }

  FsdnnParams pipeline;
  pipeline.frontend.net = testutil::random_net({2, 4, 3}, rng);
  pipeline.scorer = testutil::random_net({18, 3, 1}, rng);
  std::stringstream ss2;
  save_model(ss2, Model(pipeline));
  Model fsdnn_back = load_model(ss2);
  REQUIRE(std::holds_alternative<FsdnnParams>(fsdnn_back));
  const FsdnnParams &got = std::get<FsdnnParams>(fsdnn_back);
  for (size_t l = 0; l < pipeline.frontend.net.weights.size(); ++l) {
    CHECK(same_bits(got.frontend.net.weights[l],
                    pipeline.frontend.net.weights[l]));
  }
  for (size_t l = 0; l < pipeline.scorer.weights.size(); ++l) {
    CHECK(same_bits(got.scorer.weights[l], pipeline.scorer.weights[l]));
  }
}

TEST_CASE("io: typed loads reject the wrong model kind [TRIVIAL]") {
  std::mt19937_64 rng(419);
  std::string path = testutil::scratch_file("kind_probe.model");
  save_model_file(path, Model(testutil::random_net({3, 2, 1}, rng)));
  CHECK_NOTHROW(load_mlp_model_file(path));
  CHECK_THROWS_AS(load_linear_model_file(path), KindError);
  CHECK_THROWS_AS(load_fsdnn_model_file(path), KindError);
  CHECK_THROWS_AS(load_model_file(testutil::scratch_file("absent.model")),
                  ParseError);
}

TEST_CASE("io: model headers and shapes are enforced [TRIVIAL]") {
  std::stringstream bad_magic("structseq model v2\nkind mlp\n");
  CHECK_THROWS_AS(load_model(bad_magic), VersionError);
  std::stringstream truncated("structseq model v1\nkind mlp\nlayers 2\n");
  CHECK_THROWS_AS(load_model(truncated), ParseError);
  std::stringstream mismatched(
      "structseq model v1\nkind mlp\nlayers 2\n"
      "weight 2 3\n1 0 0\n0 1 0\n"
      "weight 1 4\n1 2 3 4\n");
  CHECK_THROWS_AS(load_model(mismatched), ShapeError);
}

TEST_CASE("io: training logs round-trip, keeping a NaN dev column "
          "[DERIVED]") {
  std::vector<TrainLogRow> rows{
      {0, 0.75, 4e-6, std::nan("")},
      {1, 1.0 / 3.0, 2e-6, 31.25},
  };
  std::string path = testutil::scratch_file("train.log");
  save_train_log_file(path, rows);
  std::vector<TrainLogRow> got = load_train_log_file(path);
  REQUIRE_EQ(got.size(), 2u);
  CHECK_EQ(got[0].epoch, 0);
  CHECK(same_bits(got[0].loss, 0.75));
  CHECK(same_bits(got[0].learning_rate, 4e-6));
  CHECK(std::isnan(got[0].dev_per));
  CHECK(same_bits(got[1].loss, 1.0 / 3.0));
  CHECK(same_bits(got[1].dev_per, 31.25));

  std::string junk = testutil::scratch_file("not_a.log");
  std::ofstream(junk) << "something else\n";
  CHECK_THROWS_AS(load_train_log_file(junk), ParseError);
}

TEST_CASE("io: hypotheses round-trip and reject foreign headers "
          "[TRIVIAL]") {
  std::vector<Hypothesis> hyps{
      {"utt00000", {0, 1, 1, 2}},
      {"utt00001", {3}},
  };
  std::stringstream ss;
  save_hyps(ss, hyps);
  std::vector<Hypothesis> got = load_hyps(ss);
  REQUIRE_EQ(got.size(), 2u);
  CHECK_EQ(got[0].utterance_id, "utt00000");
  CHECK_EQ(got[0].labels, LabelSequence({0, 1, 1, 2}));
  CHECK_EQ(got[1].labels, LabelSequence({3}));

  std::stringstream wrong("structseq corpus v1\n");
  CHECK_THROWS_AS(load_hyps(wrong), VersionError);
  std::stringstream short_row("structseq hyps v1\nutt0 3 1 2\n");
  CHECK_THROWS_AS(load_hyps(short_row), ParseError);
}

TEST_CASE("io: the score/accuracy export is plain CSV [TRIVIAL]") {
  std::vector<ScoreAccuracyRow> rows{
      {"utt00004", 1, 0.625, 1.0},
      {"utt00004", 2, 0.5, 0.75},
  };
  std::stringstream ss;
  save_score_accuracy(ss, rows);
  std::string line;
  std::getline(ss, line);
  CHECK_EQ(line, "utterance_id,path_rank,score,accuracy");
  std::getline(ss, line);
  CHECK_EQ(line, "utt00004,1,0.625,1");
  std::getline(ss, line);
  CHECK_EQ(line, "utt00004,2,0.5,0.75");
}

}  // namespace structseq
