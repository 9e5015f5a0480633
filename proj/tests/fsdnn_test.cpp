// tests/fsdnn_test.cpp

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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "structseq/corpus.hpp"
#include "structseq/error.hpp"
#include "structseq/fsdnn.hpp"
#include "structseq/linear.hpp"
#include "test_util.hpp"

namespace structseq {

namespace {

constexpr int kK = 3;
constexpr int kD = 2;

FrontEndParams random_frontend(std::mt19937_64 &rng, int hidden = 4) {
  FrontEndParams frontend;
  frontend.net = testutil::random_net({kD, hidden, kK}, rng);
  return frontend;
}

FsdnnParams random_pipeline(std::mt19937_64 &rng, int hidden = 4) {
  FsdnnParams params;
  params.frontend = random_frontend(rng, hidden);
  params.scorer = testutil::random_net(
      {static_cast<int>(feature_size(FeatureOrder::kFirst, kK, kK)), 3, 1},
      rng);
  return params;
}

}  // namespace

TEST_CASE("fsdnn: posteriorgram rows are distributions [DERIVED]") {
  std::mt19937_64 rng(307);
  for (int c = 0; c < 30; ++c) {
    FrontEndParams frontend = random_frontend(rng);
    FrameMatrix raw = testutil::random_frames(5, kD, rng);
    FrameMatrix post = frontend_forward(frontend, raw);
    CHECK_EQ(post.rows(), 5);
    CHECK_EQ(post.cols(), kK);
    for (Eigen::Index j = 0; j < post.rows(); ++j) {
      CHECK(post.row(j).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (Eigen::Index k = 0; k < post.cols(); ++k) {
        CHECK(post(j, k) > 0.0);
        CHECK(post(j, k) < 1.0);
      }
    }
    FrameMatrix again = frontend_forward(frontend, raw);
    CHECK_EQ((post - again).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST_CASE("fsdnn: a linear frontend is a plain softmax over logits "
          "[DERIVED]") {
  FrontEndParams frontend;
  // Identity logits with zero bias: post = softmax(x).
  Eigen::MatrixXd w(2, 3);
  w << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  frontend.net.weights = {w};
  FrameMatrix raw(1, 2);
  raw << 0.3, -1.1;
  FrameMatrix post = frontend_forward(frontend, raw);
  double z = std::exp(0.3) + std::exp(-1.1);
  CHECK(post(0, 0) == doctest::Approx(std::exp(0.3) / z).epsilon(1e-12));
  CHECK(post(0, 1) == doctest::Approx(std::exp(-1.1) / z).epsilon(1e-12));
}

TEST_CASE("fsdnn: forward composes frontend, psi and scorer [DERIVED]") {
  std::mt19937_64 rng(311);
  for (int c = 0; c < 20; ++c) {
    FsdnnParams params = random_pipeline(rng);
    FrameMatrix raw = testutil::random_frames(4, kD, rng);
    LabelSequence labels = testutil::random_labels(4, kK, rng);

    auto [score, trace] = fsdnn_forward(params, raw, labels);
    FrameMatrix post = frontend_forward(params.frontend, raw);
    CHECK_EQ((trace.posteriorgram - post).cwiseAbs().maxCoeff(), 0.0);
    StructuredFeature psi = psi_first_order(post, labels, kK);
    CHECK_EQ(score, mlp_forward(params.scorer, psi.values).first);
    CHECK(score > 0.0);
    CHECK(score < 1.0);
  }
}

TEST_CASE("fsdnn: backward matches central differences through the whole "
          "pipeline [DERIVED]") {
  std::mt19937_64 rng(313);
  for (int hidden : {2, 4}) {
    for (int c = 0; c < 4; ++c) {
      FsdnnParams params = random_pipeline(rng, hidden);
      FrameMatrix raw = testutil::random_frames(3, kD, rng);
      LabelSequence labels = testutil::random_labels(3, kK, rng);
      double upstream = 1.3;

      auto [score, trace] = fsdnn_forward(params, raw, labels);
      (void)score;
      FsdnnGradients grads = fsdnn_backward(params, trace, upstream);

      double eps = 1e-6;
      auto numeric = [&](FsdnnParams &probe, Eigen::MatrixXd &w,
                         Eigen::Index r, Eigen::Index col) {
        double keep = w(r, col);
        w(r, col) = keep + eps;
        double up = fsdnn_forward(probe, raw, labels).first;
        w(r, col) = keep - eps;
        double down = fsdnn_forward(probe, raw, labels).first;
        w(r, col) = keep;
        return upstream * (up - down) / (2 * eps);
      };
      FsdnnParams probe = params;
      for (size_t l = 0; l < probe.frontend.net.weights.size(); ++l) {
        Eigen::MatrixXd &w = probe.frontend.net.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          for (Eigen::Index col = 0; col < w.cols(); ++col) {
            CHECK(grads.frontend[l](r, col) ==
                  doctest::Approx(numeric(probe, w, r, col))
                      .epsilon(1e-4)
                      .scale(1.0));
          }
        }
      }
      for (size_t l = 0; l < probe.scorer.weights.size(); ++l) {
        Eigen::MatrixXd &w = probe.scorer.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          for (Eigen::Index col = 0; col < w.cols(); ++col) {
            CHECK(grads.scorer[l](r, col) ==
                  doctest::Approx(numeric(probe, w, r, col))
                      .epsilon(1e-4)
                      .scale(1.0));
          }
        }
      }
    }
  }
}

TEST_CASE("fsdnn: frontend_backward is the adjoint of frontend_forward "
          "[DERIVED]") {
  std::mt19937_64 rng(317);
  for (int c = 0; c < 5; ++c) {
    FrontEndParams frontend = random_frontend(rng);
    FrameMatrix raw = testutil::random_frames(4, kD, rng);
    FrameMatrix sensitivity(4, kK);
    for (Eigen::Index r = 0; r < 4; ++r) {
      for (Eigen::Index k = 0; k < kK; ++k) {
        sensitivity(r, k) =
            std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      }
    }
    // J = <sensitivity, frontend_forward(raw)>.
    std::vector<Eigen::MatrixXd> grads =
        frontend_backward(frontend, raw, sensitivity);
    double eps = 1e-6;
    for (size_t l = 0; l < frontend.net.weights.size(); ++l) {
      Eigen::MatrixXd &w = frontend.net.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index col = 0; col < w.cols(); ++col) {
          double keep = w(r, col);
          w(r, col) = keep + eps;
          double up =
              (sensitivity.array() * frontend_forward(frontend, raw).array())
                  .sum();
          w(r, col) = keep - eps;
          double down =
              (sensitivity.array() * frontend_forward(frontend, raw).array())
                  .sum();
          w(r, col) = keep;
          CHECK(grads[l](r, col) == doctest::Approx((up - down) / (2 * eps))
                                        .epsilon(1e-4)
                                        .scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("fsdnn: pretraining fits a separable frame classifier "
          "[DERIVED]") {
  SyntheticSpec spec = default_spec(kK, kD, 17);
  spec.min_frames = 3;
  spec.max_frames = 6;
  Corpus corpus = generate_corpus(spec, 30);
  FrontendTrainConfig config;
  config.epochs = 8;
  config.seed = 3;

  FrontendTrainResult a = pretrain_frontend(corpus.utterances, {8}, config);
  FrontendTrainResult b = pretrain_frontend(corpus.utterances, {8}, config);
  REQUIRE_EQ(a.losses.size(), 8u);
  CHECK(a.losses.back() < a.losses.front());
  CHECK(a.accuracies.back() > 0.6);
  CHECK_EQ(a.params.net.input_size(), kD);
  CHECK_EQ(a.params.net.output_size(), kK);
  for (size_t l = 0; l < a.params.net.weights.size(); ++l) {
    CHECK_EQ((a.params.net.weights[l] - b.params.net.weights[l])
                 .cwiseAbs()
                 .maxCoeff(),
             0.0);
  }
  CHECK_THROWS_AS(pretrain_frontend({}, {8}, config), ConfigError);
}

namespace {

struct JointFixture {
  Corpus corpus;
  LatticeArchive archive;
  FsdnnParams start;
  FsdnnTrainConfig config;

  JointFixture() {
    SyntheticSpec spec = default_spec(kK, kD, 23);
    spec.min_frames = 3;
    spec.max_frames = 5;
    corpus = generate_corpus(spec, 12);
    LinearParams lin = LinearParams::zeros(kD, kK);
    for (const Utterance &utt : corpus.utterances) {
      archive.ids.push_back(utt.id);
      archive.lattices.push_back(beam_lattice(utt.frames, lin, kK));
    }
    start.frontend.net = init_weights({kD, 4, kK}, 31);
    start.scorer = init_weights(
        {static_cast<int>(feature_size(FeatureOrder::kFirst, kK, kK)), 4, 1},
        37);
    config.sdnn.epochs = 2;
    config.sdnn.n_negative = 2;
    config.sdnn.rescore_n = 3;
    config.sdnn.sgd.learning_rate = 1e-3;
    config.sdnn.seed = 41;
  }
};

}  // namespace

TEST_CASE("fsdnn: a frozen frontend reproduces the structured-DNN "
          "trajectory bit for bit [DERIVED]") {
  JointFixture fx;
  std::vector<Utterance> train = fx.corpus.split_utterances(Split::kTrain);
  std::vector<Utterance> dev = fx.corpus.split_utterances(Split::kDev);

  fx.config.frontend_lr = 0.0;
  FsdnnTrainResult joint =
      train_fsdnn(train, dev, fx.archive, fx.start, fx.config);

  // Train the plain structured DNN on the exported posteriorgrams.
  std::vector<Utterance> exported = train;
  for (Utterance &utt : exported) {
    utt.frames = frontend_forward(fx.start.frontend, utt.frames);
  }
  std::vector<Utterance> exported_dev = dev;
  for (Utterance &utt : exported_dev) {
    utt.frames = frontend_forward(fx.start.frontend, utt.frames);
  }
  SdnnTrainResult plain = train_sdnn(exported, exported_dev, fx.archive,
                                     fx.start.scorer, fx.config.sdnn);

  REQUIRE_EQ(joint.params.scorer.weights.size(),
             plain.params.weights.size());
  for (size_t l = 0; l < plain.params.weights.size(); ++l) {
    CHECK_EQ((joint.params.scorer.weights[l] - plain.params.weights[l])
                 .cwiseAbs()
                 .maxCoeff(),
             0.0);
  }
  CHECK_EQ(joint.losses, plain.losses);
  CHECK_EQ(joint.dev_per, plain.dev_per);
  // And the frontend itself did not move.
  for (size_t l = 0; l < fx.start.frontend.net.weights.size(); ++l) {
    CHECK_EQ((joint.params.frontend.net.weights[l] -
              fx.start.frontend.net.weights[l])
                 .cwiseAbs()
                 .maxCoeff(),
             0.0);
  }
}

TEST_CASE("fsdnn: a positive frontend rate actually moves the frontend "
          "[DERIVED]") {
  JointFixture fx;
  std::vector<Utterance> train = fx.corpus.split_utterances(Split::kTrain);
  fx.config.frontend_lr = 1e-2;
  FsdnnTrainResult joint =
      train_fsdnn(train, {}, fx.archive, fx.start, fx.config);
  double moved = 0.0;
  for (size_t l = 0; l < fx.start.frontend.net.weights.size(); ++l) {
    moved += (joint.params.frontend.net.weights[l] -
              fx.start.frontend.net.weights[l])
                 .cwiseAbs()
                 .sum();
  }
  CHECK(moved > 0.0);
}

TEST_CASE("fsdnn: configuration and shape guards [TRIVIAL]") {
  JointFixture fx;
  std::vector<Utterance> train = fx.corpus.split_utterances(Split::kTrain);
  fx.config.frontend_lr = -1.0;
  CHECK_THROWS_AS(train_fsdnn(train, {}, fx.archive, fx.start, fx.config),
                  ConfigError);

  FsdnnParams bad = fx.start;
  bad.scorer = init_weights({5, 3, 1}, 1);
  CHECK_THROWS_AS(bad.validate(), ShapeError);

  std::mt19937_64 rng(349);
  FrontEndParams frontend = random_frontend(rng);
  FrameMatrix wrong = testutil::random_frames(3, kD + 1, rng);
  CHECK_THROWS_AS(frontend_forward(frontend, wrong), ShapeError);
}

}  // namespace structseq
