// tests/mlp_test.cpp

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

#include "doctest.h"
#include "structseq/error.hpp"
#include "structseq/mlp.hpp"
#include "test_util.hpp"

namespace structseq {

TEST_CASE("mlp: sigmoid midpoint, symmetry and saturation [TRIVIAL]") {
  CHECK_EQ(sigmoid(0.0), 0.5);
  CHECK(sigmoid(2.0) + sigmoid(-2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-700.0) > 0.0);  // stable branch, no overflow in exp
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(std::isfinite(sigmoid(-800.0)));
}

TEST_CASE("mlp: softmax rows are a probability vector [TRIVIAL]") {
  Eigen::VectorXd z(3);
  z << 1000.0, 1001.0, 999.0;  // must survive the shift
  Eigen::VectorXd p = softmax(z);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.minCoeff() > 0.0);
  CHECK(p(1) > p(0));
  CHECK(p(0) > p(2));
  CHECK_THROWS_AS(softmax(Eigen::VectorXd(0)), InvalidArgument);
}

TEST_CASE("mlp: one-layer forward equals the sigmoid of an affine map "
          "[DERIVED]") {
  MlpParams params;
  Eigen::MatrixXd w(1, 3);
  w << 0.5, -1.0, 0.25;  // two inputs plus bias
  params.weights.push_back(w);
  Eigen::VectorXd x(2);
  x << 2.0, 1.0;
  auto [score, trace] = mlp_forward(params, x);
  CHECK(score == doctest::Approx(sigmoid(0.5 * 2.0 - 1.0 + 0.25)));
  CHECK_EQ(trace.output.size(), 1);
}

TEST_CASE("mlp: forward is deterministic and score lies in (0,1) "
          "[DERIVED]") {
  std::mt19937_64 rng(73);
  for (int c = 0; c < 100; ++c) {
    int in = 2 + static_cast<int>(rng() % 4);
    int hidden = 1 + static_cast<int>(rng() % 5);
    MlpParams params = testutil::random_net({in, hidden, 1}, rng);
    Eigen::VectorXd x(in);
    for (int i = 0; i < in; ++i) {
      x(i) = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    }
    auto [s1, t1] = mlp_forward(params, x);
    auto [s2, t2] = mlp_forward(params, x);
    CHECK_EQ(s1, s2);
    CHECK(s1 > 0.0);
    CHECK(s1 < 1.0);
  }
}

TEST_CASE("mlp: backward matches central finite differences [DERIVED]") {
  std::mt19937_64 rng(79);
  const double eps = 1e-6;
  for (int c = 0; c < 10; ++c) {
    std::vector<int> sizes{3, 4, 1};
    if (c % 2) {
      sizes = {2, 3, 2, 1};
    }
    MlpParams params = testutil::random_net(sizes, rng);
    Eigen::VectorXd x(sizes.front());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    }
    double upstream = 1.0 + (c % 3);
    auto [score, trace] = mlp_forward(params, x);
    (void)score;
    MlpGradients grads = mlp_backward(params, trace, upstream);
    for (size_t l = 0; l < params.weights.size(); ++l) {
      for (Eigen::Index r = 0; r < params.weights[l].rows(); ++r) {
        for (Eigen::Index col = 0; col < params.weights[l].cols(); ++col) {
          MlpParams probe = params;
          probe.weights[l](r, col) += eps;
          double up = mlp_forward(probe, x).first;
          probe.weights[l](r, col) -= 2 * eps;
          double down = mlp_forward(probe, x).first;
          double numeric = upstream * (up - down) / (2 * eps);
          CHECK(grads.weights[l](r, col) ==
                doctest::Approx(numeric).epsilon(1e-5));
        }
      }
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd probe = x;
      probe(i) += eps;
      double up = mlp_forward(params, probe).first;
      probe(i) -= 2 * eps;
      double down = mlp_forward(params, probe).first;
      CHECK(grads.input(i) ==
            doctest::Approx(upstream * (up - down) / (2 * eps))
                .epsilon(1e-5));
    }
  }
}

TEST_CASE("mlp: softmax head backward matches finite differences "
          "[DERIVED]") {
  std::mt19937_64 rng(83);
  const double eps = 1e-6;
  MlpParams params = testutil::random_net({3, 4, 3}, rng);
  Eigen::VectorXd x(3);
  x << 0.3, -0.8, 1.1;
  Eigen::VectorXd out_grad(3);
  out_grad << 0.7, -1.3, 0.4;
  MlpTrace trace = stack_forward(params, x, OutputHead::kSoftmax);
  MlpGradients grads = stack_backward(params, trace, out_grad);
  auto objective = [&](const MlpParams &p) {
    return out_grad.dot(stack_forward(p, x, OutputHead::kSoftmax).output);
  };
  for (size_t l = 0; l < params.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < params.weights[l].rows(); ++r) {
      for (Eigen::Index col = 0; col < params.weights[l].cols(); ++col) {
        MlpParams probe = params;
        probe.weights[l](r, col) += eps;
        double up = objective(probe);
        probe.weights[l](r, col) -= 2 * eps;
        double down = objective(probe);
        CHECK(grads.weights[l](r, col) ==
              doctest::Approx((up - down) / (2 * eps)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("mlp: sgd momentum step follows the update rule exactly "
          "[DERIVED]") {
  MlpParams params;
  params.weights.push_back(Eigen::MatrixXd::Constant(1, 2, 1.0));
  std::vector<Eigen::MatrixXd> grads{Eigen::MatrixXd::Constant(1, 2, 0.5)};
  MlpVelocity velocity = zero_velocity(params);
  SgdConfig config{0.1, 0.9, 1e-3, 0.2};

  // Step 1: v = -lr*(g + l2*w) = -0.1*(0.5 + 0.2*1) = -0.07; w = 0.93.
  sgd_momentum_step(params, grads, velocity, config);
  CHECK(params.weights[0](0, 0) == doctest::Approx(0.93).epsilon(1e-12));
  CHECK(velocity[0](0, 1) == doctest::Approx(-0.07).epsilon(1e-12));

  // Step 2: v = 0.9*(-0.07) - 0.1*(0.5 + 0.2*0.93) = -0.1316; w = 0.7984.
  sgd_momentum_step(params, grads, velocity, config);
  CHECK(params.weights[0](0, 0) == doctest::Approx(0.7984).epsilon(1e-12));
}

TEST_CASE("mlp: sgd step rejects non-finite updates [TRIVIAL]") {
  MlpParams params;
  params.weights.push_back(Eigen::MatrixXd::Constant(1, 2, 1.0));
  std::vector<Eigen::MatrixXd> grads{
      Eigen::MatrixXd::Constant(1, 2, std::nan(""))};
  MlpVelocity velocity = zero_velocity(params);
  SgdConfig config;
  CHECK_THROWS_AS(sgd_momentum_step(params, grads, velocity, config),
                  NumericError);
}

TEST_CASE("mlp: init_weights is seed-deterministic with zero biases "
          "[TRIVIAL]") {
  MlpParams a = init_weights({4, 3, 1}, 11);
  MlpParams b = init_weights({4, 3, 1}, 11);
  MlpParams c = init_weights({4, 3, 1}, 12);
  REQUIRE_EQ(a.num_layers(), 2);
  for (int l = 0; l < a.num_layers(); ++l) {
    CHECK_EQ((a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff(), 0.0);
    CHECK_EQ(a.weights[l].col(a.weights[l].cols() - 1).cwiseAbs().maxCoeff(),
             0.0);
  }
  CHECK((a.weights[0] - c.weights[0]).cwiseAbs().maxCoeff() > 0.0);
  // Glorot bound for layer 0: sqrt(6 / (4 + 3)).
  double bound = std::sqrt(6.0 / 7.0);
  CHECK(a.weights[0].leftCols(4).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("mlp: validate rejects mismatched layer chains [TRIVIAL]") {
  MlpParams params;
  params.weights.push_back(Eigen::MatrixXd::Zero(3, 5));  // 4 inputs
  params.weights.push_back(Eigen::MatrixXd::Zero(1, 3));  // wants 2, got 3
  CHECK_THROWS_AS(params.validate(), ShapeError);
  MlpParams multi = init_weights({3, 2}, 1);
  Eigen::VectorXd x(3);
  x << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(mlp_forward(multi, x), ShapeError);
}

TEST_CASE("mlp: forward rejects wrong input width [TRIVIAL]") {
  MlpParams params = init_weights({3, 2, 1}, 5);
  Eigen::VectorXd x(4);
  x.setZero();
  CHECK_THROWS_AS(mlp_forward(params, x), ShapeError);
}

}  // namespace structseq
