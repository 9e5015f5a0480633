// src/gradcheck.cpp

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

#include "structseq/gradcheck.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "structseq/error.hpp"
#include "structseq/features.hpp"
#include "structseq/fsdnn.hpp"
#include "structseq/metrics.hpp"
#include "structseq/mlp.hpp"
#include "structseq/rng.hpp"
#include "structseq/sdnn.hpp"
#include "structseq/types.hpp"

namespace structseq {

namespace {

constexpr double kEps = 1e-5;

void note(GradCheckReport &report, double analytic, double numeric,
          const std::string &where) {
  double err = relative_error(analytic, numeric);
  if (err > report.max_relative_error) {
    report.max_relative_error = err;
    report.worst_coordinate = where;
  }
}

// Central difference of a scalar function of one coordinate.
double central_diff(double &coord, const std::function<double()> &f) {
  double saved = coord;
  coord = saved + kEps;
  double hi = f();
  coord = saved - kEps;
  double lo = f();
  coord = saved;
  return (hi - lo) / (2.0 * kEps);
}

// Negative control: corrupt the largest-magnitude analytic entry.
void corrupt_largest(std::vector<Eigen::MatrixXd> &grads) {
  double best = -1.0;
  Eigen::MatrixXd *where = nullptr;
  Eigen::Index wr = 0;
  Eigen::Index wc = 0;
  for (Eigen::MatrixXd &g : grads) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c) {
        if (std::abs(g(r, c)) > best) {
          best = std::abs(g(r, c));
          where = &g;
          wr = r;
          wc = c;
        }
      }
    }
  }
  if (where != nullptr) {
    (*where)(wr, wc) = -(*where)(wr, wc) - 0.5;
  }
}

MlpParams random_net(const std::vector<int> &sizes, std::mt19937_64 &rng) {
  MlpParams params = init_weights(sizes, rng());
  std::uniform_real_distribution<double> noise(-0.5, 0.5);
  for (Eigen::MatrixXd &w : params.weights) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      w(r, w.cols() - 1) = noise(rng);
    }
  }
  return params;
}

std::string coord_name(int c, const char *net, size_t layer, Eigen::Index r,
                       Eigen::Index col) {
  return "case " + std::to_string(c) + " " + net + " layer " +
         std::to_string(layer) + " (" + std::to_string(r) + "," +
         std::to_string(col) + ")";
}

}  // namespace

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

GradCheckReport gradcheck_mlp(std::uint64_t seed, int cases, bool sabotage) {
  GradCheckReport report;
  for (int c = 0; c < cases; ++c) {
    std::mt19937_64 rng = make_rng(seed, 0x6c01, c);
    std::uniform_int_distribution<int> depth(1, 3);
    std::uniform_int_distribution<int> width(2, 5);
    std::uniform_int_distribution<int> input_dim(2, 6);
    std::uniform_real_distribution<double> real(-1.5, 1.5);

    std::vector<int> sizes{input_dim(rng)};
    int hidden = depth(rng);
    for (int l = 0; l < hidden; ++l) {
      sizes.push_back(width(rng));
    }
    sizes.push_back(1);
    MlpParams params = random_net(sizes, rng);
    Eigen::VectorXd input(sizes.front());
    for (int i = 0; i < sizes.front(); ++i) {
      input(i) = real(rng);
    }
    double upstream = real(rng) + 2.0;

    auto [score, trace] = mlp_forward(params, input);
    (void)score;
    MlpGradients grads = mlp_backward(params, trace, upstream);
    if (sabotage) {
      corrupt_largest(grads.weights);
    }

    auto value = [&] { return upstream * mlp_forward(params, input).first; };
    for (size_t l = 0; l < params.weights.size(); ++l) {
      Eigen::MatrixXd &w = params.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index col = 0; col < w.cols(); ++col) {
          double numeric = central_diff(w(r, col), value);
          note(report, grads.weights[l](r, col), numeric,
               coord_name(c, "mlp", l, r, col));
        }
      }
    }
    for (Eigen::Index i = 0; i < input.size(); ++i) {
      double numeric = central_diff(input(i), value);
      note(report, grads.input(i), numeric,
           "case " + std::to_string(c) + " input " + std::to_string(i));
    }
  }
  return report;
}

namespace {

struct LossCase {
  FrameMatrix features;
  TrainingExampleSet examples;
  MlpParams scorer;
  SdnnLoss loss = SdnnLoss::kMaxMargin;
  int num_labels = 0;
};

// Margin terms sitting on the hinge boundary make finite differences
// meaningless, so such draws are rejected.
bool near_hinge_boundary(const LossCase &one) {
  if (one.loss != SdnnLoss::kMaxMargin) {
    return false;
  }
  StructuredFeature pos = psi_first_order(one.features,
                                          one.examples.reference,
                                          one.num_labels);
  double pos_score = mlp_forward(one.scorer, pos.values).first;
  for (const NegativeExample &neg : one.examples.negatives) {
    StructuredFeature psi =
        psi_first_order(one.features, neg.labels, one.num_labels);
    double gap = mlp_forward(one.scorer, psi.values).first +
                 neg.delta_value - pos_score;
    if (std::abs(gap) < 1e-3) {
      return true;
    }
  }
  return false;
}

LossCase make_loss_case(std::uint64_t seed, int c) {
  for (int attempt = 0;; ++attempt) {
    std::mt19937_64 rng = make_rng(seed, 0x6c02,
                                   (static_cast<std::uint64_t>(attempt) << 32) |
                                       static_cast<std::uint64_t>(c));
    std::uniform_int_distribution<int> k_dist(2, 3);
    std::uniform_int_distribution<int> d_dist(2, 3);
    std::uniform_int_distribution<int> m_dist(3, 5);
    std::uniform_real_distribution<double> real(-1.0, 1.0);

    LossCase one;
    one.num_labels = k_dist(rng);
    int d = d_dist(rng);
    int m = m_dist(rng);
    one.loss = (c % 2 == 0) ? SdnnLoss::kApproxAcc : SdnnLoss::kMaxMargin;
    one.features.resize(m, d);
    for (int j = 0; j < m; ++j) {
      for (int col = 0; col < d; ++col) {
        one.features(j, col) = real(rng);
      }
    }
    one.examples.reference = random_sequence(one.num_labels, m, rng);
    for (int neg = 0; neg < 2; ++neg) {
      LabelSequence labels = random_sequence(one.num_labels, m, rng);
      if (labels == one.examples.reference) {
        labels[0] = (labels[0] + 1) % one.num_labels;
      }
      NegativeExample example;
      example.delta_value =
          delta(one.examples.reference, labels, DistanceKind::kPhoneEdit);
      example.labels = std::move(labels);
      one.examples.negatives.push_back(std::move(example));
    }
    int feat = static_cast<int>(
        feature_size(FeatureOrder::kFirst, d, one.num_labels));
    one.scorer = random_net({feat, 4, 1}, rng);
    if (!near_hinge_boundary(one)) {
      return one;
    }
    if (attempt > 64) {
      throw NumericError("gradcheck_losses: cannot avoid hinge boundary");
    }
  }
}

}  // namespace

GradCheckReport gradcheck_losses(std::uint64_t seed, int cases,
                                 bool sabotage) {
  GradCheckReport report;
  for (int c = 0; c < cases; ++c) {
    LossCase one = make_loss_case(seed, c);
    std::vector<Eigen::MatrixXd> grads;
    for (const Eigen::MatrixXd &w : one.scorer.weights) {
      grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    FrameMatrix feature_grad =
        FrameMatrix::Zero(one.features.rows(), one.features.cols());
    sdnn_example_pass(one.scorer, one.features, one.examples, one.loss,
                      one.num_labels, &grads, &feature_grad);
    if (sabotage) {
      corrupt_largest(grads);
    }

    auto value = [&] {
      return sdnn_example_pass(one.scorer, one.features, one.examples,
                               one.loss, one.num_labels, nullptr, nullptr);
    };
    for (size_t l = 0; l < one.scorer.weights.size(); ++l) {
      Eigen::MatrixXd &w = one.scorer.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index col = 0; col < w.cols(); ++col) {
          double numeric = central_diff(w(r, col), value);
          note(report, grads[l](r, col), numeric,
               coord_name(c, "scorer", l, r, col));
        }
      }
    }
    for (Eigen::Index j = 0; j < one.features.rows(); ++j) {
      for (Eigen::Index col = 0; col < one.features.cols(); ++col) {
        double numeric = central_diff(one.features(j, col), value);
        note(report, feature_grad(j, col), numeric,
             "case " + std::to_string(c) + " feature (" + std::to_string(j) +
                 "," + std::to_string(col) + ")");
      }
    }
  }
  return report;
}

GradCheckReport gradcheck_fsdnn(std::uint64_t seed, int cases,
                                bool sabotage) {
  GradCheckReport report;
  for (int c = 0; c < cases; ++c) {
    std::mt19937_64 rng = make_rng(seed, 0x6c03, c);
    std::uniform_int_distribution<int> k_dist(2, 3);
    std::uniform_int_distribution<int> d_dist(2, 4);
    std::uniform_int_distribution<int> m_dist(3, 4);
    std::uniform_int_distribution<int> depth(1, 2);
    std::uniform_int_distribution<int> width(2, 4);
    std::uniform_real_distribution<double> real(-1.0, 1.0);

    int k = k_dist(rng);
    int d_raw = d_dist(rng);
    int m = m_dist(rng);
    FsdnnParams params;
    {
      std::vector<int> sizes{d_raw};
      int hidden = depth(rng);
      for (int l = 0; l < hidden; ++l) {
        sizes.push_back(width(rng));
      }
      sizes.push_back(k);
      params.frontend.net = random_net(sizes, rng);
    }
    {
      int feat = static_cast<int>(feature_size(FeatureOrder::kFirst, k, k));
      std::vector<int> sizes{feat};
      int hidden = depth(rng);
      for (int l = 0; l < hidden; ++l) {
        sizes.push_back(width(rng));
      }
      sizes.push_back(1);
      params.scorer = random_net(sizes, rng);
    }
    FrameMatrix raw(m, d_raw);
    for (int j = 0; j < m; ++j) {
      for (int col = 0; col < d_raw; ++col) {
        raw(j, col) = real(rng);
      }
    }
    LabelSequence labels = random_sequence(k, m, rng);
    double upstream = real(rng) + 2.0;

    auto [score, trace] = fsdnn_forward(params, raw, labels);
    (void)score;
    FsdnnGradients grads = fsdnn_backward(params, trace, upstream);
    if (sabotage) {
      corrupt_largest(grads.frontend);
    }

    auto value = [&] {
      return upstream * fsdnn_forward(params, raw, labels).first;
    };
    for (size_t l = 0; l < params.frontend.net.weights.size(); ++l) {
      Eigen::MatrixXd &w = params.frontend.net.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index col = 0; col < w.cols(); ++col) {
          double numeric = central_diff(w(r, col), value);
          note(report, grads.frontend[l](r, col), numeric,
               coord_name(c, "frontend", l, r, col));
        }
      }
    }
    for (size_t l = 0; l < params.scorer.weights.size(); ++l) {
      Eigen::MatrixXd &w = params.scorer.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index col = 0; col < w.cols(); ++col) {
          double numeric = central_diff(w(r, col), value);
          note(report, grads.scorer[l](r, col), numeric,
               coord_name(c, "scorer", l, r, col));
        }
      }
    }
  }
  return report;
}

}  // namespace structseq
