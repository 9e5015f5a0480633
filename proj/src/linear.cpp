// src/linear.cpp

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

#include "structseq/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "structseq/error.hpp"
#include "structseq/features.hpp"
#include "structseq/log.hpp"
#include "structseq/rng.hpp"

namespace structseq {

void LinearParams::validate() const {
  if (frame_dim < 1 || num_labels < 1) {
    throw ShapeError("LinearParams: need positive D and K");
  }
  Eigen::Index want = feature_size(FeatureOrder::kFirst, frame_dim,
                                   num_labels);
  if (theta.size() != want) {
    throw ShapeError("LinearParams: theta has length " +
                     std::to_string(theta.size()) + ", want " +
                     std::to_string(want));
  }
  if (!theta.allFinite()) {
    throw ShapeError("LinearParams: non-finite theta");
  }
}

LinearParams LinearParams::zeros(int frame_dim, int num_labels) {
  LinearParams params;
  params.frame_dim = frame_dim;
  params.num_labels = num_labels;
  params.theta = Eigen::VectorXd::Zero(
      feature_size(FeatureOrder::kFirst, frame_dim, num_labels));
  return params;
}

double score_linear(const Eigen::Ref<const FrameMatrix> &frames,
                    const LabelSequence &labels, const LinearParams &params) {
  params.validate();
  if (frames.cols() != params.frame_dim) {
    throw ShapeError("score_linear: frame_dim " +
                     std::to_string(frames.cols()) + ", model expects " +
                     std::to_string(params.frame_dim));
  }
  StructuredFeature psi = psi_first_order(frames, labels, params.num_labels);
  return params.theta.dot(psi.values);
}

namespace {

// Per-frame emission scores (M x K) under theta's observation half.
Eigen::MatrixXd emission_scores(const Eigen::Ref<const FrameMatrix> &frames,
                                const LinearParams &params) {
  int k = params.num_labels;
  int d = params.frame_dim;
  Eigen::Map<const Eigen::MatrixXd> obs(params.theta.data(), d, k);
  return frames * obs;
}

Eigen::MatrixXd transition_scores(const LinearParams &params) {
  int k = params.num_labels;
  Eigen::Map<const Eigen::MatrixXd> trans(
      params.theta.data() + static_cast<Eigen::Index>(params.frame_dim) * k,
      k, k);
  return trans;  // (from, to) at trans(from, to): index from + to*K
}

// Backward DP over emissions+transitions, then a greedy forward pass that
// prefers the smallest label on ties, which yields the lexicographically
// smallest argmax.
LabelSequence decode_scores(const Eigen::MatrixXd &emission,
                            const Eigen::MatrixXd &transition) {
  int m = static_cast<int>(emission.rows());
  int k = static_cast<int>(emission.cols());
  Eigen::MatrixXd beta(m, k);
  beta.row(m - 1).setZero();
  for (int j = m - 2; j >= 0; --j) {
    for (int a = 0; a < k; ++a) {
      double best = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < k; ++b) {
        best = std::max(best,
                        transition(a, b) + emission(j + 1, b) + beta(j + 1, b));
      }
      beta(j, a) = best;
    }
  }
  LabelSequence labels(m);
  for (int j = 0; j < m; ++j) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int b = 0; b < k; ++b) {
      double v = emission(j, b) + beta(j, b) +
                 (j > 0 ? transition(labels[j - 1], b) : 0.0);
      if (v > best) {
        best = v;
        arg = b;
      }
    }
    labels[j] = arg;
  }
  return labels;
}

void check_frames(const Eigen::Ref<const FrameMatrix> &frames,
                  const LinearParams &params, const char *who) {
  params.validate();
  validate_frames(frames);
  if (frames.cols() != params.frame_dim) {
    throw ShapeError(std::string(who) + ": frame_dim " +
                     std::to_string(frames.cols()) + ", model expects " +
                     std::to_string(params.frame_dim));
  }
}

}  // namespace

LabelSequence viterbi_decode(const Eigen::Ref<const FrameMatrix> &frames,
                             const LinearParams &params) {
  check_frames(frames, params, "viterbi_decode");
  return decode_scores(emission_scores(frames, params),
                       transition_scores(params));
}

LabelSequence loss_augmented_decode(const Eigen::Ref<const FrameMatrix> &frames,
                                    const LabelSequence &reference,
                                    const LinearParams &params) {
  check_frames(frames, params, "loss_augmented_decode");
  validate_labels(reference, params.num_labels);
  int m = static_cast<int>(frames.rows());
  if (static_cast<int>(reference.size()) != m) {
    throw ShapeError("loss_augmented_decode: reference length " +
                     std::to_string(reference.size()) + " for " +
                     std::to_string(m) + " frames");
  }
  Eigen::MatrixXd emission = emission_scores(frames, params);
  double bonus = 1.0 / m;
  for (int j = 0; j < m; ++j) {
    for (int b = 0; b < params.num_labels; ++b) {
      if (b != reference[j]) {
        emission(j, b) += bonus;
      }
    }
  }
  return decode_scores(emission, transition_scores(params));
}

namespace {

double hinge_violation(const Utterance &utt, const LinearParams &params,
                       LabelSequence *worst) {
  LabelSequence y = loss_augmented_decode(utt.frames, utt.labels, params);
  double gap = score_linear(utt.frames, y, params) +
               delta(utt.labels, y, DistanceKind::kFrameError) -
               score_linear(utt.frames, utt.labels, params);
  if (worst != nullptr) {
    *worst = std::move(y);
  }
  return std::max(0.0, gap);
}

double decoded_per(std::span<const Utterance> utts,
                   const LinearParams &params) {
  std::vector<LabelSequence> refs;
  std::vector<LabelSequence> hyps;
  for (const Utterance &utt : utts) {
    refs.push_back(utt.labels);
    hyps.push_back(viterbi_decode(utt.frames, params));
  }
  return corpus_per(refs, hyps);
}

}  // namespace

double linear_objective(std::span<const Utterance> corpus,
                        const LinearParams &params, double cost_c) {
  double hinge_sum = 0.0;
  for (const Utterance &utt : corpus) {
    hinge_sum += hinge_violation(utt, params, nullptr);
  }
  return params.theta.squaredNorm() + cost_c * hinge_sum;
}

LinearTrainResult train_linear(std::span<const Utterance> corpus,
                               std::span<const Utterance> dev,
                               const LinearParams &start,
                               const LinearTrainConfig &config) {
  if (corpus.empty()) {
    throw ConfigError("train_linear: empty corpus");
  }
  if (config.epochs < 1 || config.cost_c <= 0.0 ||
      config.learning_rate < 0.0) {
    throw ConfigError("train_linear: need epochs >= 1, C > 0, lr >= 0");
  }
  if (config.delta_kind != DistanceKind::kFrameError) {
    throw ConfigError(
        "train_linear: loss-augmented decoding needs the frame_error "
        "distance");
  }
  start.validate();
  for (const Utterance &utt : corpus) {
    validate_pair(utt.frames, utt.labels, start.num_labels);
    if (utt.frame_dim() != start.frame_dim) {
      throw ConfigError("train_linear: utterance " + utt.id +
                        " has frame_dim " + std::to_string(utt.frame_dim()));
    }
  }

  LinearTrainResult result;
  result.params = start;
  Eigen::VectorXd &theta = result.params.theta;
  int n = static_cast<int>(corpus.size());
  double lr = config.learning_rate;
  double previous = std::numeric_limits<double>::infinity();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::mt19937_64 rng = make_rng(config.seed, 0x11ea, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i : order) {
      const Utterance &utt = corpus[i];
      LabelSequence worst;
      double violation = hinge_violation(utt, result.params, &worst);
      // d/dtheta of ||theta||^2 / n + C * hinge_i.
      Eigen::VectorXd grad = (2.0 / n) * theta;
      if (violation > 0.0) {
        StructuredFeature bad =
            psi_first_order(utt.frames, worst, start.num_labels);
        StructuredFeature good =
            psi_first_order(utt.frames, utt.labels, start.num_labels);
        grad += config.cost_c * (bad.values - good.values);
      }
      theta -= lr * grad;
    }
    if (!theta.allFinite()) {
      throw NumericError("train_linear: diverged at epoch " +
                         std::to_string(epoch));
    }
    double objective = linear_objective(corpus, result.params, config.cost_c);
    result.objectives.push_back(objective);
    result.learning_rates.push_back(lr);
    result.dev_per.push_back(
        dev.empty() ? std::numeric_limits<double>::quiet_NaN()
                    : decoded_per(dev, result.params));
    Log(2) << "train_linear epoch " << epoch << " objective " << objective
           << " lr " << lr;
    if (objective > previous) {
      lr *= 0.5;
    }
    previous = objective;
  }
  return result;
}

Lattice beam_lattice(const Eigen::Ref<const FrameMatrix> &frames,
                     const LinearParams &params, int beam_width) {
  check_frames(frames, params, "beam_lattice");
  if (beam_width < 1) {
    throw InvalidArgument("beam_lattice: beam_width must be at least 1");
  }
  int m = static_cast<int>(frames.rows());
  int k = params.num_labels;
  int width = std::min(beam_width, k);
  Eigen::MatrixXd emission = emission_scores(frames, params);
  Eigen::MatrixXd transition = transition_scores(params);

  // Beam DP: survivors[j] are the `width` best labels for frame j by prefix
  // score, smaller labels first on ties.
  std::vector<std::vector<int>> survivors(m);
  Eigen::VectorXd prefix(k);
  Eigen::VectorXd next(k);
  for (int j = 0; j < m; ++j) {
    if (j == 0) {
      next = emission.row(0).transpose();
    } else {
      for (int b = 0; b < k; ++b) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a : survivors[j - 1]) {
          best = std::max(best, prefix(a) + transition(a, b));
        }
        next(b) = best + emission(j, b);
      }
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return next(a) > next(b); });
    order.resize(width);
    std::sort(order.begin(), order.end());
    survivors[j] = order;
    prefix = next;
  }

  // Boundary b in [1, M-1] holds one node per survivor of frame b-1; node
  // ids count up from the start node boundary by boundary.
  std::vector<std::vector<int>> node_id(m);
  int next_id = 1;
  for (int j = 0; j + 1 < m; ++j) {
    node_id[j].resize(survivors[j].size());
    for (size_t s = 0; s < survivors[j].size(); ++s) {
      node_id[j][s] = next_id++;
    }
  }
  int end_id = next_id;
  auto dst_of = [&](int j, int s) {
    return j + 1 == m ? end_id : node_id[j][s];
  };

  std::vector<LatticeArc> arcs;
  for (size_t s = 0; s < survivors[0].size(); ++s) {
    int b = survivors[0][s];
    arcs.push_back({0, 0, dst_of(0, static_cast<int>(s)), b, emission(0, b)});
  }
  for (int j = 1; j < m; ++j) {
    for (size_t sa = 0; sa < survivors[j - 1].size(); ++sa) {
      int a = survivors[j - 1][sa];
      for (size_t sb = 0; sb < survivors[j].size(); ++sb) {
        int b = survivors[j][sb];
        arcs.push_back({j, node_id[j - 1][sa],
                        dst_of(j, static_cast<int>(sb)), b,
                        emission(j, b) + transition(a, b)});
      }
    }
  }
  return Lattice(k, m, end_id + 1, std::move(arcs));
}

}  // namespace structseq
