// src/corpus.cpp

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

#include "structseq/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "structseq/error.hpp"
#include "structseq/rng.hpp"
#include "structseq/textio.hpp"

namespace structseq {

void SyntheticSpec::validate() const {
  if (num_labels < 2) {
    throw ConfigError("SyntheticSpec: need at least 2 phones");
  }
  if (frame_dim < 1) {
    throw ConfigError("SyntheticSpec: frame_dim must be positive");
  }
  if (transition.rows() != num_labels || transition.cols() != num_labels) {
    throw ConfigError("SyntheticSpec: transition matrix must be KxK");
  }
  for (int r = 0; r < num_labels; ++r) {
    double sum = transition.row(r).sum();
    if (transition.row(r).minCoeff() < 0.0 || std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("SyntheticSpec: transition row " + std::to_string(r) +
                        " is not a distribution");
    }
  }
  if (means.empty()) {
    throw ConfigError("SyntheticSpec: no emission means");
  }
  for (const Eigen::MatrixXd &m : means) {
    if (m.rows() != num_labels || m.cols() != frame_dim || !m.allFinite()) {
      throw ConfigError("SyntheticSpec: emission means must be finite KxD");
    }
  }
  if (variances.rows() != num_labels || variances.cols() != frame_dim ||
      !(variances.minCoeff() > 0.0)) {
    throw ConfigError("SyntheticSpec: variances must be positive KxD");
  }
  if (duration_bias < 0.0) {
    throw ConfigError("SyntheticSpec: duration_bias must be nonnegative");
  }
  if (min_frames < 2 || max_frames < min_frames) {
    throw ConfigError("SyntheticSpec: need 2 <= min_frames <= max_frames");
  }
}

Eigen::MatrixXd SyntheticSpec::effective_transition() const {
  Eigen::MatrixXd t = transition;
  for (int r = 0; r < num_labels; ++r) {
    t(r, r) += duration_bias;
    t.row(r) /= t.row(r).sum();
  }
  return t;
}

std::vector<int> Corpus::split_indices(Split split) const {
  std::vector<int> idx;
  for (size_t i = 0; i < utterances.size(); ++i) {
    if (utterances[i].split == split) {
      idx.push_back(static_cast<int>(i));
    }
  }
  return idx;
}

std::vector<Utterance> Corpus::split_utterances(Split split) const {
  std::vector<Utterance> out;
  for (const Utterance &utt : utterances) {
    if (utt.split == split) {
      out.push_back(utt);
    }
  }
  return out;
}

void Corpus::validate() const {
  alphabet.validate();
  int d = frame_dim();
  for (const Utterance &utt : utterances) {
    validate_pair(utt.frames, utt.labels, num_labels());
    if (utt.frame_dim() != d) {
      throw InvalidArgument("Corpus: utterance " + utt.id +
                            " has frame_dim " +
                            std::to_string(utt.frame_dim()) +
                            ", corpus uses " + std::to_string(d));
    }
  }
}

namespace {

Eigen::MatrixXd uniform_transition(int k) {
  return Eigen::MatrixXd::Constant(k, k, 1.0 / k);
}

// Unit-norm direction per phone, spread out by rejection against the ones
// already drawn.
Eigen::MatrixXd spread_means(int k, int d, double scale,
                             std::mt19937_64 &rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd means(k, d);
  for (int r = 0; r < k; ++r) {
    Eigen::VectorXd v(d);
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (int c = 0; c < d; ++c) {
        v(c) = gauss(rng);
      }
      v.normalize();
      double worst = 2.0;
      for (int p = 0; p < r; ++p) {
        worst = std::min(worst,
                         (v - means.row(p).transpose() / scale).norm());
      }
      if (worst > 0.8) {
        break;
      }
    }
    means.row(r) = scale * v.transpose();
  }
  return means;
}

}  // namespace

SyntheticSpec default_spec(int num_labels, int frame_dim,
                           std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_labels = num_labels;
  spec.frame_dim = frame_dim;
  spec.seed = seed;
  spec.transition = uniform_transition(num_labels);
  std::mt19937_64 rng = make_rng(seed, 0x5bec);
  spec.means = {spread_means(num_labels, frame_dim, 2.2, rng)};
  spec.variances = Eigen::MatrixXd::Constant(num_labels, frame_dim, 1.0);
  spec.duration_bias = 2.0;
  spec.min_frames = 10;
  spec.max_frames = 30;
  spec.validate();
  return spec;
}

SyntheticSpec mixture_spec(int num_labels, int frame_dim,
                           std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_labels = num_labels;
  spec.frame_dim = frame_dim;
  spec.seed = seed;
  spec.transition = uniform_transition(num_labels);
  std::mt19937_64 rng = make_rng(seed, 0x317e);
  // The lower dims separate the phones linearly but weakly; each phone also
  // claims one upper dim whose sign flips between the two components. The
  // flip keeps every upper-dim class mean at zero, so no linear frame score
  // can use those dims while quadratic statistics can.
  const int d_lin = frame_dim / 2;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(num_labels, frame_dim);
  for (int p = 0; p < num_labels; ++p) {
    for (int j = 0; j < d_lin; ++j) {
      base(p, j) = 0.8 * unit(rng);
    }
    base(p, d_lin + p % (frame_dim - d_lin)) = 1.2;
  }
  Eigen::MatrixXd alt = base;
  alt.rightCols(frame_dim - d_lin) *= -1.0;
  spec.means = {base, alt};
  spec.variances = Eigen::MatrixXd::Constant(num_labels, frame_dim, 0.25);
  spec.duration_bias = 1.5;
  spec.min_frames = 4;
  spec.max_frames = 12;
  spec.validate();
  return spec;
}

Corpus generate_corpus(const SyntheticSpec &spec, int n_utterances) {
  spec.validate();
  if (n_utterances < 1) {
    throw ConfigError("generate_corpus: need at least one utterance");
  }
  Eigen::MatrixXd trans = spec.effective_transition();
  int k = spec.num_labels;
  int d = spec.frame_dim;
  int n_components = static_cast<int>(spec.means.size());
  Eigen::MatrixXd stddev = spec.variances.array().sqrt();

  Corpus corpus;
  corpus.alphabet = PhonemeAlphabet::generic(k);
  corpus.utterances.reserve(n_utterances);
  for (int u = 0; u < n_utterances; ++u) {
    std::mt19937_64 rng = make_rng(spec.seed, 0xda7a, u);
    std::uniform_int_distribution<int> length_dist(spec.min_frames,
                                                   spec.max_frames);
    std::uniform_int_distribution<int> label_dist(0, k - 1);
    std::uniform_int_distribution<int> component_dist(0, n_components - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Utterance utt;
    int m = length_dist(rng);
    utt.frames.resize(m, d);
    utt.labels.resize(m);
    int component = 0;
    for (int j = 0; j < m; ++j) {
      int label;
      if (j == 0) {
        label = label_dist(rng);
      } else {
        double r = unit(rng);
        double acc = 0.0;
        label = k - 1;
        for (int c = 0; c < k; ++c) {
          acc += trans(utt.labels[j - 1], c);
          if (r < acc) {
            label = c;
            break;
          }
        }
      }
      utt.labels[j] = label;
      bool new_run = (j == 0) || (label != utt.labels[j - 1]);
      if (new_run && n_components > 1) {
        component = component_dist(rng);
      } else if (new_run) {
        component = 0;
      }
      for (int c = 0; c < d; ++c) {
        utt.frames(j, c) =
            spec.means[component](label, c) + stddev(label, c) * gauss(rng);
      }
    }
    char id[32];
    std::snprintf(id, sizeof(id), "utt%05d", u);
    utt.id = id;
    int slot = u % 10;
    utt.split = slot == 8 ? Split::kDev
                          : (slot == 9 ? Split::kTest : Split::kTrain);
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

namespace {

constexpr const char *kCorpusMagic = "structseq corpus v1";

}  // namespace

void save_corpus(std::ostream &os, const Corpus &corpus) {
  corpus.validate();
  os << kCorpusMagic << "\n";
  os << "K " << corpus.num_labels() << "\n";
  os << "phones";
  for (const std::string &name : corpus.alphabet.names) {
    os << ' ' << name;
  }
  os << "\n";
  for (const Utterance &utt : corpus.utterances) {
    os << "utt " << utt.id << ' ' << split_name(utt.split) << "\n";
    os << utt.num_frames() << ' ' << utt.frame_dim() << "\n";
    for (int j = 0; j < utt.num_frames(); ++j) {
      for (int c = 0; c < utt.frame_dim(); ++c) {
        if (c) os << ' ';
        os << format_double(utt.frames(j, c));
      }
      os << "\n";
    }
    for (int j = 0; j < utt.num_frames(); ++j) {
      if (j) os << ' ';
      os << utt.labels[j];
    }
    os << "\n";
  }
}

void save_corpus_file(const std::string &path, const Corpus &corpus) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_corpus(os, corpus);
  if (!os) {
    throw ParseError("write failed: " + path);
  }
}

Corpus load_corpus(std::istream &is) {
  LineReader reader(is);
  Corpus corpus;
  std::string line;
  if (!reader.next_nonempty(&line)) {
    return corpus;  // a wholly empty stream is an empty corpus
  }
  if (line != kCorpusMagic) {
    throw VersionError(reader.context() + ": expected '" +
                       std::string(kCorpusMagic) + "'");
  }
  int k = 0;
  {
    std::vector<std::string> tok = reader.expect_tokens(2, "K header");
    if (tok[0] != "K") {
      throw ParseError(reader.context() + ": expected 'K <count>'");
    }
    k = parse_int(tok[1], reader.context());
  }
  {
    std::vector<std::string> tok = reader.expect_line_tokens("phones line");
    if (tok.empty() || tok[0] != "phones" ||
        static_cast<int>(tok.size()) != k + 1) {
      throw ParseError(reader.context() + ": expected 'phones' and " +
                       std::to_string(k) + " names");
    }
    corpus.alphabet.names.assign(tok.begin() + 1, tok.end());
  }
  corpus.alphabet.validate();

  while (reader.next_nonempty(&line)) {
    std::vector<std::string> tok = split_tokens(line);
    if (tok.size() != 3 || tok[0] != "utt") {
      throw ParseError(reader.context() +
                       ": expected 'utt <id> <split>', got '" + line + "'");
    }
    Utterance utt;
    utt.id = tok[1];
    utt.split = split_from_name(tok[2]);
    std::vector<std::string> dims = reader.expect_tokens(2, "M D header");
    int m = parse_int(dims[0], reader.context());
    int d = parse_int(dims[1], reader.context());
    if (m < 1 || d < 1) {
      throw ParseError(reader.context() + ": invalid dimensions");
    }
    utt.frames.resize(m, d);
    for (int j = 0; j < m; ++j) {
      std::vector<std::string> row = reader.expect_tokens(d, "frame row");
      for (int c = 0; c < d; ++c) {
        utt.frames(j, c) = parse_double(row[c], reader.context());
      }
    }
    std::vector<std::string> lab = reader.expect_tokens(m, "label line");
    utt.labels.resize(m);
    for (int j = 0; j < m; ++j) {
      utt.labels[j] = parse_int(lab[j], reader.context());
      if (utt.labels[j] < 0 || utt.labels[j] >= k) {
        throw ParseError(reader.context() + ": label " + lab[j] +
                         " outside [0, " + std::to_string(k) + ")");
      }
    }
    corpus.utterances.push_back(std::move(utt));
  }
  corpus.validate();
  return corpus;
}

Corpus load_corpus_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw ParseError("cannot open " + path);
  }
  return load_corpus(is);
}

}  // namespace structseq
