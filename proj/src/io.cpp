// src/io.cpp

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

#include "structseq/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "structseq/error.hpp"
#include "structseq/features.hpp"
#include "structseq/textio.hpp"

namespace structseq {

namespace {

constexpr const char *kModelMagic = "structseq model v1";

void write_matrix(std::ostream &os, const Eigen::MatrixXd &m) {
  os << "weight " << m.rows() << ' ' << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(m(r, c));
    }
    os << "\n";
  }
}

Eigen::MatrixXd read_matrix(LineReader &reader) {
  std::vector<std::string> head = reader.expect_tokens(3, "weight header");
  if (head[0] != "weight") {
    throw ParseError(reader.context() + ": expected 'weight <rows> <cols>'");
  }
  int rows = parse_int(head[1], reader.context());
  int cols = parse_int(head[2], reader.context());
  if (rows < 1 || cols < 1) {
    throw ParseError(reader.context() + ": bad matrix shape");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    std::vector<std::string> row = reader.expect_tokens(cols, "weight row");
    for (int c = 0; c < cols; ++c) {
      m(r, c) = parse_double(row[c], reader.context());
    }
  }
  return m;
}

void write_mlp(std::ostream &os, const MlpParams &params) {
  os << "layers " << params.num_layers() << "\n";
  for (const Eigen::MatrixXd &w : params.weights) {
    write_matrix(os, w);
  }
}

MlpParams read_mlp(LineReader &reader) {
  std::vector<std::string> head = reader.expect_tokens(2, "layers header");
  if (head[0] != "layers") {
    throw ParseError(reader.context() + ": expected 'layers <count>'");
  }
  int layers = parse_int(head[1], reader.context());
  if (layers < 1) {
    throw ParseError(reader.context() + ": need at least one layer");
  }
  MlpParams params;
  for (int l = 0; l < layers; ++l) {
    params.weights.push_back(read_matrix(reader));
  }
  params.validate();
  return params;
}

std::string read_kind(LineReader &reader) {
  std::string line;
  if (!reader.next_nonempty(&line) || line != kModelMagic) {
    throw VersionError(reader.context() + ": expected '" +
                       std::string(kModelMagic) + "'");
  }
  std::vector<std::string> kind = reader.expect_tokens(2, "kind line");
  if (kind[0] != "kind") {
    throw ParseError(reader.context() + ": expected 'kind <name>'");
  }
  return kind[1];
}

}  // namespace

std::string model_kind(const Model &model) {
  if (std::holds_alternative<LinearParams>(model)) return "linear";
  if (std::holds_alternative<MlpParams>(model)) return "mlp";
  return "fsdnn";
}

void save_model(std::ostream &os, const Model &model) {
  os << kModelMagic << "\n";
  os << "kind " << model_kind(model) << "\n";
  if (const auto *linear = std::get_if<LinearParams>(&model)) {
    linear->validate();
    os << "dims " << linear->frame_dim << ' ' << linear->num_labels << "\n";
    for (Eigen::Index i = 0; i < linear->theta.size(); ++i) {
      if (i) os << ' ';
      os << format_double(linear->theta(i));
    }
    os << "\n";
  } else if (const auto *mlp = std::get_if<MlpParams>(&model)) {
    mlp->validate();
    write_mlp(os, *mlp);
  } else {
    const FsdnnParams &fsdnn = std::get<FsdnnParams>(model);
    fsdnn.validate();
    os << "frontend\n";
    write_mlp(os, fsdnn.frontend.net);
    os << "scorer\n";
    write_mlp(os, fsdnn.scorer);
  }
}

void save_model_file(const std::string &path, const Model &model) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_model(os, model);
  if (!os) {
    throw ParseError("write failed: " + path);
  }
}

Model load_model(std::istream &is) {
  LineReader reader(is);
  std::string kind = read_kind(reader);
  if (kind == "linear") {
    LinearParams params;
    std::vector<std::string> dims = reader.expect_tokens(3, "dims header");
    if (dims[0] != "dims") {
      throw ParseError(reader.context() + ": expected 'dims <D> <K>'");
    }
    params.frame_dim = parse_int(dims[1], reader.context());
    params.num_labels = parse_int(dims[2], reader.context());
    if (params.frame_dim < 1 || params.num_labels < 1) {
      throw ParseError(reader.context() + ": bad model dimensions");
    }
    Eigen::Index want = feature_size(FeatureOrder::kFirst, params.frame_dim,
                                     params.num_labels);
    std::vector<std::string> values =
        reader.expect_line_tokens("theta values");
    if (static_cast<Eigen::Index>(values.size()) != want) {
      throw ShapeError("theta has " + std::to_string(values.size()) +
                       " entries, dims need " + std::to_string(want));
    }
    params.theta.resize(want);
    for (Eigen::Index i = 0; i < want; ++i) {
      params.theta(i) = parse_double(values[i], reader.context());
    }
    params.validate();
    return params;
  }
  if (kind == "mlp") {
    return read_mlp(reader);
  }
  if (kind == "fsdnn") {
    std::string line;
    if (!reader.next_nonempty(&line) || line != "frontend") {
      throw ParseError(reader.context() + ": expected 'frontend'");
    }
    FsdnnParams params;
    params.frontend.net = read_mlp(reader);
    if (!reader.next_nonempty(&line) || line != "scorer") {
      throw ParseError(reader.context() + ": expected 'scorer'");
    }
    params.scorer = read_mlp(reader);
    params.validate();
    return params;
  }
  throw KindError("unknown model kind '" + kind + "'");
}

Model load_model_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw ParseError("cannot open " + path);
  }
  return load_model(is);
}

namespace {

template <typename T>
T load_typed(const std::string &path, const char *kind) {
  Model model = load_model_file(path);
  if (!std::holds_alternative<T>(model)) {
    throw KindError(path + " holds a " + model_kind(model) + " model, not " +
                    kind);
  }
  return std::get<T>(std::move(model));
}

}  // namespace

LinearParams load_linear_model_file(const std::string &path) {
  return load_typed<LinearParams>(path, "linear");
}

MlpParams load_mlp_model_file(const std::string &path) {
  return load_typed<MlpParams>(path, "mlp");
}

FsdnnParams load_fsdnn_model_file(const std::string &path) {
  return load_typed<FsdnnParams>(path, "fsdnn");
}

void save_train_log(std::ostream &os, const std::vector<TrainLogRow> &rows) {
  os << "epoch,loss,learning_rate,dev_per\n";
  for (const TrainLogRow &row : rows) {
    os << row.epoch << ',' << format_double(row.loss) << ','
       << format_double(row.learning_rate) << ','
       << format_double(row.dev_per) << "\n";
  }
}

void save_train_log_file(const std::string &path,
                         const std::vector<TrainLogRow> &rows) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_train_log(os, rows);
}

std::vector<TrainLogRow> load_train_log_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw ParseError("cannot open " + path);
  }
  LineReader reader(is);
  std::string line;
  if (!reader.next_nonempty(&line) ||
      line != "epoch,loss,learning_rate,dev_per") {
    throw ParseError(path + ": not a training log");
  }
  std::vector<TrainLogRow> rows;
  while (reader.next_nonempty(&line)) {
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 4) {
      throw ParseError(reader.context() + ": expected 4 CSV fields");
    }
    TrainLogRow row;
    row.epoch = parse_int(fields[0], reader.context());
    row.loss = parse_double(fields[1], reader.context());
    row.learning_rate = parse_double(fields[2], reader.context());
    row.dev_per = parse_double(fields[3], reader.context());
    rows.push_back(row);
  }
  return rows;
}

void save_score_accuracy(std::ostream &os,
                         const std::vector<ScoreAccuracyRow> &rows) {
  os << "utterance_id,path_rank,score,accuracy\n";
  for (const ScoreAccuracyRow &row : rows) {
    os << row.utterance_id << ',' << row.path_rank << ','
       << format_double(row.score) << ',' << format_double(row.accuracy)
       << "\n";
  }
}

void save_score_accuracy_file(const std::string &path,
                              const std::vector<ScoreAccuracyRow> &rows) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_score_accuracy(os, rows);
}

namespace {

constexpr const char *kHypsMagic = "structseq hyps v1";

}  // namespace

void save_hyps(std::ostream &os, const std::vector<Hypothesis> &hyps) {
  os << kHypsMagic << "\n";
  for (const Hypothesis &hyp : hyps) {
    os << hyp.utterance_id << ' ' << hyp.labels.size();
    for (int label : hyp.labels) {
      os << ' ' << label;
    }
    os << "\n";
  }
}

void save_hyps_file(const std::string &path,
                    const std::vector<Hypothesis> &hyps) {
  std::ofstream os(path);
  if (!os) {
    throw ParseError("cannot open " + path + " for writing");
  }
  save_hyps(os, hyps);
}

std::vector<Hypothesis> load_hyps(std::istream &is) {
  LineReader reader(is);
  std::string line;
  if (!reader.next_nonempty(&line) || line != kHypsMagic) {
    throw VersionError(reader.context() + ": expected '" +
                       std::string(kHypsMagic) + "'");
  }
  std::vector<Hypothesis> hyps;
  while (reader.next_nonempty(&line)) {
    std::vector<std::string> tok = split_tokens(line);
    if (tok.size() < 2) {
      throw ParseError(reader.context() + ": expected '<id> <M> <labels>'");
    }
    Hypothesis hyp;
    hyp.utterance_id = tok[0];
    int m = parse_int(tok[1], reader.context());
    if (m < 0 || static_cast<int>(tok.size()) != m + 2) {
      throw ParseError(reader.context() + ": expected " + tok[1] +
                       " labels");
    }
    for (int j = 0; j < m; ++j) {
      hyp.labels.push_back(parse_int(tok[j + 2], reader.context()));
    }
    hyps.push_back(std::move(hyp));
  }
  return hyps;
}

std::vector<Hypothesis> load_hyps_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw ParseError("cannot open " + path);
  }
  return load_hyps(is);
}

}  // namespace structseq
