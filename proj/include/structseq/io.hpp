// include/structseq/io.hpp

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

#ifndef STRUCTSEQ_IO_HPP
#define STRUCTSEQ_IO_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "structseq/fsdnn.hpp"
#include "structseq/linear.hpp"
#include "structseq/mlp.hpp"
#include "structseq/types.hpp"

namespace structseq {

using Model = std::variant<LinearParams, MlpParams, FsdnnParams>;

/// "linear", "mlp" or "fsdnn".
std::string model_kind(const Model &model);

/// Bit-exact text round-trip with a version header and a kind tag.
void save_model(std::ostream &os, const Model &model);
void save_model_file(const std::string &path, const Model &model);

/// Throws VersionError on a bad header, ParseError on truncation and
/// ShapeError on inconsistent dimensions.
Model load_model(std::istream &is);
Model load_model_file(const std::string &path);

/// Typed loads; a mismatching kind tag raises KindError.
LinearParams load_linear_model_file(const std::string &path);
MlpParams load_mlp_model_file(const std::string &path);
FsdnnParams load_fsdnn_model_file(const std::string &path);

struct TrainLogRow {
  int epoch = 0;
  double loss = 0.0;
  double learning_rate = 0.0;
  double dev_per = 0.0;  // NaN when no dev split was evaluated
};

void save_train_log(std::ostream &os, const std::vector<TrainLogRow> &rows);
void save_train_log_file(const std::string &path,
                         const std::vector<TrainLogRow> &rows);
std::vector<TrainLogRow> load_train_log_file(const std::string &path);

// Fig.-style export row: one lattice path of one utterance, its rank in the
// n-best list, the structured score and the phone accuracy of its labels.
struct ScoreAccuracyRow {
  std::string utterance_id;
  int path_rank = 0;
  double score = 0.0;
  double accuracy = 0.0;
};

void save_score_accuracy(std::ostream &os,
                         const std::vector<ScoreAccuracyRow> &rows);
void save_score_accuracy_file(const std::string &path,
                              const std::vector<ScoreAccuracyRow> &rows);

struct Hypothesis {
  std::string utterance_id;
  LabelSequence labels;
};

void save_hyps(std::ostream &os, const std::vector<Hypothesis> &hyps);
void save_hyps_file(const std::string &path,
                    const std::vector<Hypothesis> &hyps);
std::vector<Hypothesis> load_hyps(std::istream &is);
std::vector<Hypothesis> load_hyps_file(const std::string &path);

}  // namespace structseq

#endif  // STRUCTSEQ_IO_HPP
