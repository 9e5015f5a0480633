// include/structseq/cli.hpp

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

#ifndef STRUCTSEQ_CLI_HPP
#define STRUCTSEQ_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace structseq {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct GenDataOptions {
  std::string out;
  int num_utterances = 200;
  int num_phones = 6;
  int frame_dim = 8;
  std::string kind = "default";  // default | mixture
  std::uint64_t seed = 0;
};

struct TrainOptions {
  std::string model = "linear";  // linear | sdnn | fsdnn
  std::string corpus;
  std::string lattices;      // required for sdnn/fsdnn
  std::string out;
  std::string log;           // training-log CSV, optional
  std::string init;          // warm-start model, optional
  std::string loss = "max-margin";  // max-margin | approx-acc
  int epochs = 20;
  double learning_rate = 4e-6;
  double momentum = 0.9;
  double l2 = 1e-4;
  double halving_threshold = 1e-3;
  int batch_size = 1;
  int n_negative = 1;
  int n_best = 10;
  double cost_c = 1.0;       // linear only
  std::vector<int> hidden;   // scorer hidden widths; layers x width default
  int layers = 2;
  int width = 64;
  std::uint64_t seed = 0;
  // Linear only: also emit beam lattices for every utterance.
  std::string lattices_out;
  int beam = 6;
  // fsdnn only.
  double frontend_lr = 0.0;
  int frontend_layers = 1;
  int frontend_width = 32;
  int frontend_epochs = 10;
  double frontend_pretrain_lr = 0.05;
};

struct DecodeOptions {
  std::string model;
  std::string corpus;
  std::string split = "test";  // train | dev | test | all
  std::string lattices;        // required for sdnn/fsdnn models
  int n_best = 10;
  std::string out;
};

struct EvalOptions {
  std::string refs;  // corpus file
  std::string hyps;
  std::string split = "all";
  // Optional score-vs-accuracy export; needs model + lattices.
  std::string score_csv;
  std::string model;
  std::string lattices;
  int n_best = 10;
};

struct SweepOptions {
  std::string corpus;
  std::string lattices;
  std::vector<int> layers_list{1, 2};
  std::vector<int> width_list{16, 32, 64};
  std::string out;
  std::string loss = "max-margin";
  int epochs = 5;
  double learning_rate = 4e-6;
  double momentum = 0.9;
  double l2 = 1e-4;
  int batch_size = 1;
  int n_negative = 1;
  int n_best = 10;
  std::uint64_t seed = 0;
  double frontend_lr = 0.0;
  int frontend_layers = 1;
  int frontend_width = 32;
  int frontend_epochs = 10;
  double frontend_pretrain_lr = 0.05;
};

struct GradcheckOptions {
  std::uint64_t seed = 0;
  int cases = 20;
  bool sabotage = false;  // negative control: corrupt one gradient per case
};

int cmd_gen_data(const GenDataOptions &options);
int cmd_train(const TrainOptions &options);
int cmd_decode(const DecodeOptions &options);
int cmd_eval(const EvalOptions &options);
int cmd_sweep(const SweepOptions &options);
int cmd_gradcheck(const GradcheckOptions &options);

}  // namespace structseq

#endif  // STRUCTSEQ_CLI_HPP
