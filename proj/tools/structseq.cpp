// tools/structseq.cpp

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
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "structseq/cli.hpp"
#include "structseq/error.hpp"

namespace {

using structseq::kExitData;
using structseq::kExitNumeric;
using structseq::kExitUsage;

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Pulls `--config FILE` out of the argument list and splices the file's flat
// `key=value` lines in as `--key=value` right after the subcommand, skipping
// keys already given explicitly. Hence flags > config > defaults.
std::vector<std::string> expand_config(const std::vector<std::string> &in) {
  std::vector<std::string> args;
  std::string config_path;
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i] == "--config") {
      if (i + 1 >= in.size()) {
        throw structseq::ConfigError("--config needs a file path");
      }
      config_path = in[++i];
    } else if (in[i].rfind("--config=", 0) == 0) {
      config_path = in[i].substr(9);
    } else {
      args.push_back(in[i]);
    }
  }
  if (config_path.empty()) {
    return args;
  }
  if (args.empty()) {
    throw structseq::ConfigError("--config needs a subcommand");
  }
  std::ifstream is(config_path);
  if (!is) {
    throw structseq::ConfigError("cannot open config file " + config_path);
  }
  std::vector<std::string> inject;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    size_t eq = line.find('=');
    std::string where =
        config_path + " line " + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw structseq::ConfigError(where + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw structseq::ConfigError(where + ": empty key");
    }
    std::string flag = "--" + key;
    bool overridden = false;
    for (const std::string &arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        overridden = true;
        break;
      }
    }
    if (overridden) {
      continue;
    }
    // List-valued keys take comma-separated values, one flag per element.
    size_t start = 0;
    while (true) {
      size_t comma = value.find(',', start);
      std::string piece = trim(value.substr(
          start, comma == std::string::npos ? comma : comma - start));
      inject.push_back(flag + "=" + piece);
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
  }
  args.insert(args.begin() + 1, inject.begin(), inject.end());
  return args;
}

// Shared flags of the scorer-training subcommands.
template <typename Options>
void add_sgd_flags(CLI::App *cmd, Options &options) {
  cmd->add_option("--lr", options.learning_rate, "Learning rate");
  cmd->add_option("--momentum", options.momentum, "Momentum coefficient");
  cmd->add_option("--l2", options.l2, "L2 weight decay");
  cmd->add_option("--batch", options.batch_size, "Utterances per step");
  cmd->add_option("--n-neg", options.n_negative, "Negatives per source");
  cmd->add_option("--n-best", options.n_best, "N-best depth for rescoring");
  cmd->add_option("--seed", options.seed, "Random seed");
  cmd->add_option("--epochs", options.epochs, "Training epochs");
}

void add_config_help(CLI::App *cmd) {
  static std::string ignored;
  cmd->add_option("--config", ignored,
                  "Flat key=value config file; explicit flags win");
}

int run(const std::function<int()> &body) {
  try {
    return body();
  } catch (const structseq::NumericError &e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const structseq::ConfigError &e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const structseq::InvalidArgument &e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const structseq::Error &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Structured sequence labeling toolkit"};
  app.name("structseq");
  app.require_subcommand(1);

  structseq::GenDataOptions gen;
  CLI::App *cmd_gen = app.add_subcommand("gen-data", "Write a synthetic corpus");
  cmd_gen->add_option("--out", gen.out, "Output corpus file")->required();
  cmd_gen->add_option("--num-utts", gen.num_utterances, "Utterance count");
  cmd_gen->add_option("--num-phones", gen.num_phones, "Alphabet size K");
  cmd_gen->add_option("--frame-dim", gen.frame_dim, "Raw feature dim D");
  cmd_gen->add_option("--dist", gen.kind, "Emission family: default|mixture");
  cmd_gen->add_option("--seed", gen.seed, "Random seed");

  structseq::TrainOptions train;
  CLI::App *cmd_train = app.add_subcommand("train", "Train a model");
  cmd_train->add_option("--model", train.model, "linear|sdnn|fsdnn");
  cmd_train->add_option("--corpus", train.corpus, "Corpus file")->required();
  cmd_train->add_option("--lattices", train.lattices,
                        "Lattice archive (sdnn/fsdnn)");
  cmd_train->add_option("--out", train.out, "Output model file")->required();
  cmd_train->add_option("--log", train.log, "Training-log CSV");
  cmd_train->add_option("--init", train.init, "Warm-start model file");
  cmd_train->add_option("--loss", train.loss, "max-margin|approx-acc");
  cmd_train->add_option("--halving-threshold", train.halving_threshold,
                        "Relative improvement below which lr halves");
  cmd_train->add_option("--cost-c", train.cost_c, "Hinge cost C (linear)");
  cmd_train->add_option("--hidden", train.hidden,
                        "Explicit scorer hidden widths");
  cmd_train->add_option("--layers", train.layers, "Scorer hidden layer count");
  cmd_train->add_option("--width", train.width, "Scorer hidden layer width");
  cmd_train->add_option("--lattices-out", train.lattices_out,
                        "Also write beam lattices (linear)");
  cmd_train->add_option("--beam", train.beam, "Beam width for --lattices-out");
  cmd_train->add_option("--frontend-lr", train.frontend_lr,
                        "Joint front-end learning rate (fsdnn)");
  cmd_train->add_option("--frontend-layers", train.frontend_layers,
                        "Front-end hidden layer count");
  cmd_train->add_option("--frontend-width", train.frontend_width,
                        "Front-end hidden layer width");
  cmd_train->add_option("--frontend-epochs", train.frontend_epochs,
                        "Front-end pretraining epochs");
  cmd_train->add_option("--frontend-pretrain-lr", train.frontend_pretrain_lr,
                        "Front-end pretraining learning rate");
  add_sgd_flags(cmd_train, train);

  structseq::DecodeOptions decode;
  CLI::App *cmd_decode = app.add_subcommand("decode", "Decode a corpus split");
  cmd_decode->add_option("--model", decode.model, "Model file")->required();
  cmd_decode->add_option("--corpus", decode.corpus, "Corpus file")->required();
  cmd_decode->add_option("--split", decode.split, "train|dev|test|all");
  cmd_decode->add_option("--lattices", decode.lattices,
                         "Lattice archive (sdnn/fsdnn models)");
  cmd_decode->add_option("--n-best", decode.n_best, "Rescoring depth");
  cmd_decode->add_option("--out", decode.out, "Hypothesis file")->required();

  structseq::EvalOptions eval;
  CLI::App *cmd_eval = app.add_subcommand("eval", "Score hypotheses");
  cmd_eval->add_option("--refs", eval.refs, "Reference corpus")->required();
  cmd_eval->add_option("--hyps", eval.hyps, "Hypothesis file")->required();
  cmd_eval->add_option("--split", eval.split, "train|dev|test|all");
  cmd_eval->add_option("--score-csv", eval.score_csv,
                       "Export per-path score/accuracy rows");
  cmd_eval->add_option("--model", eval.model, "Model for --score-csv");
  cmd_eval->add_option("--lattices", eval.lattices,
                       "Lattice archive for --score-csv");
  cmd_eval->add_option("--n-best", eval.n_best, "Paths per utterance");

  structseq::SweepOptions sweep;
  CLI::App *cmd_sweep = app.add_subcommand(
      "sweep", "Dev-PER grid over scorer depth and width");
  cmd_sweep->add_option("--corpus", sweep.corpus, "Corpus file")->required();
  cmd_sweep->add_option("--lattices", sweep.lattices, "Lattice archive")
      ->required();
  cmd_sweep->add_option("--layers", sweep.layers_list, "Depth grid L");
  cmd_sweep->add_option("--widths", sweep.width_list, "Width grid M");
  cmd_sweep->add_option("--out", sweep.out, "Grid CSV")->required();
  cmd_sweep->add_option("--loss", sweep.loss, "max-margin|approx-acc");
  cmd_sweep->add_option("--frontend-lr", sweep.frontend_lr,
                        "Joint front-end learning rate");
  cmd_sweep->add_option("--frontend-layers", sweep.frontend_layers,
                        "Front-end hidden layer count");
  cmd_sweep->add_option("--frontend-width", sweep.frontend_width,
                        "Front-end hidden layer width");
  cmd_sweep->add_option("--frontend-epochs", sweep.frontend_epochs,
                        "Front-end pretraining epochs");
  cmd_sweep->add_option("--frontend-pretrain-lr", sweep.frontend_pretrain_lr,
                        "Front-end pretraining learning rate");
  add_sgd_flags(cmd_sweep, sweep);

  structseq::GradcheckOptions gradcheck;
  CLI::App *cmd_gradcheck = app.add_subcommand(
      "gradcheck", "Compare backprop against finite differences");
  cmd_gradcheck->add_option("--seed", gradcheck.seed, "Random seed");
  cmd_gradcheck->add_option("--cases", gradcheck.cases, "Cases per suite");
  cmd_gradcheck->add_flag("--sabotage", gradcheck.sabotage,
                          "Negative control: corrupt one gradient per case");

  for (CLI::App *sub : {cmd_gen, cmd_train, cmd_decode, cmd_eval, cmd_sweep,
                        cmd_gradcheck}) {
    add_config_help(sub);
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const structseq::Error &e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (cmd_gen->parsed()) {
    return run([&] { return structseq::cmd_gen_data(gen); });
  }
  if (cmd_train->parsed()) {
    return run([&] { return structseq::cmd_train(train); });
  }
  if (cmd_decode->parsed()) {
    return run([&] { return structseq::cmd_decode(decode); });
  }
  if (cmd_eval->parsed()) {
    return run([&] { return structseq::cmd_eval(eval); });
  }
  if (cmd_sweep->parsed()) {
    return run([&] { return structseq::cmd_sweep(sweep); });
  }
  if (cmd_gradcheck->parsed()) {
    return run([&] { return structseq::cmd_gradcheck(gradcheck); });
  }
  return kExitUsage;
}
