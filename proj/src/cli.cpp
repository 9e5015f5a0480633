// src/cli.cpp

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

#include "structseq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <span>

#include "structseq/corpus.hpp"
#include "structseq/error.hpp"
#include "structseq/fsdnn.hpp"
#include "structseq/gradcheck.hpp"
#include "structseq/io.hpp"
#include "structseq/lattice.hpp"
#include "structseq/linear.hpp"
#include "structseq/log.hpp"
#include "structseq/metrics.hpp"
#include "structseq/rng.hpp"
#include "structseq/sdnn.hpp"
#include "structseq/textio.hpp"

namespace structseq {

namespace {

std::vector<Utterance> pick_split(const Corpus &corpus,
                                  const std::string &split) {
  if (split == "all") {
    return corpus.utterances;
  }
  return corpus.split_utterances(split_from_name(split));
}

SdnnLoss parse_loss(const std::string &name) {
  if (name == "max-margin") {
    return SdnnLoss::kMaxMargin;
  }
  if (name == "approx-acc") {
    return SdnnLoss::kApproxAcc;
  }
  throw ConfigError("unknown loss '" + name +
                    "', expected max-margin or approx-acc");
}

std::vector<int> hidden_sizes(const TrainOptions &options) {
  if (!options.hidden.empty()) {
    return options.hidden;
  }
  if (options.layers < 0 || options.width < 1) {
    throw ConfigError("need layers >= 0 and width >= 1");
  }
  return std::vector<int>(options.layers, options.width);
}

std::vector<TrainLogRow> log_rows(const std::vector<double> &losses,
                                  const std::vector<double> &rates,
                                  const std::vector<double> &dev_per) {
  std::vector<TrainLogRow> rows;
  for (size_t e = 0; e < losses.size(); ++e) {
    rows.push_back({static_cast<int>(e), losses[e], rates[e], dev_per[e]});
  }
  return rows;
}

void maybe_write_log(const std::string &path,
                     const std::vector<TrainLogRow> &rows) {
  if (!path.empty()) {
    save_train_log_file(path, rows);
  }
}

SdnnTrainConfig sdnn_config(const TrainOptions &options) {
  SdnnTrainConfig config;
  config.loss = parse_loss(options.loss);
  config.n_negative = options.n_negative;
  config.epochs = options.epochs;
  config.batch_size = options.batch_size;
  config.rescore_n = options.n_best;
  config.sgd = {options.learning_rate, options.momentum,
                options.halving_threshold, options.l2};
  config.seed = options.seed;
  return config;
}

// Feature matrix a scorer-model sees for an utterance.
FrameMatrix model_features(const Model &model, const Utterance &utt) {
  if (const auto *fsdnn = std::get_if<FsdnnParams>(&model)) {
    return frontend_forward(fsdnn->frontend, utt.frames);
  }
  return utt.frames;
}

const MlpParams &model_scorer(const Model &model) {
  if (const auto *fsdnn = std::get_if<FsdnnParams>(&model)) {
    return fsdnn->scorer;
  }
  return std::get<MlpParams>(model);
}

void emit_lattices(const std::string &path, const Corpus &corpus,
                   const LinearParams &params, int beam) {
  LatticeArchive archive;
  for (const Utterance &utt : corpus.utterances) {
    archive.ids.push_back(utt.id);
    archive.lattices.push_back(beam_lattice(utt.frames, params, beam));
  }
  save_lattice_archive_file(path, archive);
  Log(1) << "wrote " << archive.size() << " lattices to " << path;
}

int train_linear_cmd(const TrainOptions &options, const Corpus &corpus) {
  std::vector<Utterance> train = pick_split(corpus, "train");
  std::vector<Utterance> dev = pick_split(corpus, "dev");
  LinearTrainConfig config;
  config.cost_c = options.cost_c;
  config.epochs = options.epochs;
  config.learning_rate = options.learning_rate;
  config.seed = options.seed;
  LinearParams start =
      options.init.empty()
          ? LinearParams::zeros(corpus.frame_dim(), corpus.num_labels())
          : load_linear_model_file(options.init);
  LinearTrainResult result = train_linear(train, dev, start, config);
  save_model_file(options.out, result.params);
  maybe_write_log(options.log, log_rows(result.objectives,
                                        result.learning_rates,
                                        result.dev_per));
  if (!options.lattices_out.empty()) {
    emit_lattices(options.lattices_out, corpus, result.params, options.beam);
  }
  std::printf("trained linear model: objective %s dev_per %s -> %s\n",
              format_double(result.objectives.back()).c_str(),
              format_double(result.dev_per.back()).c_str(),
              options.out.c_str());
  return kExitOk;
}

int train_sdnn_cmd(const TrainOptions &options, const Corpus &corpus) {
  if (options.lattices.empty()) {
    throw ConfigError("train sdnn: --lattices is required");
  }
  LatticeArchive lattices = load_lattice_archive_file(options.lattices);
  std::vector<Utterance> train = pick_split(corpus, "train");
  std::vector<Utterance> dev = pick_split(corpus, "dev");
  int feat = static_cast<int>(feature_size(
      FeatureOrder::kFirst, corpus.frame_dim(), corpus.num_labels()));
  MlpParams start;
  if (options.init.empty()) {
    std::vector<int> sizes{feat};
    for (int h : hidden_sizes(options)) {
      sizes.push_back(h);
    }
    sizes.push_back(1);
    start = init_weights(sizes, options.seed);
  } else {
    start = load_mlp_model_file(options.init);
  }
  SdnnTrainResult result =
      train_sdnn(train, dev, lattices, start, sdnn_config(options));
  save_model_file(options.out, result.params);
  maybe_write_log(options.log, log_rows(result.losses, result.learning_rates,
                                        result.dev_per));
  std::printf("trained sdnn model: loss %s dev_per %s -> %s\n",
              format_double(result.losses.back()).c_str(),
              format_double(result.dev_per.back()).c_str(),
              options.out.c_str());
  return kExitOk;
}

int train_fsdnn_cmd(const TrainOptions &options, const Corpus &corpus) {
  if (options.lattices.empty()) {
    throw ConfigError("train fsdnn: --lattices is required");
  }
  LatticeArchive lattices = load_lattice_archive_file(options.lattices);
  std::vector<Utterance> train = pick_split(corpus, "train");
  std::vector<Utterance> dev = pick_split(corpus, "dev");
  int k = corpus.num_labels();

  FsdnnParams start;
  if (options.init.empty()) {
    FrontendTrainConfig pre;
    pre.epochs = options.frontend_epochs;
    pre.sgd.learning_rate = options.frontend_pretrain_lr;
    pre.seed = options.seed;
    FrontendTrainResult pretrained = pretrain_frontend(
        train, std::vector<int>(options.frontend_layers,
                                options.frontend_width),
        pre);
    Log(1) << "frontend pretrain: ce " << pretrained.losses.back()
           << " frame acc " << pretrained.accuracies.back();
    start.frontend = pretrained.params;
    int feat = static_cast<int>(feature_size(FeatureOrder::kFirst, k, k));
    std::vector<int> sizes{feat};
    for (int h : hidden_sizes(options)) {
      sizes.push_back(h);
    }
    sizes.push_back(1);
    start.scorer = init_weights(sizes, substream(options.seed, 0x5c0));
  } else {
    start = load_fsdnn_model_file(options.init);
  }
  FsdnnTrainConfig config;
  config.sdnn = sdnn_config(options);
  config.frontend_lr = options.frontend_lr;
  FsdnnTrainResult result =
      train_fsdnn(train, dev, lattices, start, config);
  save_model_file(options.out, result.params);
  maybe_write_log(options.log, log_rows(result.losses, result.learning_rates,
                                        result.dev_per));
  std::printf("trained fsdnn model: loss %s dev_per %s -> %s\n",
              format_double(result.losses.back()).c_str(),
              format_double(result.dev_per.back()).c_str(),
              options.out.c_str());
  return kExitOk;
}

}  // namespace

int cmd_gen_data(const GenDataOptions &options) {
  if (options.out.empty()) {
    throw ConfigError("gen-data: --out is required");
  }
  SyntheticSpec spec;
  if (options.kind == "default") {
    spec = default_spec(options.num_phones, options.frame_dim, options.seed);
  } else if (options.kind == "mixture") {
    spec = mixture_spec(options.num_phones, options.frame_dim, options.seed);
  } else {
    throw ConfigError("gen-data: unknown kind '" + options.kind +
                      "', expected default or mixture");
  }
  Corpus corpus = generate_corpus(spec, options.num_utterances);
  save_corpus_file(options.out, corpus);
  size_t train = corpus.split_indices(Split::kTrain).size();
  size_t dev = corpus.split_indices(Split::kDev).size();
  size_t test = corpus.split_indices(Split::kTest).size();
  std::printf("corpus %s: %zu utterances K=%d D=%d train=%zu dev=%zu "
              "test=%zu\n",
              options.out.c_str(), corpus.utterances.size(),
              corpus.num_labels(), corpus.frame_dim(), train, dev, test);
  return kExitOk;
}

int cmd_train(const TrainOptions &options) {
  if (options.corpus.empty() || options.out.empty()) {
    throw ConfigError("train: --corpus and --out are required");
  }
  Corpus corpus = load_corpus_file(options.corpus);
  if (options.model == "linear") {
    return train_linear_cmd(options, corpus);
  }
  if (options.model == "sdnn") {
    return train_sdnn_cmd(options, corpus);
  }
  if (options.model == "fsdnn") {
    return train_fsdnn_cmd(options, corpus);
  }
  throw ConfigError("train: unknown model '" + options.model +
                    "', expected linear, sdnn or fsdnn");
}

int cmd_decode(const DecodeOptions &options) {
  if (options.model.empty() || options.corpus.empty() ||
      options.out.empty()) {
    throw ConfigError("decode: --model, --corpus and --out are required");
  }
  Corpus corpus = load_corpus_file(options.corpus);
  std::vector<Utterance> utts = pick_split(corpus, options.split);
  Model model = load_model_file(options.model);

  std::vector<Hypothesis> hyps;
  if (const auto *linear = std::get_if<LinearParams>(&model)) {
    for (const Utterance &utt : utts) {
      hyps.push_back({utt.id, viterbi_decode(utt.frames, *linear)});
    }
  } else {
    if (options.lattices.empty()) {
      throw ConfigError("decode: --lattices is required for " +
                        model_kind(model) + " models");
    }
    LatticeArchive lattices = load_lattice_archive_file(options.lattices);
    const MlpParams &scorer = model_scorer(model);
    for (const Utterance &utt : utts) {
      const Lattice &lattice = lattices.lattices[lattices.find(utt.id)];
      hyps.push_back({utt.id, rescore_decode(model_features(model, utt),
                                             lattice, scorer,
                                             options.n_best)});
    }
  }
  save_hyps_file(options.out, hyps);
  std::printf("decoded %zu utterances (%s, %s) -> %s\n", hyps.size(),
              model_kind(model).c_str(), options.split.c_str(),
              options.out.c_str());
  return kExitOk;
}

int cmd_eval(const EvalOptions &options) {
  if (options.refs.empty() || options.hyps.empty()) {
    throw ConfigError("eval: --refs and --hyps are required");
  }
  Corpus corpus = load_corpus_file(options.refs);
  std::vector<Utterance> utts = pick_split(corpus, options.split);
  std::vector<Hypothesis> hyps = load_hyps_file(options.hyps);
  std::map<std::string, const LabelSequence *> by_id;
  for (const Hypothesis &hyp : hyps) {
    by_id[hyp.utterance_id] = &hyp.labels;
  }
  if (by_id.size() != utts.size()) {
    throw ParseError("eval: " + std::to_string(utts.size()) +
                     " references but " + std::to_string(by_id.size()) +
                     " hypotheses");
  }
  std::vector<LabelSequence> refs;
  std::vector<LabelSequence> matched;
  for (const Utterance &utt : utts) {
    auto it = by_id.find(utt.id);
    if (it == by_id.end()) {
      throw ParseError("eval: no hypothesis for utterance '" + utt.id + "'");
    }
    refs.push_back(utt.labels);
    matched.push_back(*it->second);
  }
  double per = corpus_per(refs, matched);
  std::printf("PER %.2f\n", 100.0 * per);

  if (!options.score_csv.empty()) {
    if (options.model.empty() || options.lattices.empty()) {
      throw ConfigError("eval: --score-csv needs --model and --lattices");
    }
    Model model = load_model_file(options.model);
    if (std::holds_alternative<LinearParams>(model)) {
      throw ConfigError("eval: score export needs an sdnn or fsdnn model");
    }
    LatticeArchive lattices = load_lattice_archive_file(options.lattices);
    const MlpParams &scorer = model_scorer(model);
    std::vector<ScoreAccuracyRow> rows;
    for (const Utterance &utt : utts) {
      const Lattice &lattice = lattices.lattices[lattices.find(utt.id)];
      FrameMatrix features = model_features(model, utt);
      std::vector<ScoredPath> paths = nbest(lattice, options.n_best);
      for (size_t r = 0; r < paths.size(); ++r) {
        StructuredFeature psi = psi_first_order(features, paths[r].labels,
                                                lattice.num_labels());
        ScoreAccuracyRow row;
        row.utterance_id = utt.id;
        row.path_rank = static_cast<int>(r) + 1;
        row.score = mlp_forward(scorer, psi.values).first;
        row.accuracy = accuracy(utt.labels, paths[r].labels);
        rows.push_back(std::move(row));
      }
    }
    save_score_accuracy_file(options.score_csv, rows);
    std::printf("wrote %zu score rows -> %s\n", rows.size(),
                options.score_csv.c_str());
  }
  return kExitOk;
}

int cmd_sweep(const SweepOptions &options) {
  if (options.corpus.empty() || options.lattices.empty() ||
      options.out.empty()) {
    throw ConfigError("sweep: --corpus, --lattices and --out are required");
  }
  if (options.layers_list.empty() || options.width_list.empty()) {
    throw ConfigError("sweep: empty grid");
  }
  Corpus corpus = load_corpus_file(options.corpus);
  LatticeArchive lattices = load_lattice_archive_file(options.lattices);
  std::vector<Utterance> train = pick_split(corpus, "train");
  std::vector<Utterance> dev = pick_split(corpus, "dev");
  int k = corpus.num_labels();

  // The front end does not depend on the scorer's shape; pretrain it once.
  FrontendTrainConfig pre;
  pre.epochs = options.frontend_epochs;
  pre.sgd.learning_rate = options.frontend_pretrain_lr;
  pre.seed = options.seed;
  FrontEndParams frontend =
      pretrain_frontend(train,
                        std::vector<int>(options.frontend_layers,
                                         options.frontend_width),
                        pre)
          .params;

  auto cell_path = [&](int layers, int width) {
    return options.out + ".L" + std::to_string(layers) + ".M" +
           std::to_string(width) + ".cell";
  };
  auto read_cell = [](const std::string &path) -> std::optional<double> {
    std::ifstream is(path);
    if (!is) {
      return std::nullopt;
    }
    std::string tag;
    is >> tag;
    if (tag == "per") {
      double value = 0.0;
      if (is >> value) {
        return value;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();  // recorded failure
  };

  std::map<std::pair<int, int>, double> grid;
  for (int layers : options.layers_list) {
    for (int width : options.width_list) {
      std::string path = cell_path(layers, width);
      if (std::optional<double> cached = read_cell(path)) {
        grid[{layers, width}] = *cached;
        Log(1) << "sweep cell L=" << layers << " M=" << width
               << " reused from " << path;
        continue;
      }
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        FsdnnParams start;
        start.frontend = frontend;
        int feat = static_cast<int>(feature_size(FeatureOrder::kFirst, k, k));
        std::vector<int> sizes{feat};
        for (int l = 0; l < layers; ++l) {
          sizes.push_back(width);
        }
        sizes.push_back(1);
        start.scorer = init_weights(
            sizes, substream(options.seed, 0x5ee7,
                             (static_cast<std::uint64_t>(layers) << 16) |
                                 static_cast<std::uint64_t>(width)));
        FsdnnTrainConfig config;
        config.sdnn.loss = parse_loss(options.loss);
        config.sdnn.n_negative = options.n_negative;
        config.sdnn.epochs = options.epochs;
        config.sdnn.batch_size = options.batch_size;
        config.sdnn.rescore_n = options.n_best;
        config.sdnn.sgd = {options.learning_rate, options.momentum, 1e-3,
                           options.l2};
        config.sdnn.seed = options.seed;
        config.frontend_lr = options.frontend_lr;
        FsdnnTrainResult result =
            train_fsdnn(train, dev, lattices, start, config);
        value = 100.0 * result.dev_per.back();
        std::ofstream os(path);
        os << "per " << format_double(value) << "\n";
      } catch (const Error &e) {
        std::ofstream os(path);
        os << "error " << e.what() << "\n";
        Log(0) << "sweep cell L=" << layers << " M=" << width
               << " failed: " << e.what();
      }
      grid[{layers, width}] = value;
      std::printf("sweep cell L=%d M=%d per %s\n", layers, width,
                  format_double(value).c_str());
    }
  }

  std::ofstream os(options.out);
  if (!os) {
    throw ParseError("cannot open " + options.out + " for writing");
  }
  os << "L/M";
  for (int width : options.width_list) {
    os << ',' << width;
  }
  os << "\n";
  for (int layers : options.layers_list) {
    os << layers;
    for (int width : options.width_list) {
      os << ',' << format_double(grid[{layers, width}]);
    }
    os << "\n";
  }
  std::printf("sweep grid (%zux%zu) -> %s\n", options.layers_list.size(),
              options.width_list.size(), options.out.c_str());
  return kExitOk;
}

int cmd_gradcheck(const GradcheckOptions &options) {
  if (options.cases < 1) {
    throw ConfigError("gradcheck: --cases must be at least 1");
  }
  bool ok = true;
  auto run = [&](const char *name, GradCheckReport report) {
    bool passed = report.passed();
    ok = ok && passed;
    std::printf("gradcheck %s: max relative error %s (%s) %s\n", name,
                format_double(report.max_relative_error).c_str(),
                report.worst_coordinate.c_str(), passed ? "pass" : "FAIL");
  };
  run("mlp", gradcheck_mlp(options.seed, options.cases, options.sabotage));
  run("losses",
      gradcheck_losses(options.seed, options.cases, options.sabotage));
  run("fsdnn",
      gradcheck_fsdnn(options.seed, options.cases, options.sabotage));
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace structseq
