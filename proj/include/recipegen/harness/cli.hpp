// Copyright 2026 The recipegen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RECIPEGEN_HARNESS_CLI_HPP_
#define RECIPEGEN_HARNESS_CLI_HPP_

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/eval/report.hpp"
#include "recipegen/harness/config.hpp"
#include "recipegen/harness/data.hpp"
#include "recipegen/harness/train.hpp"
#include "recipegen/model/checkpoint.hpp"
#include "recipegen/oracle/oracle.hpp"
#include "recipegen/synth/world.hpp"

namespace recipegen::harness {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitRuntime = 3 };

struct CommonFlags {
  std::string config;
  std::string dataset;
  std::string checkpoint;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<int> n_candidates;
};

inline ExperimentConfig resolve_config(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.variant) c.model.variant = model::parse_variant(*f.variant);
  if (f.n_candidates) c.n_candidates = *f.n_candidates;
  if (!f.dataset.empty()) c.paths.dataset = f.dataset;
  if (!f.checkpoint.empty()) c.paths.checkpoint = f.checkpoint;
  if (!f.out.empty()) c.paths.out = f.out;
  c.validate();
  return c;
}

inline const std::string& require_path(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " path given");
  return path;
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    recipegen::detail::write_file(path, text);
}

inline std::vector<DatasetRecord> load_records(const ExperimentConfig& c) {
  return limit_candidates(load_dataset(require_path(c.paths.dataset, "dataset")), c.n_candidates);
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// synth: writes the world described by the config's synth section. The seed
// and candidate-count flags override that section.
inline void cmd_synth(const CommonFlags& f, std::ostream& out) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
  if (f.seed) c.synth.seed = *f.seed;
  if (f.n_candidates) c.synth.n_candidates = *f.n_candidates;
  c.synth.validate();
  const std::string path = f.out.empty() ? c.paths.dataset : f.out;
  emit(path, dataset_to_string(synth::generate_world(c.synth)), out);
}

template <typename T>
TrainResult<T> run_training(const ExperimentConfig& c, const std::vector<DatasetRecord>& records,
                            std::ostream* progress) {
  const Split s = split_dataset(records, c.training.val_fraction);
  return train<T>(c, s.train, s.validation, [&](const EpochLog& e) {
    if (!progress) return;
    *progress << "epoch " << e.epoch << " loss " << e.total;
    if (!e.validation.empty())
      *progress << ' ' << c.training.early_stop_metric << ' ' << e.validation.at(c.training.early_stop_metric);
    *progress << '\n';
  });
}

inline std::string training_log_csv(const std::vector<EpochLog>& log) {
  std::string s = log_header() + "\n";
  for (const auto& e : log) s += log_row(e) + "\n";
  return s;
}

// train: checkpoint to --checkpoint (or paths.checkpoint), CSV log to --out
// (or paths.log, else stdout).
inline void cmd_train(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  const ExperimentConfig c = resolve_config(f);
  const std::string ckpt = require_path(c.paths.checkpoint, "checkpoint");
  const auto records = load_records(c);
  std::string log;
  if (c.precision == "float32") {
    auto r = run_training<float>(c, records, &err);
    recipegen::detail::write_file(ckpt, r.best_checkpoint.dump() + "\n");
    log = training_log_csv(r.log);
  } else {
    auto r = run_training<double>(c, records, &err);
    recipegen::detail::write_file(ckpt, r.best_checkpoint.dump() + "\n");
    log = training_log_csv(r.log);
  }
  emit(f.out.empty() ? c.paths.log : f.out, log, out);
}

template <typename T>
std::vector<PredictionRecipe> generate_with(const nlohmann::json& ckpt, const std::vector<DatasetRecord>& records,
                                            const std::optional<std::string>& variant) {
  auto loaded = model::checkpoint_from_json<T>(ckpt);
  if (variant && model::parse_variant(*variant) != loaded.model->config().variant)
    throw ValidationError("checkpoint holds variant " + model::to_string(loaded.model->config().variant) +
                          ", requested " + *variant);
  for (const auto& r : records)
    if (static_cast<nn::Index>(r.candidates.feature_dim()) != loaded.model->feature_dim())
      throw ValidationError("record '" + r.video_id + "': feature dim " + std::to_string(r.candidates.feature_dim()) +
                            " does not match the checkpoint");
  return predict_all(*loaded.model, records);
}

inline std::vector<PredictionRecipe> generate_predictions(const std::string& checkpoint_path,
                                                          const std::vector<DatasetRecord>& records,
                                                          const std::optional<std::string>& variant = {}) {
  const auto j = recipegen::detail::parse_json(recipegen::detail::read_file(checkpoint_path), checkpoint_path);
  const std::string precision = j.value("precision", "");
  if (precision == "float32") return generate_with<float>(j, records, variant);
  return generate_with<double>(j, records, variant);
}

inline void cmd_generate(const CommonFlags& f, std::ostream& out) {
  const ExperimentConfig c = resolve_config(f);
  const auto records = load_records(c);
  const auto preds = generate_predictions(require_path(c.paths.checkpoint, "checkpoint"), records, f.variant);
  emit(f.out, predictions_to_string(preds), out);
}

inline void cmd_evaluate(const CommonFlags& f, const std::string& predictions, std::ostream& out) {
  const ExperimentConfig c = resolve_config(f);
  const auto records = load_records(c);
  const auto preds = load_predictions(require_path(predictions, "predictions"));
  emit(f.out, eval::report_to_json(eval::evaluate_corpus(preds, records)).dump(2) + "\n", out);
}

struct OracleFlags {
  std::string mode = "gt-sentences";
  std::string hist_out;
  std::string n_list;
  std::string sweep_out;
};

inline void cmd_oracle(const CommonFlags& f, const OracleFlags& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(f);
  const auto records = load_records(c);
  const auto source = oracle::parse_sentence_source(o.mode);
  const auto rep = oracle::oracle_report(records, source);
  emit(f.out, oracle::oracle_report_json(rep).dump(2) + "\n", out);
  if (!o.hist_out.empty()) recipegen::detail::write_file(o.hist_out, oracle::histogram_csv(rep));
  if (!o.n_list.empty()) {
    const auto csv = oracle::sweep_csv(oracle::oracle_sweep(records, parse_int_list(o.n_list), source));
    emit(o.sweep_out, csv, out);
  }
}

struct AblationCell {
  std::string variant;
  int n_candidates = 0;
  int best_epoch = 0;
  eval::MetricReport scores;
};

inline std::string ablation_header() {
  std::string h = "variant,n_candidates,seed,dataset_hash,best_epoch";
  for (const auto& k : eval::report_metric_keys()) h += "," + k;
  return h;
}

// One trained and evaluated model per (variant, N) cell, all with the
// config's seed and the same dataset.
inline std::string run_ablation(const ExperimentConfig& base, const std::vector<DatasetRecord>& records,
                                const std::vector<std::string>& variants, const std::vector<int>& ns,
                                std::ostream* progress) {
  std::ostringstream os;
  os << ablation_header() << '\n';
  os << std::fixed << std::setprecision(6);
  const std::string hash = dataset_hash(records);
  for (const auto& v : variants) {
    for (int n : ns) {
      ExperimentConfig c = base;
      c.model.variant = model::parse_variant(v);
      c.n_candidates = n;
      c.validate();
      const auto cell = limit_candidates(records, n);
      const Split s = split_dataset(cell, c.training.val_fraction);
      if (s.validation.empty()) throw ValidationError("ablation needs a non-empty validation split");
      if (progress) *progress << "cell " << v << " N=" << n << '\n';
      eval::MetricReport scores;
      int best = 0;
      if (c.precision == "float32") {
        auto r = train<float>(c, s.train, s.validation);
        scores = eval::evaluate_corpus(predict_all(*r.model, s.validation), s.validation);
        best = r.best_epoch;
      } else {
        auto r = train<double>(c, s.train, s.validation);
        scores = eval::evaluate_corpus(predict_all(*r.model, s.validation), s.validation);
        best = r.best_epoch;
      }
      os << model::to_string(c.model.variant) << ',' << n << ',' << c.seed << ',' << hash << ',' << best;
      for (const auto& k : eval::report_metric_keys()) os << ',' << scores.at(k);
      os << '\n';
    }
  }
  return os.str();
}

inline void cmd_ablate(const CommonFlags& f, const std::string& variants, const std::string& n_list, std::ostream& out,
                       std::ostream& err) {
  const ExperimentConfig c = resolve_config(f);
  const auto records = load_dataset(require_path(c.paths.dataset, "dataset"));
  std::vector<std::string> vs = split_list(variants);
  if (vs.empty()) vs.push_back(model::to_string(c.model.variant));
  std::vector<int> ns = parse_int_list(n_list);
  if (ns.empty()) ns.push_back(c.n_candidates);
  emit(f.out, run_ablation(c, records, vs, ns, &err), out);
}

// Entry point shared by the binary and in-process callers.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"recipegen: synthetic recipe generation experiments", "recipegen"};
  app.require_subcommand(1);
  CommonFlags f;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "experiment config JSON");
    sub->add_option("--dataset", f.dataset, "dataset JSON");
    sub->add_option("--checkpoint", f.checkpoint, "checkpoint JSON");
    sub->add_option("--out", f.out, "output path (stdout when omitted)");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--variant", f.variant, "B|BI|BIV|BIVT");
    sub->add_option("--n-candidates", f.n_candidates, "candidate count N");
  };
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  auto* train_cmd = app.add_subcommand("train", "train a model");
  auto* gen_cmd = app.add_subcommand("generate", "decode recipes with a checkpoint");
  auto* eval_cmd = app.add_subcommand("evaluate", "score predictions");
  auto* oracle_cmd = app.add_subcommand("oracle", "oracle selection analysis");
  auto* ablate_cmd = app.add_subcommand("ablate", "variant / N ablation table");
  auto* config_cmd = app.add_subcommand("config", "print the resolved config");
  for (auto* s : {synth_cmd, train_cmd, gen_cmd, eval_cmd, oracle_cmd, ablate_cmd, config_cmd}) common(s);
  std::string predictions;
  eval_cmd->add_option("--predictions", predictions, "prediction JSON")->required();
  OracleFlags o;
  oracle_cmd->add_option("--mode", o.mode, "attached|gt-sentences");
  oracle_cmd->add_option("--hist-out", o.hist_out, "tIoU histogram CSV");
  oracle_cmd->add_option("--n-list", o.n_list, "comma-separated N sweep");
  oracle_cmd->add_option("--sweep-out", o.sweep_out, "N sweep CSV");
  std::string variants, n_list;
  ablate_cmd->add_option("--variants", variants, "comma-separated variants");
  ablate_cmd->add_option("--n-list", n_list, "comma-separated N values");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) cmd_synth(f, out);
    if (train_cmd->parsed()) cmd_train(f, out, err);
    if (gen_cmd->parsed()) cmd_generate(f, out);
    if (eval_cmd->parsed()) cmd_evaluate(f, predictions, out);
    if (oracle_cmd->parsed()) cmd_oracle(f, o, out);
    if (ablate_cmd->parsed()) cmd_ablate(f, variants, n_list, out, err);
    if (config_cmd->parsed()) emit(f.out, to_json(resolve_config(f)).dump(2) + "\n", out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace recipegen::harness

#endif  // RECIPEGEN_HARNESS_CLI_HPP_
