// tools/pldakit_main.cpp

// Copyright 2026  pldakit authors

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

// Command-line entry point.  Subcommands: synth, weaklabel, train, score,
// eval, experiment.  Exit codes: 0 success, 1 runtime error, 2 usage error.
// Human-readable progress goes to stderr; machine outputs go to files and
// stdout only.  An optional --config JSON file supplies option values by
// long-flag name; explicit flags override it, and it overrides defaults.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "pldakit/detail/util.hpp"
#include "pldakit/errors.hpp"
#include "pldakit/eval.hpp"
#include "pldakit/experiment.hpp"
#include "pldakit/io.hpp"
#include "pldakit/labeling.hpp"
#include "pldakit/plda.hpp"
#include "pldakit/preprocess.hpp"
#include "pldakit/synth.hpp"
#include "pldakit/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Config-file errors are usage errors (exit 2), not runtime errors.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  bool quiet = false;
  int threads = 1;
};

class Log {
 public:
  explicit Log(const GlobalOptions &global) : quiet_(global.quiet) {}
  void line(const std::string &msg) const {
    if (!quiet_) std::cerr << msg << "\n";
  }

 private:
  bool quiet_;
};

// Maps JSON config keys (long option names without the leading dashes) to
// typed setters on the bound option structs.
class ConfigBinder {
 public:
  template <typename T>
  void bind(const std::string &key, T *target) {
    setters_[key] = [key, target](const json &value) {
      try {
        *target = value.get<T>();
      } catch (const json::exception &) {
        throw UsageFailure("config: bad value for '" + key + "'");
      }
    };
  }

  void bind_path(const std::string &key, fs::path *target) {
    setters_[key] = [key, target](const json &value) {
      if (!value.is_string())
        throw UsageFailure("config: '" + key + "' must be a string");
      *target = fs::path(value.get<std::string>());
    };
  }

  void apply(const json &config) const {
    if (!config.is_object())
      throw UsageFailure("config: top level must be a JSON object");
    for (const auto &[key, value] : config.items()) {
      auto it = setters_.find(key);
      if (it == setters_.end())
        throw UsageFailure("config: unknown option '" + key + "'");
      it->second(value);
    }
  }

 private:
  std::map<std::string, std::function<void(const json &)>> setters_;
};

// Pre-pass over argv: finds the subcommand name and the --config value so
// config values can be installed as defaults before CLI11 parses the flags.
struct ArgvScan {
  std::string subcommand;
  std::string config_path;
};

ArgvScan scan_argv(int argc, char **argv) {
  static const std::vector<std::string> known = {"synth",  "weaklabel",
                                                 "train",  "score",
                                                 "eval",   "experiment"};
  ArgvScan scan;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (scan.subcommand.empty())
      for (const auto &name : known)
        if (arg == name) scan.subcommand = name;
    if (arg == "--config" && i + 1 < argc)
      scan.config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      scan.config_path = arg.substr(9);
  }
  return scan;
}

pldakit::PoolAssignment parse_assignment(const std::string &name) {
  if (name == "uniform") return pldakit::PoolAssignment::kUniform;
  if (name == "round_robin") return pldakit::PoolAssignment::kRoundRobin;
  throw UsageFailure("--customer-assignment must be uniform|round_robin, got "
                     "'" + name + "'");
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  fs::path out;
  long dim = 50;
  long rank = 25;
  long sessions = 100;
  long customer_pool = 1000;
  long service_pool = 200;
  double utts_per_channel = 5.0;
  double speaker_scale = 1.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 1;
  long eval_speakers = 50;
  long eval_tests = 3;
  long enroll_per_speaker = 1;
  double condition_shift = 0.0;
  bool random_spd_sigma = false;
  std::string customer_assignment = "uniform";
  std::string pool_tag = "syn";
};

void add_synth(CLI::App &app, SynthOptions &opt, ConfigBinder &binder) {
  CLI::App *sub = app.add_subcommand(
      "synth", "Generate a synthetic i-vector corpus and evaluation trials");
  sub->add_option("--out", opt.out, "Output directory")->required();
  sub->add_option("--dim", opt.dim, "i-vector dimension")
      ->capture_default_str();
  sub->add_option("--rank", opt.rank, "Speaker-subspace rank")
      ->capture_default_str();
  sub->add_option("--sessions", opt.sessions, "Number of two-channel sessions")
      ->capture_default_str();
  sub->add_option("--customer-pool", opt.customer_pool,
                  "Distinct customers available")
      ->capture_default_str();
  sub->add_option("--service-pool", opt.service_pool,
                  "Distinct service agents available")
      ->capture_default_str();
  sub->add_option("--utts-per-channel", opt.utts_per_channel,
                  "Mean utterances per channel (Poisson, min 1)")
      ->capture_default_str();
  sub->add_option("--speaker-scale", opt.speaker_scale,
                  "Speaker-subspace scale")
      ->capture_default_str();
  sub->add_option("--noise-scale", opt.noise_scale,
                  "Residual noise scale")
      ->capture_default_str();
  sub->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  sub->add_option("--eval-speakers", opt.eval_speakers,
                  "Held-out evaluation speakers")
      ->capture_default_str();
  sub->add_option("--eval-tests", opt.eval_tests,
                  "Test utterances per evaluation speaker")
      ->capture_default_str();
  sub->add_option("--enroll-per-speaker", opt.enroll_per_speaker,
                  "Enrollment utterances per evaluation speaker")
      ->capture_default_str();
  sub->add_option("--condition-shift", opt.condition_shift,
                  "Magnitude of a domain offset added to every vector")
      ->capture_default_str();
  sub->add_flag("--random-spd-sigma", opt.random_spd_sigma,
                "Sample a non-isotropic residual covariance")
      ->capture_default_str();
  sub->add_option("--customer-assignment", opt.customer_assignment,
                  "Customer draw: uniform|round_robin")
      ->capture_default_str();
  sub->add_option("--pool-tag", opt.pool_tag,
                  "Namespace prefix for generated ids")
      ->capture_default_str();

  binder.bind_path("out", &opt.out);
  binder.bind("dim", &opt.dim);
  binder.bind("rank", &opt.rank);
  binder.bind("sessions", &opt.sessions);
  binder.bind("customer-pool", &opt.customer_pool);
  binder.bind("service-pool", &opt.service_pool);
  binder.bind("utts-per-channel", &opt.utts_per_channel);
  binder.bind("speaker-scale", &opt.speaker_scale);
  binder.bind("noise-scale", &opt.noise_scale);
  binder.bind("seed", &opt.seed);
  binder.bind("eval-speakers", &opt.eval_speakers);
  binder.bind("eval-tests", &opt.eval_tests);
  binder.bind("enroll-per-speaker", &opt.enroll_per_speaker);
  binder.bind("condition-shift", &opt.condition_shift);
  binder.bind("random-spd-sigma", &opt.random_spd_sigma);
  binder.bind("customer-assignment", &opt.customer_assignment);
  binder.bind("pool-tag", &opt.pool_tag);
}

int run_synth(const SynthOptions &opt, const GlobalOptions &global) {
  Log log(global);
  pldakit::SynthConfig cfg;
  cfg.dim = opt.dim;
  cfg.rank = opt.rank;
  cfg.n_sessions = opt.sessions;
  cfg.customer_pool = opt.customer_pool;
  cfg.service_pool = opt.service_pool;
  cfg.utts_per_channel = opt.utts_per_channel;
  cfg.speaker_scale = opt.speaker_scale;
  cfg.noise_scale = opt.noise_scale;
  cfg.seed = opt.seed;
  cfg.random_spd_sigma = opt.random_spd_sigma;
  cfg.customer_assignment = parse_assignment(opt.customer_assignment);
  cfg.pool_tag = opt.pool_tag;

  if (opt.condition_shift != 0.0) {
    pldakit::PldaModel truth = pldakit::sample_truth_model(
        cfg.dim, cfg.rank, cfg.speaker_scale, cfg.noise_scale, cfg.seed,
        cfg.random_spd_sigma);
    cfg.condition_shift = pldakit::sample_condition_shift(
        truth, opt.condition_shift, pldakit::detail::mix_seed(cfg.seed, 29));
  }

  pldakit::SynthCorpus corpus = pldakit::generate_corpus(cfg);
  pldakit::EvalSplit eval = pldakit::make_eval_split(
      corpus, opt.eval_speakers, opt.enroll_per_speaker, opt.eval_tests);

  fs::create_directories(opt.out);
  pldakit::save_ivectors(corpus.vectors, opt.out / "ivectors.txt");
  pldakit::save_metadata(corpus.records, opt.out / "metadata.csv");
  pldakit::save_model(corpus.truth_model, opt.out / "truth_model.json");
  pldakit::save_trials(eval.trials, opt.out / "eval_trials.txt");
  pldakit::save_ivectors(eval.vectors, opt.out / "eval_ivectors.txt");

  log.line("synth: wrote " + std::to_string(corpus.vectors.size()) +
           " training vectors, " + std::to_string(eval.vectors.size()) +
           " eval vectors, " + std::to_string(eval.trials.trials.size()) +
           " trials (" + std::to_string(eval.n_target) + " target) to " +
           opt.out.string());
  return 0;
}

// ---------------------------------------------------------------------------
// weaklabel

struct WeaklabelOptions {
  fs::path metadata;
  fs::path out;
};

void add_weaklabel(CLI::App &app, WeaklabelOptions &opt,
                   ConfigBinder &binder) {
  CLI::App *sub = app.add_subcommand(
      "weaklabel", "Derive weak speaker labels from session metadata");
  sub->add_option("--metadata", opt.metadata, "Metadata CSV")->required();
  sub->add_option("--out", opt.out, "Output labels file (utt_id<TAB>label)")
      ->required();
  binder.bind_path("metadata", &opt.metadata);
  binder.bind_path("out", &opt.out);
}

int run_weaklabel(const WeaklabelOptions &opt, const GlobalOptions &global) {
  Log log(global);
  auto records = pldakit::load_metadata(opt.metadata);
  pldakit::WeakLabeling weak = pldakit::derive_weak_labels(records);
  std::vector<std::pair<std::string, std::string>> rows;
  rows.reserve(records.size());
  for (const auto &r : records)
    rows.emplace_back(r.utt_id, weak.labels.at(r.utt_id));
  pldakit::save_labels(rows, opt.out);
  log.line("weaklabel: " + std::to_string(rows.size()) + " utterances, " +
           std::to_string(weak.n_weak_speakers()) + " weak speakers -> " +
           opt.out.string());
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  fs::path ivectors;
  fs::path labels;
  fs::path out;
  long rank = 0;
  int iters = 20;
  std::uint64_t seed = 0;
  long min_utts = 1;
  std::string sigma_mode = "full";
  bool whiten = false;
  bool random_init = false;
};

void add_train(CLI::App &app, TrainOptions &opt, ConfigBinder &binder) {
  CLI::App *sub =
      app.add_subcommand("train", "Train a PLDA model from labelled vectors");
  sub->add_option("--ivectors", opt.ivectors, "i-vector file")->required();
  sub->add_option("--labels", opt.labels, "Labels file (utt_id<TAB>label)")
      ->required();
  sub->add_option("--out", opt.out, "Output model JSON")->required();
  sub->add_option("--rank", opt.rank, "Speaker-subspace rank")->required();
  sub->add_option("--iters", opt.iters, "EM iterations")
      ->capture_default_str();
  sub->add_option("--seed", opt.seed, "Seed for --random-init")
      ->capture_default_str();
  sub->add_option("--min-utts", opt.min_utts,
                  "Drop speakers with fewer utterances")
      ->capture_default_str();
  sub->add_option("--sigma-mode", opt.sigma_mode,
                  "Residual covariance: full|diagonal")
      ->capture_default_str();
  sub->add_flag("--whiten", opt.whiten,
                "Fit a whitening transform before length normalization")
      ->capture_default_str();
  sub->add_flag("--random-init", opt.random_init,
                "Perturb the deterministic subspace initialization")
      ->capture_default_str();
  binder.bind_path("ivectors", &opt.ivectors);
  binder.bind_path("labels", &opt.labels);
  binder.bind_path("out", &opt.out);
  binder.bind("rank", &opt.rank);
  binder.bind("iters", &opt.iters);
  binder.bind("seed", &opt.seed);
  binder.bind("min-utts", &opt.min_utts);
  binder.bind("sigma-mode", &opt.sigma_mode);
  binder.bind("whiten", &opt.whiten);
  binder.bind("random-init", &opt.random_init);
}

int run_train(const TrainOptions &opt, const GlobalOptions &global) {
  Log log(global);
  auto vectors = pldakit::load_ivectors(opt.ivectors);
  auto label_rows = pldakit::load_labels(opt.labels);
  std::unordered_map<std::string, std::string> labels(label_rows.begin(),
                                                      label_rows.end());
  pldakit::LabeledDataset dataset =
      pldakit::make_labeled_dataset(std::move(vectors), std::move(labels));

  pldakit::Preprocessor prep =
      pldakit::fit_preprocessor(dataset.vectors, opt.whiten);
  pldakit::LabeledDataset prepped;
  prepped.dim = dataset.dim;
  prepped.vectors = prep.apply(dataset.vectors);
  prepped.labels = dataset.labels;

  pldakit::TrainConfig cfg;
  cfg.rank = opt.rank;
  cfg.iterations = opt.iters;
  cfg.seed = opt.seed;
  cfg.min_utts_per_speaker = opt.min_utts;
  cfg.random_init = opt.random_init;
  if (opt.sigma_mode == "full")
    cfg.sigma_mode = pldakit::SigmaMode::kFull;
  else if (opt.sigma_mode == "diagonal")
    cfg.sigma_mode = pldakit::SigmaMode::kDiagonal;
  else
    throw UsageFailure("--sigma-mode must be full|diagonal, got '" +
                       opt.sigma_mode + "'");

  log.line("train: " + std::to_string(prepped.vectors.size()) +
           " vectors, rank " + std::to_string(opt.rank) + ", " +
           std::to_string(opt.iters) + " iterations");
  pldakit::TrainResult result =
      pldakit::train_em(prepped, cfg, global.threads);
  for (double ll : result.log_likelihood)
    std::cout << pldakit::detail::format_real(ll) << "\n";
  pldakit::save_model(result.model, prep, opt.out);
  log.line("train: model written to " + opt.out.string());
  return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
  fs::path model;
  fs::path trials;
  fs::path ivectors;
  fs::path out;
  std::string method = "llr";
  bool with_flags = false;
};

void add_score(CLI::App &app, ScoreOptions &opt, ConfigBinder &binder) {
  CLI::App *sub =
      app.add_subcommand("score", "Score verification trials with a model");
  sub->add_option("--model", opt.model, "Model JSON (required for llr)");
  sub->add_option("--trials", opt.trials, "Trial list")->required();
  sub->add_option("--ivectors", opt.ivectors, "i-vector file")->required();
  sub->add_option("--out", opt.out, "Output scores file")->required();
  sub->add_option("--method", opt.method, "Scoring method: llr|cosine")
      ->capture_default_str();
  sub->add_flag("--with-flags", opt.with_flags,
                "Append target|nontarget flags to the scores file")
      ->capture_default_str();
  binder.bind_path("model", &opt.model);
  binder.bind_path("trials", &opt.trials);
  binder.bind_path("ivectors", &opt.ivectors);
  binder.bind_path("out", &opt.out);
  binder.bind("method", &opt.method);
  binder.bind("with-flags", &opt.with_flags);
}

int run_score(const ScoreOptions &opt, const GlobalOptions &global) {
  Log log(global);
  if (opt.method != "llr" && opt.method != "cosine")
    throw UsageFailure("--method must be llr|cosine, got '" + opt.method +
                       "'");
  auto trials = pldakit::load_trials(opt.trials);
  auto vectors = pldakit::load_ivectors(opt.ivectors);

  std::optional<pldakit::SavedModel> saved;
  if (!opt.model.empty()) saved = pldakit::load_model(opt.model);
  if (opt.method == "llr" && !saved)
    throw UsageFailure("--model is required for llr scoring");
  if (saved && saved->preprocess) {
    vectors = saved->preprocess->apply(vectors);
    log.line("score: applied stored preprocessing (center" +
             std::string(saved->preprocess->whitener ? "+whiten" : "") +
             "+length-norm)");
  }

  pldakit::ScoreSet scores;
  if (opt.method == "llr") {
    scores = pldakit::score_llr_batch(saved->model, trials, vectors,
                                      global.threads);
  } else {
    std::unordered_map<std::string, const Eigen::VectorXd *> index;
    for (const auto &v : vectors) {
      if (!index.emplace(v.utt_id, &v.values).second)
        throw pldakit::DuplicateKeyError("score: duplicate utt_id '" +
                                         v.utt_id + "'");
    }
    auto lookup = [&](const std::string &utt) {
      auto it = index.find(utt);
      if (it == index.end())
        throw pldakit::PreconditionError(
            "score: no vector for utterance '" + utt + "'");
      return it->second;
    };
    for (const auto &t : trials.trials)
      scores.entries.push_back(pldakit::ScoreEntry{
          t.enroll_utt, t.test_utt,
          pldakit::score_cosine(*lookup(t.enroll_utt), *lookup(t.test_utt)),
          t.is_target});
  }
  pldakit::save_scores(scores, opt.out, opt.with_flags);
  log.line("score: " + std::to_string(scores.entries.size()) +
           " trials -> " + opt.out.string());
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  fs::path scores;
  fs::path trials;
  fs::path out;
  fs::path det;
};

void add_eval(CLI::App &app, EvalOptions &opt, ConfigBinder &binder) {
  CLI::App *sub = app.add_subcommand(
      "eval", "Compute EER and DET points from scores");
  sub->add_option("--scores", opt.scores, "Scores file")->required();
  sub->add_option("--trials", opt.trials,
                  "Trial list (optional when scores carry target flags)");
  sub->add_option("--out", opt.out, "Output report JSON")->required();
  sub->add_option("--det", opt.det,
                  "Output DET CSV (default: <out stem>_det.csv)");
  binder.bind_path("scores", &opt.scores);
  binder.bind_path("trials", &opt.trials);
  binder.bind_path("out", &opt.out);
  binder.bind_path("det", &opt.det);
}

int run_eval(const EvalOptions &opt, const GlobalOptions &global) {
  Log log(global);
  pldakit::LoadedScores loaded = pldakit::load_scores(opt.scores);
  pldakit::ScoreSet scores;
  if (!opt.trials.empty()) {
    pldakit::TrialList trials = pldakit::load_trials(opt.trials);
    std::unordered_map<std::string, const pldakit::ScoreEntry *> by_pair;
    for (const auto &e : loaded.entries)
      by_pair[e.enroll_utt + '\x1f' + e.test_utt] = &e;
    for (const auto &t : trials.trials) {
      auto it = by_pair.find(t.enroll_utt + '\x1f' + t.test_utt);
      if (it == by_pair.end())
        throw pldakit::PreconditionError("eval: no score for trial (" +
                                         t.enroll_utt + ", " + t.test_utt +
                                         ")");
      scores.entries.push_back(pldakit::ScoreEntry{
          t.enroll_utt, t.test_utt, it->second->score, t.is_target});
    }
  } else {
    if (!loaded.has_flags)
      throw UsageFailure("eval: --trials is required unless the scores file "
                         "carries target|nontarget flags");
    scores.entries = loaded.entries;
  }

  pldakit::EvalReport report = pldakit::compute_eer(scores);

  nlohmann::ordered_json doc;
  doc["eer"] = report.eer;
  doc["eer_threshold"] = report.eer_threshold;
  doc["n_target"] = report.n_target;
  doc["n_nontarget"] = report.n_nontarget;
  doc["n_det_points"] = report.det_points.size();
  pldakit::detail::write_text_file_atomic(opt.out, doc.dump(2) + "\n");

  fs::path det_path = opt.det;
  if (det_path.empty()) {
    det_path = opt.out;
    det_path.replace_extension();
    det_path += "_det.csv";
  }
  std::string det_csv = "false_alarm_rate,miss_rate\n";
  for (const auto &p : report.det_points) {
    det_csv += pldakit::detail::format_real(p.false_alarm_rate);
    det_csv += ',';
    det_csv += pldakit::detail::format_real(p.miss_rate);
    det_csv += '\n';
  }
  pldakit::detail::write_text_file_atomic(det_path, det_csv);

  log.line("eval: eer = " + std::to_string(100.0 * report.eer) + "% over " +
           std::to_string(report.n_target) + " target / " +
           std::to_string(report.n_nontarget) + " nontarget trials");
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentOptions {
  std::string name;
  std::vector<std::uint64_t> seeds;
  fs::path out;
  // Overrides; negative sentinel = keep the experiment default.
  long dim = -1;
  long rank = -1;
  double speaker_scale = -1.0;
  double noise_scale = -1.0;
  double utts_per_channel = -1.0;
  long eval_speakers = -1;
  long tests_per_speaker = -1;
  int em_iterations = -1;
  long strong_speakers = -1;
  long weak_sessions = -1;
  long customer_pool = -1;
  long service_pool = -1;
  std::vector<long> strong_grid;
  std::vector<long> weak_grid;
  double shift_scale = -1.0;
};

void add_experiment(CLI::App &app, ExperimentOptions &opt,
                    ConfigBinder &binder) {
  CLI::App *sub = app.add_subcommand(
      "experiment", "Run a scripted experiment on synthetic data");
  sub->add_option("--name", opt.name, "table2|fig2|fig3|fig4")->required();
  sub->add_option("--seeds", opt.seeds, "Seeds (default 1 2 3 4 5)");
  sub->add_option("--out", opt.out, "Output directory")->required();
  sub->add_option("--dim", opt.dim, "Override: i-vector dimension");
  sub->add_option("--rank", opt.rank, "Override: subspace rank");
  sub->add_option("--speaker-scale", opt.speaker_scale,
                  "Override: speaker-subspace scale");
  sub->add_option("--noise-scale", opt.noise_scale,
                  "Override: residual noise scale");
  sub->add_option("--utts-per-channel", opt.utts_per_channel,
                  "Override: mean utterances per channel");
  sub->add_option("--eval-speakers", opt.eval_speakers,
                  "Override: evaluation speakers");
  sub->add_option("--eval-tests", opt.tests_per_speaker,
                  "Override: test utterances per evaluation speaker");
  sub->add_option("--em-iters", opt.em_iterations,
                  "Override: EM iterations");
  sub->add_option("--strong-speakers", opt.strong_speakers,
                  "Override: strong-set speakers (table2)");
  sub->add_option("--weak-sessions", opt.weak_sessions,
                  "Override: weak-set sessions");
  sub->add_option("--customer-pool", opt.customer_pool,
                  "Override: customer pool size");
  sub->add_option("--service-pool", opt.service_pool,
                  "Override: service pool size");
  sub->add_option("--strong-grid", opt.strong_grid,
                  "Override: strong-speaker grid (fig2/fig3/fig4)");
  sub->add_option("--weak-grid", opt.weak_grid,
                  "Override: weak-session grid (fig3)");
  sub->add_option("--shift-scale", opt.shift_scale,
                  "Override: domain-shift magnitude (fig4)");
  binder.bind("name", &opt.name);
  binder.bind("seeds", &opt.seeds);
  binder.bind_path("out", &opt.out);
  binder.bind("dim", &opt.dim);
  binder.bind("rank", &opt.rank);
  binder.bind("speaker-scale", &opt.speaker_scale);
  binder.bind("noise-scale", &opt.noise_scale);
  binder.bind("utts-per-channel", &opt.utts_per_channel);
  binder.bind("eval-speakers", &opt.eval_speakers);
  binder.bind("eval-tests", &opt.tests_per_speaker);
  binder.bind("em-iters", &opt.em_iterations);
  binder.bind("strong-speakers", &opt.strong_speakers);
  binder.bind("weak-sessions", &opt.weak_sessions);
  binder.bind("customer-pool", &opt.customer_pool);
  binder.bind("service-pool", &opt.service_pool);
  binder.bind("strong-grid", &opt.strong_grid);
  binder.bind("weak-grid", &opt.weak_grid);
  binder.bind("shift-scale", &opt.shift_scale);
}

int run_experiment_cmd(const ExperimentOptions &opt,
                       const GlobalOptions &global) {
  Log log(global);
  pldakit::ExperimentSpec spec = pldakit::ExperimentSpec::defaults(opt.name);
  spec.output_dir = opt.out;
  spec.threads = global.threads;
  if (!opt.seeds.empty()) spec.seeds = opt.seeds;
  if (opt.dim > 0) spec.dim = opt.dim;
  if (opt.rank > 0) spec.rank = opt.rank;
  if (opt.speaker_scale >= 0.0) spec.speaker_scale = opt.speaker_scale;
  if (opt.noise_scale >= 0.0) spec.noise_scale = opt.noise_scale;
  if (opt.utts_per_channel > 0.0) spec.utts_per_channel = opt.utts_per_channel;
  if (opt.eval_speakers > 0) spec.eval_speakers = opt.eval_speakers;
  if (opt.tests_per_speaker > 0) spec.tests_per_speaker = opt.tests_per_speaker;
  if (opt.em_iterations > 0) spec.em_iterations = opt.em_iterations;
  if (opt.strong_speakers > 0) spec.strong_speakers = opt.strong_speakers;
  if (opt.weak_sessions > 0) spec.weak_sessions = opt.weak_sessions;
  if (opt.customer_pool > 0) spec.customer_pool = opt.customer_pool;
  if (opt.service_pool > 0) spec.service_pool = opt.service_pool;
  if (!opt.strong_grid.empty()) spec.strong_grid = opt.strong_grid;
  if (!opt.weak_grid.empty()) spec.weak_grid = opt.weak_grid;
  if (opt.shift_scale >= 0.0) spec.shift_scale = opt.shift_scale;

  log.line("experiment: " + spec.name + " over " +
           std::to_string(spec.seeds.size()) + " seeds");
  pldakit::ExperimentResult result = pldakit::run_experiment(spec);
  std::cout << result.summary_text;
  log.line("experiment: outputs in " + opt.out.string());
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{std::string("pldakit ") + pldakit::kVersion +
               " - PLDA speaker-verification backend toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--threads", global.threads,
                 "Worker threads for training and batch scoring")
      ->capture_default_str();
  app.add_flag("--quiet", global.quiet, "Suppress progress logging")
      ->capture_default_str();
  std::string config_path_dummy;
  app.add_option("--config", config_path_dummy,
                 "JSON config file; flags override its values");

  SynthOptions synth_opt;
  WeaklabelOptions weaklabel_opt;
  TrainOptions train_opt;
  ScoreOptions score_opt;
  EvalOptions eval_opt;
  ExperimentOptions experiment_opt;

  std::map<std::string, ConfigBinder> binders;
  add_synth(app, synth_opt, binders["synth"]);
  add_weaklabel(app, weaklabel_opt, binders["weaklabel"]);
  add_train(app, train_opt, binders["train"]);
  add_score(app, score_opt, binders["score"]);
  add_eval(app, eval_opt, binders["eval"]);
  add_experiment(app, experiment_opt, binders["experiment"]);

  try {
    ArgvScan scan = scan_argv(argc, argv);
    if (!scan.config_path.empty()) {
      if (scan.subcommand.empty())
        throw UsageFailure("--config requires a subcommand");
      json config;
      try {
        config =
            json::parse(pldakit::detail::read_text_file(scan.config_path));
      } catch (const json::parse_error &e) {
        throw UsageFailure(std::string("config: invalid JSON: ") + e.what());
      }
      binders.at(scan.subcommand).apply(config);
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
      return app.exit(e);
    } catch (const CLI::ParseError &e) {
      std::cerr << "pldakit: " << e.what() << "\n";
      return 2;
    }

    if (app.got_subcommand("synth")) return run_synth(synth_opt, global);
    if (app.got_subcommand("weaklabel"))
      return run_weaklabel(weaklabel_opt, global);
    if (app.got_subcommand("train")) return run_train(train_opt, global);
    if (app.got_subcommand("score")) return run_score(score_opt, global);
    if (app.got_subcommand("eval")) return run_eval(eval_opt, global);
    if (app.got_subcommand("experiment"))
      return run_experiment_cmd(experiment_opt, global);
    std::cerr << "pldakit: no subcommand given\n";
    return 2;
  } catch (const UsageFailure &e) {
    std::cerr << "pldakit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "pldakit: " << e.what() << "\n";
    return 1;
  }
}
