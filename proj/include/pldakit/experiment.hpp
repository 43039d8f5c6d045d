// pldakit/experiment.hpp

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

// Scripted end-to-end experiment drivers over synthetic corpora:
//   table2  strong vs. weak vs. pooled-mix training, one EER per condition
//   fig2    EER as a function of the amount of training data
//   fig3    pooled-training grid over strong speakers x weak sessions
//   fig4    pooled training vs. unsupervised preprocessing adaptation under
//           a domain shift between the strong set and the evaluation data
// Every run is a pure function of its spec (sizes + seeds); reruns are
// bit-identical.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pldakit/detail/util.hpp"
#include "pldakit/errors.hpp"
#include "pldakit/eval.hpp"
#include "pldakit/labeling.hpp"
#include "pldakit/plda.hpp"
#include "pldakit/preprocess.hpp"
#include "pldakit/synth.hpp"
#include "pldakit/types.hpp"
#include "pldakit/version.hpp"

namespace pldakit {

struct ExperimentSpec {
  std::string name;  // table2 | fig2 | fig3 | fig4

  // World parameters (desk scale).
  Eigen::Index dim = 50;
  Eigen::Index rank = 25;
  double speaker_scale = 1.0;
  double noise_scale = 1.0;
  double utts_per_channel = 5.0;
  long eval_speakers = 200;
  long tests_per_speaker = 6;
  int em_iterations = 20;

  // Corpus sizes.  Weak axes count sessions; strong axes count speakers
  // (one session per speaker, drawn round-robin so the count is exact).
  long strong_speakers = 2000;
  long weak_sessions = 2000;
  long customer_pool = 3000;
  long service_pool = 200;
  std::vector<long> strong_grid;  // fig2 / fig3 / fig4
  std::vector<long> weak_grid;    // fig3
  double shift_scale = 0.0;       // fig4 domain offset magnitude

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir;  // empty: keep results in memory only
  int threads = 1;

  static ExperimentSpec defaults(const std::string &experiment_name) {
    ExperimentSpec spec;
    spec.name = experiment_name;
    if (experiment_name == "table2") {
      // All sizes at their member defaults.
    } else if (experiment_name == "fig2") {
      spec.strong_grid = {50, 100, 200, 500, 1000, 2000};
    } else if (experiment_name == "fig3") {
      spec.strong_grid = {50, 100, 200, 500};
      spec.weak_grid = {0, 200, 800, 2000};
    } else if (experiment_name == "fig4") {
      spec.strong_grid = {100, 500, 2000};
      spec.shift_scale = 2.0;
    } else {
      throw ConfigError("unknown experiment name '" + experiment_name + "'");
    }
    return spec;
  }

  void validate() const {
    if (name != "table2" && name != "fig2" && name != "fig3" && name != "fig4")
      throw ConfigError("unknown experiment name '" + name + "'");
    if (seeds.empty()) throw ConfigError("experiment: no seeds given");
    if ((name == "fig2" || name == "fig3" || name == "fig4") &&
        strong_grid.empty())
      throw ConfigError("experiment: empty strong-speaker grid");
    if (name == "fig3" && weak_grid.empty())
      throw ConfigError("experiment: empty weak-session grid");
    if (eval_speakers < 2 || tests_per_speaker < 1)
      throw ConfigError("experiment: evaluation split too small");
  }
};

struct ConditionSeries {
  std::string name;
  std::vector<double> eers;  // one per seed, in seed order

  double mean() const {
    double s = 0.0;
    for (double e : eers) s += e;
    return s / static_cast<double>(eers.size());
  }

  double stderr_mean() const {
    if (eers.size() < 2) return 0.0;
    double m = mean(), ss = 0.0;
    for (double e : eers) ss += (e - m) * (e - m);
    return std::sqrt(ss / static_cast<double>(eers.size() - 1) /
                     static_cast<double>(eers.size()));
  }
};

/// Mean and standard error of per-seed differences a - b.
struct PairedComparison {
  double mean_diff = 0.0;
  double se_diff = 0.0;
};

inline PairedComparison paired_diff(const ConditionSeries &a,
                                    const ConditionSeries &b) {
  if (a.eers.size() != b.eers.size() || a.eers.empty())
    throw PreconditionError("paired_diff: mismatched seed counts");
  ConditionSeries d;
  d.eers.resize(a.eers.size());
  for (size_t i = 0; i < a.eers.size(); ++i) d.eers[i] = a.eers[i] - b.eers[i];
  return PairedComparison{d.mean(), d.stderr_mean()};
}

struct ExperimentResult {
  std::vector<ConditionSeries> conditions;
  std::string summary_text;
  nlohmann::ordered_json manifest;

  const ConditionSeries &series(const std::string &name) const {
    for (const auto &c : conditions)
      if (c.name == name) return c;
    throw PreconditionError("experiment result: no condition '" + name + "'");
  }
};

namespace detail {

// Seeds for the corpora are derived from (base seed, role, size) only, so
// the same training set reappears bit-identically across experiments: the
// fig3 pooled cell with zero weak sessions trains on exactly the fig2
// strong-curve corpus.
enum : std::uint64_t { kRoleTruth = 0, kRoleStrong = 1, kRoleWeak = 2,
                       kRoleEval = 3, kRoleShift = 4 };

inline std::uint64_t corpus_seed(std::uint64_t base, std::uint64_t role,
                                 std::uint64_t size) {
  return mix_seed(mix_seed(base, role), size);
}

inline SynthConfig base_config(const ExperimentSpec &spec) {
  SynthConfig cfg;
  cfg.dim = spec.dim;
  cfg.rank = spec.rank;
  cfg.speaker_scale = spec.speaker_scale;
  cfg.noise_scale = spec.noise_scale;
  cfg.utts_per_channel = spec.utts_per_channel;
  return cfg;
}

inline SynthConfig strong_config(const ExperimentSpec &spec,
                                 std::uint64_t seed, long n_speakers) {
  SynthConfig cfg = base_config(spec);
  cfg.n_sessions = n_speakers;
  cfg.customer_pool = n_speakers;
  cfg.customer_assignment = PoolAssignment::kRoundRobin;
  cfg.service_pool = 1;  // service channel of the strong archive is unused
  cfg.seed = corpus_seed(seed, kRoleStrong, static_cast<std::uint64_t>(n_speakers));
  cfg.pool_tag = "st";
  return cfg;
}

inline SynthConfig weak_config(const ExperimentSpec &spec, std::uint64_t seed,
                               long n_sessions,
                               const Eigen::VectorXd &shift) {
  SynthConfig cfg = base_config(spec);
  cfg.n_sessions = n_sessions;
  cfg.customer_pool = spec.customer_pool;
  cfg.service_pool = spec.service_pool;
  cfg.seed = corpus_seed(seed, kRoleWeak, static_cast<std::uint64_t>(n_sessions));
  cfg.pool_tag = "wk";
  cfg.condition_shift = shift;
  return cfg;
}

inline SynthConfig eval_config(const ExperimentSpec &spec, std::uint64_t seed,
                               const Eigen::VectorXd &shift) {
  SynthConfig cfg = base_config(spec);
  cfg.n_sessions = 1;
  cfg.customer_pool = 1;
  cfg.service_pool = 1;
  cfg.seed = corpus_seed(seed, kRoleEval, 0);
  cfg.pool_tag = "ev";
  cfg.condition_shift = shift;
  return cfg;
}

enum class ChannelFilter { kCustomer, kService, kMixHalves };

// Strong training set: customer channel, true speaker identities as labels.
inline LabeledDataset strong_dataset(const SynthCorpus &corpus) {
  std::vector<IVector> vectors;
  std::unordered_map<std::string, std::string> labels;
  for (size_t i = 0; i < corpus.records.size(); ++i) {
    const UtteranceRecord &r = corpus.records[i];
    if (r.local_speaker_id != "cust") continue;
    vectors.push_back(corpus.vectors[i]);
    labels[r.utt_id] = *r.true_speaker_id;
  }
  return make_labeled_dataset(std::move(vectors), std::move(labels));
}

// Weak training set: the selected channel(s) with session-derived labels.
// kMixHalves mimics sampling half the sessions from each channel: customer
// utterances of the first half of the sessions plus service utterances of
// the second half.
inline LabeledDataset weak_dataset(const SynthCorpus &corpus,
                                   ChannelFilter filter) {
  long half = corpus.config.n_sessions / 2;
  std::unordered_set<std::string> first_half_sessions;
  if (filter == ChannelFilter::kMixHalves)
    for (long s = 0; s < half; ++s)
      first_half_sessions.insert(corpus.config.pool_tag + "-s" +
                                 zero_pad(s, 6));

  std::vector<UtteranceRecord> selected;
  std::vector<IVector> vectors;
  for (size_t i = 0; i < corpus.records.size(); ++i) {
    const UtteranceRecord &r = corpus.records[i];
    bool customer = r.local_speaker_id == "cust";
    bool keep = false;
    switch (filter) {
      case ChannelFilter::kCustomer: keep = customer; break;
      case ChannelFilter::kService: keep = !customer; break;
      case ChannelFilter::kMixHalves:
        keep = customer == (first_half_sessions.contains(r.session_id));
        break;
    }
    if (!keep) continue;
    selected.push_back(r);
    vectors.push_back(corpus.vectors[i]);
  }
  WeakLabeling weak = derive_weak_labels(selected);
  std::unordered_map<std::string, std::string> labels(weak.labels.begin(),
                                                      weak.labels.end());
  return make_labeled_dataset(std::move(vectors), std::move(labels));
}

inline std::vector<IVector> customer_vectors(const SynthCorpus &corpus) {
  std::vector<IVector> out;
  for (size_t i = 0; i < corpus.records.size(); ++i)
    if (corpus.records[i].local_speaker_id == "cust")
      out.push_back(corpus.vectors[i]);
  return out;
}

inline EvalReport eer_of(const ScoreSet &scores) { return compute_eer(scores); }

inline EvalReport run_cosine(const EvalSplit &eval) {
  std::unordered_map<std::string, const Eigen::VectorXd *> index;
  for (const IVector &v : eval.vectors) index[v.utt_id] = &v.values;
  ScoreSet scores;
  scores.entries.reserve(eval.trials.trials.size());
  for (const Trial &t : eval.trials.trials)
    scores.entries.push_back(
        ScoreEntry{t.enroll_utt, t.test_utt,
                   score_cosine(*index.at(t.enroll_utt), *index.at(t.test_utt)),
                   t.is_target});
  return eer_of(scores);
}

inline EvalReport run_plda(const LabeledDataset &train, const EvalSplit &eval,
                           bool whiten, const ExperimentSpec &spec) {
  Preprocessor prep = fit_preprocessor(train.vectors, whiten);
  LabeledDataset prepped;
  prepped.dim = train.dim;
  prepped.vectors = prep.apply(train.vectors);
  prepped.labels = train.labels;
  TrainConfig cfg;
  cfg.rank = spec.rank;
  cfg.iterations = spec.em_iterations;
  TrainResult trained = train_em(prepped, cfg, spec.threads);
  ScoreSet scores = score_llr_batch(trained.model, eval.trials,
                                    prep.apply(eval.vectors), spec.threads);
  return eer_of(scores);
}

// Unsupervised adaptation baseline: keep the PLDA trained on the strong set
// but refit the centering/whitening front end on unlabelled in-domain data.
inline EvalReport run_adapted(const LabeledDataset &strong,
                              const std::vector<IVector> &indomain_vectors,
                              const EvalSplit &eval,
                              const ExperimentSpec &spec) {
  Preprocessor strong_prep = fit_preprocessor(strong.vectors, true);
  LabeledDataset prepped;
  prepped.dim = strong.dim;
  prepped.vectors = strong_prep.apply(strong.vectors);
  prepped.labels = strong.labels;
  TrainConfig cfg;
  cfg.rank = spec.rank;
  cfg.iterations = spec.em_iterations;
  TrainResult trained = train_em(prepped, cfg, spec.threads);

  Preprocessor adapted_prep = fit_preprocessor(indomain_vectors, true);
  ScoreSet scores =
      score_llr_batch(trained.model, eval.trials,
                      adapted_prep.apply(eval.vectors), spec.threads);
  return eer_of(scores);
}

// Domain offset for fig4: a speaker-independent unit vector orthogonal to
// the speaker subspace, scaled by spec.shift_scale.
inline Eigen::VectorXd condition_shift_vector(const ExperimentSpec &spec,
                                              const PldaModel &truth,
                                              std::uint64_t seed) {
  return sample_condition_shift(truth, spec.shift_scale,
                                corpus_seed(seed, kRoleShift, 0));
}

// Runs `per_seed` for every seed and assembles the per-condition series.
// The callback must emit the same condition names in the same order for
// every seed.
inline ExperimentResult assemble(
    const ExperimentSpec &spec,
    const std::function<std::vector<std::pair<std::string, double>>(
        std::uint64_t)> &per_seed) {
  ExperimentResult result;
  for (size_t si = 0; si < spec.seeds.size(); ++si) {
    auto rows = per_seed(spec.seeds[si]);
    if (si == 0) {
      for (const auto &[name, eer] : rows)
        result.conditions.push_back(ConditionSeries{name, {eer}});
    } else {
      if (rows.size() != result.conditions.size())
        throw NumericError("experiment: inconsistent condition lists across "
                           "seeds");
      for (size_t c = 0; c < rows.size(); ++c) {
        if (rows[c].first != result.conditions[c].name)
          throw NumericError("experiment: condition order changed across "
                             "seeds");
        result.conditions[c].eers.push_back(rows[c].second);
      }
    }
  }

  std::vector<std::pair<std::string, EvalReport>> mean_reports;
  for (const auto &c : result.conditions) {
    EvalReport r;
    r.eer = c.mean();
    mean_reports.emplace_back(c.name, r);
  }
  result.summary_text = summarize_experiment(mean_reports).text();
  return result;
}

inline nlohmann::ordered_json spec_to_json(const ExperimentSpec &spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  j["rank"] = spec.rank;
  j["speaker_scale"] = spec.speaker_scale;
  j["noise_scale"] = spec.noise_scale;
  j["utts_per_channel"] = spec.utts_per_channel;
  j["eval_speakers"] = spec.eval_speakers;
  j["tests_per_speaker"] = spec.tests_per_speaker;
  j["em_iterations"] = spec.em_iterations;
  j["strong_speakers"] = spec.strong_speakers;
  j["weak_sessions"] = spec.weak_sessions;
  j["customer_pool"] = spec.customer_pool;
  j["service_pool"] = spec.service_pool;
  j["strong_grid"] = spec.strong_grid;
  j["weak_grid"] = spec.weak_grid;
  j["shift_scale"] = spec.shift_scale;
  j["seeds"] = spec.seeds;
  j["threads"] = spec.threads;
  return j;
}

inline void finalize(const ExperimentSpec &spec, ExperimentResult *result) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = std::string("pldakit ") + kVersion;
  manifest["spec"] = spec_to_json(spec);
  nlohmann::ordered_json conditions = nlohmann::ordered_json::array();
  for (const auto &c : result->conditions) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["eers"] = c.eers;
    jc["mean"] = c.mean();
    jc["stderr"] = c.stderr_mean();
    conditions.push_back(std::move(jc));
  }
  manifest["conditions"] = std::move(conditions);
  result->manifest = std::move(manifest);

  if (spec.output_dir.empty()) return;
  std::filesystem::create_directories(spec.output_dir);
  std::string csv = "condition,seed,eer\n";
  for (const auto &c : result->conditions)
    for (size_t si = 0; si < c.eers.size(); ++si) {
      csv += c.name;
      csv += ',';
      csv += std::to_string(spec.seeds[si]);
      csv += ',';
      csv += format_real(c.eers[si]);
      csv += '\n';
    }
  std::string summary_csv = "name,eer,eer_percent\n";
  for (const auto &c : result->conditions) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.2f\n", c.name.c_str(),
                  c.mean(), 100.0 * c.mean());
    summary_csv += buf;
  }
  write_text_file_atomic(spec.output_dir / (spec.name + "_results.csv"), csv);
  write_text_file_atomic(spec.output_dir / (spec.name + "_summary.csv"),
                         summary_csv);
  write_text_file_atomic(spec.output_dir / (spec.name + "_manifest.json"),
                         result->manifest.dump(2) + "\n");
}

}  // namespace detail

/// Strong vs. weak training at full desk scale: cosine baseline, PLDA on
/// strong labels, and PLDA on the weak-customer / weak-service / weak-mix
/// subsets of one session corpus.
inline ExperimentResult run_table2(const ExperimentSpec &spec) {
  spec.validate();
  auto result = detail::assemble(spec, [&](std::uint64_t seed) {
    PldaModel truth = sample_truth_model(
        spec.dim, spec.rank, spec.speaker_scale, spec.noise_scale,
        detail::corpus_seed(seed, detail::kRoleTruth, 0));
    SynthCorpus strong_corpus = generate_corpus_with_truth(
        detail::strong_config(spec, seed, spec.strong_speakers), truth);
    SynthCorpus weak_corpus = generate_corpus_with_truth(
        detail::weak_config(spec, seed, spec.weak_sessions, Eigen::VectorXd()),
        truth);
    SynthCorpus eval_ctx = generate_corpus_with_truth(
        detail::eval_config(spec, seed, Eigen::VectorXd()), truth);
    EvalSplit eval =
        make_eval_split(eval_ctx, spec.eval_speakers, 1, spec.tests_per_speaker);

    LabeledDataset strong = detail::strong_dataset(strong_corpus);
    std::vector<std::pair<std::string, double>> rows;
    rows.emplace_back("cosine", detail::run_cosine(eval).eer);
    rows.emplace_back("strong",
                      detail::run_plda(strong, eval, false, spec).eer);
    rows.emplace_back(
        "weak-customer",
        detail::run_plda(
            detail::weak_dataset(weak_corpus, detail::ChannelFilter::kCustomer),
            eval, false, spec)
            .eer);
    rows.emplace_back(
        "weak-service",
        detail::run_plda(
            detail::weak_dataset(weak_corpus, detail::ChannelFilter::kService),
            eval, false, spec)
            .eer);
    rows.emplace_back(
        "weak-mix",
        detail::run_plda(detail::weak_dataset(weak_corpus,
                                              detail::ChannelFilter::kMixHalves),
                         eval, false, spec)
            .eer);
    return rows;
  });
  detail::finalize(spec, &result);
  return result;
}

/// EER as a function of the training-set size, for strong and weak training,
/// with the cosine baseline as the zero-data reference point.
inline ExperimentResult run_fig2(const ExperimentSpec &spec) {
  spec.validate();
  auto result = detail::assemble(spec, [&](std::uint64_t seed) {
    PldaModel truth = sample_truth_model(
        spec.dim, spec.rank, spec.speaker_scale, spec.noise_scale,
        detail::corpus_seed(seed, detail::kRoleTruth, 0));
    SynthCorpus eval_ctx = generate_corpus_with_truth(
        detail::eval_config(spec, seed, Eigen::VectorXd()), truth);
    EvalSplit eval =
        make_eval_split(eval_ctx, spec.eval_speakers, 1, spec.tests_per_speaker);

    std::vector<std::pair<std::string, double>> rows;
    rows.emplace_back("cosine", detail::run_cosine(eval).eer);
    for (long n : spec.strong_grid) {
      SynthCorpus strong_corpus =
          generate_corpus_with_truth(detail::strong_config(spec, seed, n), truth);
      rows.emplace_back(
          "strong@" + std::to_string(n),
          detail::run_plda(detail::strong_dataset(strong_corpus), eval, false,
                           spec)
              .eer);
    }
    for (long n : spec.strong_grid) {
      SynthCorpus weak_corpus = generate_corpus_with_truth(
          detail::weak_config(spec, seed, n, Eigen::VectorXd()), truth);
      rows.emplace_back(
          "weak-customer@" + std::to_string(n),
          detail::run_plda(detail::weak_dataset(weak_corpus,
                                                detail::ChannelFilter::kCustomer),
                           eval, false, spec)
              .eer);
      rows.emplace_back(
          "weak-service@" + std::to_string(n),
          detail::run_plda(detail::weak_dataset(weak_corpus,
                                                detail::ChannelFilter::kService),
                           eval, false, spec)
              .eer);
    }
    return rows;
  });
  detail::finalize(spec, &result);
  return result;
}

/// Pooled-training grid: PLDA on strong(s) + weak-customer(w) for every cell
/// of strong_grid x weak_grid.  w = 0 degenerates to strong-only training.
inline ExperimentResult run_fig3(const ExperimentSpec &spec) {
  spec.validate();
  auto result = detail::assemble(spec, [&](std::uint64_t seed) {
    PldaModel truth = sample_truth_model(
        spec.dim, spec.rank, spec.speaker_scale, spec.noise_scale,
        detail::corpus_seed(seed, detail::kRoleTruth, 0));
    SynthCorpus eval_ctx = generate_corpus_with_truth(
        detail::eval_config(spec, seed, Eigen::VectorXd()), truth);
    EvalSplit eval =
        make_eval_split(eval_ctx, spec.eval_speakers, 1, spec.tests_per_speaker);

    std::vector<std::pair<std::string, double>> rows;
    for (long s : spec.strong_grid) {
      SynthCorpus strong_corpus =
          generate_corpus_with_truth(detail::strong_config(spec, seed, s), truth);
      LabeledDataset strong = detail::strong_dataset(strong_corpus);
      for (long w : spec.weak_grid) {
        LabeledDataset weak;  // empty when w == 0
        if (w > 0) {
          SynthCorpus weak_corpus = generate_corpus_with_truth(
              detail::weak_config(spec, seed, w, Eigen::VectorXd()), truth);
          weak = detail::weak_dataset(weak_corpus,
                                      detail::ChannelFilter::kCustomer);
        }
        LabeledDataset pooled = pool_datasets(strong, weak);
        rows.emplace_back(
            "pooled@s" + std::to_string(s) + "w" + std::to_string(w),
            detail::run_plda(pooled, eval, false, spec).eer);
      }
    }
    return rows;
  });
  detail::finalize(spec, &result);
  return result;
}

/// Pooled training vs. unsupervised preprocessing adaptation under a domain
/// offset: the strong set lives in the unshifted domain, the weak set and the
/// evaluation data in the shifted one.  All three conditions use the full
/// center + whiten + length-normalize pipeline so that with a zero shift the
/// adapted and strong-only conditions coincide up to estimation noise.
inline ExperimentResult run_fig4(const ExperimentSpec &spec) {
  spec.validate();
  auto result = detail::assemble(spec, [&](std::uint64_t seed) {
    PldaModel truth = sample_truth_model(
        spec.dim, spec.rank, spec.speaker_scale, spec.noise_scale,
        detail::corpus_seed(seed, detail::kRoleTruth, 0));
    Eigen::VectorXd shift = detail::condition_shift_vector(spec, truth, seed);

    SynthCorpus weak_corpus = generate_corpus_with_truth(
        detail::weak_config(spec, seed, spec.weak_sessions, shift), truth);
    SynthCorpus eval_ctx = generate_corpus_with_truth(
        detail::eval_config(spec, seed, shift), truth);
    EvalSplit eval =
        make_eval_split(eval_ctx, spec.eval_speakers, 1, spec.tests_per_speaker);

    LabeledDataset weak =
        detail::weak_dataset(weak_corpus, detail::ChannelFilter::kCustomer);
    std::vector<IVector> indomain = detail::customer_vectors(weak_corpus);

    std::vector<std::pair<std::string, double>> rows;
    for (long s : spec.strong_grid) {
      SynthCorpus strong_corpus =
          generate_corpus_with_truth(detail::strong_config(spec, seed, s), truth);
      LabeledDataset strong = detail::strong_dataset(strong_corpus);
      rows.emplace_back("strong-only@" + std::to_string(s),
                        detail::run_plda(strong, eval, true, spec).eer);
      rows.emplace_back(
          "pooled@" + std::to_string(s),
          detail::run_plda(pool_datasets(strong, weak), eval, true, spec).eer);
      rows.emplace_back(
          "adapted@" + std::to_string(s),
          detail::run_adapted(strong, indomain, eval, spec).eer);
    }
    return rows;
  });
  detail::finalize(spec, &result);
  return result;
}

inline ExperimentResult run_experiment(const ExperimentSpec &spec) {
  if (spec.name == "table2") return run_table2(spec);
  if (spec.name == "fig2") return run_fig2(spec);
  if (spec.name == "fig3") return run_fig3(spec);
  if (spec.name == "fig4") return run_fig4(spec);
  throw ConfigError("unknown experiment name '" + spec.name + "'");
}

}  // namespace pldakit
