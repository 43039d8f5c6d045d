// tests/test_synth.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "pldakit/labeling.hpp"
#include "pldakit/synth.hpp"
#include "support/oracles.hpp"

using namespace pldakit;
using Catch::Approx;

TEST_CASE("truth model construction") {
  PldaModel model = sample_truth_model(20, 10, 1.0, 1.0, 5);
  CHECK(model.mean.isZero(0.0));
  // Orthonormal columns times the scale: V^T V = scale^2 I.
  Eigen::MatrixXd gram =
      model.speaker_subspace.transpose() * model.speaker_subspace;
  CHECK((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((model.residual_cov - Eigen::MatrixXd::Identity(20, 20))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  SECTION("zero speaker scale gives a zero subspace") {
    PldaModel flat = sample_truth_model(6, 3, 0.0, 1.0, 5);
    CHECK(flat.speaker_subspace.isZero(0.0));
  }
  SECTION("same seed, same model, bit for bit") {
    PldaModel again = sample_truth_model(20, 10, 1.0, 1.0, 5);
    CHECK(again.speaker_subspace == model.speaker_subspace);
    CHECK(again.residual_cov == model.residual_cov);
  }
  SECTION("random SPD residual stays positive definite") {
    PldaModel spd = sample_truth_model(8, 4, 1.0, 0.7, 6, true);
    Eigen::LLT<Eigen::MatrixXd> llt(spd.residual_cov);
    CHECK(llt.info() == Eigen::Success);
    CHECK_FALSE(spd.residual_cov.isDiagonal(1e-12));
  }
}

TEST_CASE("corpus generation is deterministic") {
  SynthConfig cfg;
  cfg.dim = 8;
  cfg.rank = 4;
  cfg.n_sessions = 30;
  cfg.customer_pool = 50;
  cfg.service_pool = 5;
  cfg.seed = 77;
  SynthCorpus a = generate_corpus(cfg);
  SynthCorpus b = generate_corpus(cfg);
  REQUIRE(a.vectors.size() == b.vectors.size());
  for (size_t i = 0; i < a.vectors.size(); ++i) {
    CHECK(a.vectors[i].utt_id == b.vectors[i].utt_id);
    CHECK(a.vectors[i].values == b.vectors[i].values);
  }
  CHECK(a.records.size() == a.vectors.size());
  for (const auto &r : a.records) REQUIRE(r.true_speaker_id.has_value());
}

TEST_CASE("every session has two channels with at least one utterance") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 2;
  cfg.n_sessions = 40;
  cfg.customer_pool = 10;
  cfg.service_pool = 3;
  cfg.utts_per_channel = 0.3;  // Poisson mostly 0; the floor keeps 1
  cfg.seed = 9;
  SynthCorpus corpus = generate_corpus(cfg);
  std::map<std::string, std::set<std::string>> channels;
  for (const auto &r : corpus.records)
    channels[r.session_id].insert(r.local_speaker_id);
  CHECK(channels.size() == 40);
  for (const auto &[session, locals] : channels)
    CHECK(locals == std::set<std::string>{"cust", "serv"});
}

TEST_CASE("pool of one collapses every session onto one speaker") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 2;
  cfg.n_sessions = 25;
  cfg.customer_pool = 1;
  cfg.service_pool = 1;
  cfg.seed = 15;
  SynthCorpus corpus = generate_corpus(cfg);

  std::set<std::string> true_customers;
  std::vector<UtteranceRecord> customer_records;
  for (const auto &r : corpus.records)
    if (r.local_speaker_id == "cust") {
      true_customers.insert(*r.true_speaker_id);
      customer_records.push_back(r);
    }
  CHECK(true_customers.size() == 1);
  WeakLabeling weak = derive_weak_labels(customer_records);
  CHECK(weak.n_weak_speakers() == 25);  // one split label per session
}

TEST_CASE("huge pools make weak labels match true labels") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 2;
  cfg.n_sessions = 2000;
  cfg.customer_pool = 2000L * 1000000L;
  cfg.service_pool = 2000L * 1000000L;
  cfg.seed = 31;
  cfg.utts_per_channel = 1.0;
  SynthCorpus corpus = generate_corpus(cfg);

  std::vector<UtteranceRecord> customer_records;
  std::set<std::string> distinct;
  for (const auto &r : corpus.records)
    if (r.local_speaker_id == "cust") {
      customer_records.push_back(r);
      distinct.insert(*r.true_speaker_id);
    }
  // Birthday-problem oracle: expected collisions n^2 / (2 pool) = 0.001.
  size_t collisions = 2000 - distinct.size();
  CHECK(collisions <= 1);

  LabelQualityReport report =
      quality_report(derive_weak_labels(customer_records), customer_records);
  CHECK(report.split_rate < 0.01);
  CHECK(report.purity == 1.0);
}

TEST_CASE("occupancy of a small service pool matches the formula") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 2;
  cfg.n_sessions = 2000;
  cfg.customer_pool = 100000;
  cfg.service_pool = 200;
  cfg.seed = 47;
  cfg.utts_per_channel = 1.0;
  SynthCorpus corpus = generate_corpus(cfg);

  std::set<std::string> agents;
  std::vector<UtteranceRecord> service_records;
  for (const auto &r : corpus.records)
    if (r.local_speaker_id == "serv") {
      agents.insert(*r.true_speaker_id);
      service_records.push_back(r);
    }
  double expected = oracles::occupancy_expected_distinct(200, 2000);
  double sigma = std::sqrt(oracles::occupancy_variance_distinct(200, 2000));
  CHECK(std::abs(static_cast<double>(agents.size()) - expected) <=
        3.0 * sigma + 1.0);

  LabelQualityReport report =
      quality_report(derive_weak_labels(service_records), service_records);
  CHECK(report.split_rate > 0.99);
  CHECK(report.purity == 1.0);
}

TEST_CASE("speaker factors are cached across sessions") {
  SynthConfig cfg;
  cfg.dim = 10;
  cfg.rank = 5;
  cfg.n_sessions = 2;
  cfg.customer_pool = 1;
  cfg.service_pool = 1;
  cfg.utts_per_channel = 200.0;
  cfg.seed = 61;
  SynthCorpus corpus = generate_corpus(cfg);

  // Same underlying speaker in both sessions: the two session means must
  // agree up to residual noise, which shrinks like 1/sqrt(n).
  std::map<std::string, std::pair<Eigen::VectorXd, int>> sums;
  for (size_t i = 0; i < corpus.records.size(); ++i) {
    const auto &r = corpus.records[i];
    if (r.local_speaker_id != "cust") continue;
    auto &entry = sums.try_emplace(r.session_id, Eigen::VectorXd::Zero(10), 0)
                      .first->second;
    entry.first += corpus.vectors[i].values;
    entry.second += 1;
  }
  REQUIRE(sums.size() == 2);
  std::vector<Eigen::VectorXd> means;
  for (auto &[session, entry] : sums)
    means.push_back(entry.first / entry.second);
  CHECK((means[0] - means[1]).norm() < 1.0);
  // And both lie near the speaker's line u + V y: far from the origin is
  // unlikely for pure noise of norm ~ sqrt(D/n).
  CHECK(means[0].norm() > 0.0);
}

TEST_CASE("condition shift moves every vector by the same offset") {
  PldaModel truth = sample_truth_model(6, 3, 1.0, 1.0, 71);
  Eigen::VectorXd shift = sample_condition_shift(truth, 2.0, 72);
  CHECK(shift.norm() == Approx(2.0).margin(1e-12));
  // Orthogonal to the speaker subspace.
  CHECK((truth.speaker_subspace.transpose() * shift).cwiseAbs().maxCoeff() <
        1e-10);

  SynthConfig cfg;
  cfg.dim = 6;
  cfg.rank = 3;
  cfg.n_sessions = 10;
  cfg.customer_pool = 5;
  cfg.service_pool = 5;
  cfg.seed = 73;
  SynthCorpus plain = generate_corpus_with_truth(cfg, truth);
  cfg.condition_shift = shift;
  SynthCorpus shifted = generate_corpus_with_truth(cfg, truth);
  REQUIRE(plain.vectors.size() == shifted.vectors.size());
  for (size_t i = 0; i < plain.vectors.size(); ++i)
    CHECK((shifted.vectors[i].values - plain.vectors[i].values - shift)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("eval split builds the full cross product") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 2;
  cfg.n_sessions = 1;
  cfg.customer_pool = 1;
  cfg.service_pool = 1;
  cfg.seed = 81;
  SynthCorpus corpus = generate_corpus(cfg);

  SECTION("two speakers, one enroll, one test") {
    EvalSplit split = make_eval_split(corpus, 2, 1, 1);
    CHECK(split.trials.trials.size() == 4);
    CHECK(split.n_target == 2);
    CHECK(split.n_nontarget == 2);
  }
  SECTION("derived combinatorial counts") {
    EvalSplit split = make_eval_split(corpus, 50, 1, 6);
    CHECK(split.n_target == 300);
    CHECK(split.n_nontarget == 50 * 6 * 49);
    CHECK(split.trials.trials.size() == 300 + 50 * 6 * 49);
  }
  SECTION("pairwise composition at evaluation scale") {
    EvalSplit split = make_eval_split(corpus, 1236, 1, 1);
    CHECK(split.n_target == 1236);
    CHECK(split.n_nontarget == 1236UL * 1235UL);
  }
  SECTION("eval ids are disjoint from training speakers") {
    EvalSplit split = make_eval_split(corpus, 5, 1, 2);
    std::set<std::string> training;
    for (const auto &r : corpus.records) training.insert(*r.true_speaker_id);
    for (const auto &v : split.vectors)
      CHECK_FALSE(training.contains(v.utt_id.substr(0, v.utt_id.find('-'))));
  }
  SECTION("too few speakers") {
    CHECK_THROWS_AS(make_eval_split(corpus, 1, 1, 1), PreconditionError);
  }
}

TEST_CASE("synth config validation") {
  SynthConfig cfg;
  cfg.dim = 4;
  cfg.rank = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.rank = 2;
  cfg.n_sessions = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n_sessions = 1;
  cfg.condition_shift = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(cfg.validate(), DimensionError);
}
