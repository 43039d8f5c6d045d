// tests/test_plda.cpp

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

#include <chrono>
#include <random>
#include <set>
#include <utility>

#include "pldakit/plda.hpp"
#include "pldakit/synth.hpp"
#include "support/oracles.hpp"

using namespace pldakit;
using Catch::Approx;

namespace {

LabeledDataset one_dim_fixture() {
  // Two speakers at -2 and +2, each with utterances offset by -1/+1.
  std::vector<IVector> vectors;
  std::unordered_map<std::string, std::string> labels;
  auto add = [&](const std::string &utt, double v, const std::string &spk) {
    Eigen::VectorXd x(1);
    x << v;
    vectors.push_back(IVector{utt, x});
    labels[utt] = spk;
  };
  add("a1", -3.0, "a");
  add("a2", -1.0, "a");
  add("b1", 1.0, "b");
  add("b2", 3.0, "b");
  return make_labeled_dataset(std::move(vectors), std::move(labels));
}

// Marginal log-likelihood of the 1-D fixture under (v2, s2), computed from
// the per-speaker joint Gaussians with generic dense routines.
double one_dim_loglik(double v2, double s2) {
  Eigen::MatrixXd joint(2, 2);
  joint << v2 + s2, v2, v2, v2 + s2;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd spk_a(2), spk_b(2);
  spk_a << -3.0, -1.0;
  spk_b << 1.0, 3.0;
  return oracles::gaussian_logpdf(spk_a, zero, joint) +
         oracles::gaussian_logpdf(spk_b, zero, joint);
}

}  // namespace

TEST_CASE("EM on the 1-D two-speaker fixture reaches the ML solution") {
  // Sufficient statistics give the maximizer in closed form: per speaker,
  // the sum coordinate has variance 2 v^2 + s^2 and the difference
  // coordinate s^2; the observed values are 8 and 2, so v^2 = 3, s^2 = 2
  // and the marginal variance equals the total sample variance, 5.
  TrainConfig cfg;
  cfg.rank = 1;
  cfg.iterations = 500;
  TrainResult result = train_em(one_dim_fixture(), cfg);

  double v2 = result.model.speaker_subspace(0, 0) *
              result.model.speaker_subspace(0, 0);
  double s2 = result.model.residual_cov(0, 0);
  CHECK(v2 == Approx(3.0).margin(1e-3));
  CHECK(s2 == Approx(2.0).margin(1e-3));
  CHECK(v2 + s2 == Approx(5.0).margin(1e-3));
  CHECK(result.model.mean(0) == Approx(0.0).margin(1e-12));

  // Grid oracle: direct maximization over (v2, s2) confirms the optimum.
  double best_ll = -1e300, best_v2 = 0, best_s2 = 0;
  for (double gv = 0.0; gv <= 8.0; gv += 0.05)
    for (double gs = 0.05; gs <= 8.0; gs += 0.05) {
      double ll = one_dim_loglik(gv, gs);
      if (ll > best_ll) {
        best_ll = ll;
        best_v2 = gv;
        best_s2 = gs;
      }
    }
  CHECK(best_v2 == Approx(3.0).margin(0.051));
  CHECK(best_s2 == Approx(2.0).margin(0.051));
  CHECK(result.log_likelihood.back() >= best_ll - 1e-6 * std::abs(best_ll));
}

TEST_CASE("EM log-likelihood is non-decreasing on model-generated data") {
  PldaModel truth = sample_truth_model(20, 10, 1.0, 1.0, 123);
  LabeledDataset data = oracles::sample_dataset(truth, 200, 5, 456);

  TrainConfig cfg;
  cfg.rank = 10;
  cfg.iterations = 20;
  auto start = std::chrono::steady_clock::now();
  TrainResult result = train_em(data, cfg);
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  REQUIRE(result.log_likelihood.size() == 20);
  for (size_t i = 1; i < result.log_likelihood.size(); ++i)
    CHECK(result.log_likelihood[i] >=
          result.log_likelihood[i - 1] -
              std::abs(result.log_likelihood[i - 1]) * 1e-6);
  CHECK(seconds < 10.0);
}

TEST_CASE("EM with a single utterance per speaker") {
  // The split between the two covariances is not identifiable with n_i = 1;
  // only their sum is constrained, and it must match the sample covariance.
  PldaModel truth = sample_truth_model(8, 4, 1.0, 1.0, 9);
  LabeledDataset data = oracles::sample_dataset(truth, 400, 1, 10);

  TrainConfig cfg;
  cfg.rank = 4;
  cfg.iterations = 30;
  TrainResult result = train_em(data, cfg);

  Eigen::MatrixXd sample_cov = Eigen::MatrixXd::Zero(8, 8);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
  for (const auto &v : data.vectors) mean += v.values;
  mean /= static_cast<double>(data.vectors.size());
  for (const auto &v : data.vectors) {
    Eigen::VectorXd c = v.values - mean;
    sample_cov += c * c.transpose();
  }
  sample_cov /= static_cast<double>(data.vectors.size());

  Eigen::MatrixXd marginal = result.model.total_cov();
  CHECK((marginal - sample_cov).norm() / sample_cov.norm() < 0.05);
}

TEST_CASE("train_em validates its configuration") {
  LabeledDataset data = one_dim_fixture();
  TrainConfig cfg;
  cfg.rank = 2;  // > dimension 1
  CHECK_THROWS_AS(train_em(data, cfg), ConfigError);

  cfg.rank = 1;
  cfg.iterations = 0;
  CHECK_THROWS_AS(train_em(data, cfg), ConfigError);

  cfg.iterations = 5;
  cfg.min_utts_per_speaker = 3;  // filters out both speakers
  CHECK_THROWS_AS(train_em(data, cfg), PreconditionError);
}

TEST_CASE("diagonal sigma mode zeroes off-diagonals") {
  PldaModel truth = sample_truth_model(6, 3, 1.0, 1.0, 21);
  LabeledDataset data = oracles::sample_dataset(truth, 50, 4, 22);
  TrainConfig cfg;
  cfg.rank = 3;
  cfg.iterations = 5;
  cfg.sigma_mode = SigmaMode::kDiagonal;
  TrainResult result = train_em(data, cfg);
  Eigen::MatrixXd off = result.model.residual_cov;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  for (size_t i = 1; i < result.log_likelihood.size(); ++i)
    CHECK(result.log_likelihood[i] >=
          result.log_likelihood[i - 1] -
              std::abs(result.log_likelihood[i - 1]) * 1e-6);
}

TEST_CASE("parallel E-step matches the sequential result") {
  PldaModel truth = sample_truth_model(10, 5, 1.0, 1.0, 33);
  LabeledDataset data = oracles::sample_dataset(truth, 120, 3, 34);
  TrainConfig cfg;
  cfg.rank = 5;
  cfg.iterations = 8;
  TrainResult sequential = train_em(data, cfg, 1);
  TrainResult parallel = train_em(data, cfg, 4);
  CHECK((sequential.model.speaker_subspace - parallel.model.speaker_subspace)
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  CHECK((sequential.model.residual_cov - parallel.model.residual_cov)
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  for (size_t i = 0; i < sequential.log_likelihood.size(); ++i)
    CHECK(sequential.log_likelihood[i] ==
          Approx(parallel.log_likelihood[i]).epsilon(1e-10));
}

TEST_CASE("speaker posterior precision is symmetric positive definite") {
  std::mt19937_64 rng(55);
  PldaModel model = oracles::random_model(rng, 6, 3);
  std::vector<Eigen::VectorXd> utts;
  for (int i = 0; i < 4; ++i) utts.push_back(oracles::random_vector(rng, 6));
  SpeakerPosterior post = compute_speaker_posterior(model, utts);
  CHECK(post.count == 4);
  CHECK((post.precision - post.precision.transpose()).cwiseAbs().maxCoeff() <
        1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(post.precision);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("score_llr equals the brute-force joint-Gaussian oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim_draw(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    int d = dim_draw(rng);
    std::uniform_int_distribution<int> rank_draw(1, std::min(3, d));
    int k = rank_draw(rng);
    PldaModel model = oracles::random_model(rng, d, k);
    Eigen::VectorXd w1 = oracles::random_vector(rng, d) * 2.0 + model.mean;
    Eigen::VectorXd w2 = oracles::random_vector(rng, d) * 2.0 + model.mean;

    double got = score_llr(model, IVector{"e", w1}, IVector{"t", w2});
    double expected = oracles::llr_score(model, w1, w2);
    CHECK(got == Approx(expected).margin(1e-6));
  }
}

TEST_CASE("score_llr is symmetric") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    PldaModel model = oracles::random_model(rng, 4, 2);
    Eigen::VectorXd w1 = oracles::random_vector(rng, 4);
    Eigen::VectorXd w2 = oracles::random_vector(rng, 4);
    PldaScorer scorer(model);
    CHECK(scorer.score(w1, w2) == Approx(scorer.score(w2, w1)).margin(1e-8));
  }
}

TEST_CASE("zero subspace means both hypotheses coincide") {
  std::mt19937_64 rng(79);
  PldaModel model = oracles::random_model(rng, 5, 2);
  model.speaker_subspace.setZero();
  PldaScorer scorer(model);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w1 = oracles::random_vector(rng, 5) * 3.0;
    Eigen::VectorXd w2 = oracles::random_vector(rng, 5) * 3.0;
    CHECK(std::abs(scorer.score(w1, w2)) < 1e-10);
  }
}

TEST_CASE("score sign follows the speaker direction") {
  std::mt19937_64 rng(80);
  PldaModel model = oracles::random_model(rng, 4, 2);
  Eigen::VectorXd along = model.speaker_subspace.col(0) * 10.0;

  IVector same1{"a", model.mean + along}, same2{"b", model.mean + along};
  double same_score = score_llr(model, same1, same2);
  CHECK(same_score > 0.0);
  CHECK(same_score ==
        Approx(oracles::llr_score(model, same1.values, same2.values))
            .margin(1e-6));

  IVector opp{"c", model.mean - along};
  double opp_score = score_llr(model, same1, opp);
  CHECK(opp_score < 0.0);
  CHECK(opp_score ==
        Approx(oracles::llr_score(model, same1.values, opp.values))
            .margin(1e-6));
}

TEST_CASE("scores are translation invariant") {
  std::mt19937_64 rng(81);
  PldaModel model = oracles::random_model(rng, 5, 3);
  Eigen::VectorXd offset = oracles::random_vector(rng, 5) * 7.0;
  PldaModel shifted = model;
  shifted.mean += offset;
  PldaScorer scorer(model), shifted_scorer(shifted);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w1 = oracles::random_vector(rng, 5);
    Eigen::VectorXd w2 = oracles::random_vector(rng, 5);
    CHECK(scorer.score(w1, w2) ==
          Approx(shifted_scorer.score(w1 + offset, w2 + offset)).margin(1e-8));
  }
}

TEST_CASE("scores are rotation equivariant") {
  std::mt19937_64 rng(82);
  PldaModel model = oracles::random_model(rng, 5, 2);
  Eigen::MatrixXd raw(5, 5);
  for (int i = 0; i < 5; ++i) raw.col(i) = oracles::random_vector(rng, 5);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  Eigen::MatrixXd rot = qr.householderQ();

  PldaModel rotated;
  rotated.mean = rot * model.mean;
  rotated.speaker_subspace = rot * model.speaker_subspace;
  rotated.residual_cov = rot * model.residual_cov * rot.transpose();
  rotated.residual_cov =
      0.5 * (rotated.residual_cov + rotated.residual_cov.transpose());

  PldaScorer scorer(model), rotated_scorer(rotated);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w1 = oracles::random_vector(rng, 5);
    Eigen::VectorXd w2 = oracles::random_vector(rng, 5);
    CHECK(scorer.score(w1, w2) ==
          Approx(rotated_scorer.score(rot * w1, rot * w2)).margin(1e-6));
  }
}

TEST_CASE("batch scoring is consistent with single-pair scoring") {
  std::mt19937_64 rng(83);
  PldaModel model = oracles::random_model(rng, 6, 3);
  std::vector<IVector> vectors;
  for (int i = 0; i < 10; ++i)
    vectors.push_back(
        IVector{"u" + std::to_string(i), oracles::random_vector(rng, 6)});

  SECTION("single trial") {
    TrialList one;
    one.trials.push_back(Trial{"u0", "u1", true});
    ScoreSet scores = score_llr_batch(model, one, vectors);
    REQUIRE(scores.entries.size() == 1);
    CHECK(scores.entries[0].score ==
          Approx(score_llr(model, vectors[0], vectors[1])).margin(1e-10));
  }

  SECTION("permutation preserves values") {
    TrialList trials;
    for (int i = 0; i < 8; ++i)
      trials.trials.push_back(
          Trial{"u" + std::to_string(i), "u" + std::to_string(9 - i), false});
    TrialList reversed;
    for (auto it = trials.trials.rbegin(); it != trials.trials.rend(); ++it)
      reversed.trials.push_back(*it);
    ScoreSet forward = score_llr_batch(model, trials, vectors);
    ScoreSet backward = score_llr_batch(model, reversed, vectors);
    for (size_t i = 0; i < forward.entries.size(); ++i) {
      const auto &f = forward.entries[i];
      const auto &b = backward.entries[forward.entries.size() - 1 - i];
      CHECK(f.enroll_utt == b.enroll_utt);
      CHECK(f.score == b.score);
    }
  }

  SECTION("missing utterance is reported by name") {
    TrialList bad;
    bad.trials.push_back(Trial{"u0", "nope", false});
    REQUIRE_THROWS_MATCHES(score_llr_batch(model, bad, vectors),
                           PreconditionError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("nope")));
  }

  SECTION("multi-threaded batch matches single-threaded") {
    TrialList trials;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if (i != j)
          trials.trials.push_back(Trial{"u" + std::to_string(i),
                                        "u" + std::to_string(j), false});
    ScoreSet st = score_llr_batch(model, trials, vectors, 1);
    ScoreSet mt = score_llr_batch(model, trials, vectors, 4);
    for (size_t i = 0; i < st.entries.size(); ++i)
      CHECK(st.entries[i].score == mt.entries[i].score);
  }
}

TEST_CASE("batch scoring at working scale stays fast", "[performance]") {
  PldaModel model = sample_truth_model(400, 50, 1.0, 1.0, 4000);
  std::mt19937_64 rng(4001);
  std::vector<IVector> vectors;
  for (int i = 0; i < 200; ++i)
    vectors.push_back(
        IVector{"u" + std::to_string(i), oracles::random_vector(rng, 400)});
  std::uniform_int_distribution<int> pick(0, 199);
  TrialList trials;
  std::set<std::pair<int, int>> used;
  while (trials.trials.size() < 10000) {
    int a = pick(rng), b = pick(rng);
    if (a == b || !used.emplace(a, b).second) continue;
    trials.trials.push_back(
        Trial{"u" + std::to_string(a), "u" + std::to_string(b), false});
  }
  auto start = std::chrono::steady_clock::now();
  ScoreSet scores = score_llr_batch(model, trials, vectors);
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  REQUIRE(scores.entries.size() == 10000);
  CHECK(seconds < 5.0);
}

TEST_CASE("cosine scoring") {
  Eigen::VectorXd e1(2), e2(2), both(2), neg(2);
  e1 << 1, 0;
  e2 << 0, 1;
  both << 1, 1;
  neg << -1, -1;
  CHECK(score_cosine(e1, e1) == 1.0);
  CHECK(score_cosine(e1, e2) == 0.0);
  CHECK(score_cosine(both, neg) == Approx(-1.0).margin(1e-15));
  CHECK_THROWS_AS(score_cosine(Eigen::VectorXd::Zero(2), e1),
                  DegenerateVectorError);
  CHECK_THROWS_AS(score_cosine(e1, Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("scorer rejects dimension mismatches") {
  std::mt19937_64 rng(90);
  PldaModel model = oracles::random_model(rng, 4, 2);
  PldaScorer scorer(model);
  CHECK_THROWS_AS(scorer.score(Eigen::VectorXd::Zero(3),
                               Eigen::VectorXd::Zero(4)),
                  DimensionError);
}
