// tests/test_eval.cpp

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

#include <algorithm>
#include <cmath>
#include <random>

#include "pldakit/eval.hpp"
#include "support/oracles.hpp"

using namespace pldakit;
using Catch::Approx;

namespace {

ScoreSet make_scores(const std::vector<double> &targets,
                     const std::vector<double> &nontargets) {
  ScoreSet s;
  int i = 0;
  for (double t : targets)
    s.entries.push_back(
        ScoreEntry{"e" + std::to_string(i++), "t", t, true});
  for (double n : nontargets)
    s.entries.push_back(
        ScoreEntry{"e" + std::to_string(i++), "t", n, false});
  return s;
}

}  // namespace

TEST_CASE("EER on separable and anti-separable scores") {
  CHECK(compute_eer(make_scores({2, 3}, {0, 1})).eer == 0.0);
  CHECK(compute_eer(make_scores({0, 1}, {2, 3})).eer == 1.0);
}

TEST_CASE("EER on the three-vs-three fixture is exactly one third") {
  ScoreSet s = make_scores({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1});
  EvalReport report = compute_eer(s);
  CHECK(report.eer == 1.0 / 3.0);
  CHECK(report.eer_threshold == 0.7);

  // Sweep oracle: at the reported threshold both error rates are 1/3.
  auto rates = oracles::count_errors({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1},
                                     report.eer_threshold);
  CHECK(rates.false_alarm_rate == 1.0 / 3.0);
  CHECK(rates.miss_rate == 1.0 / 3.0);
}

TEST_CASE("EER is invariant under monotone transforms of the scores") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> targets, nontargets;
  for (int i = 0; i < 300; ++i) targets.push_back(gauss(rng) + 0.8);
  for (int i = 0; i < 700; ++i) nontargets.push_back(gauss(rng));
  double base = compute_eer(make_scores(targets, nontargets)).eer;

  auto transform = [&](auto f) {
    std::vector<double> t2, n2;
    for (double v : targets) t2.push_back(f(v));
    for (double v : nontargets) n2.push_back(f(v));
    return compute_eer(make_scores(t2, n2)).eer;
  };
  CHECK(std::abs(transform([](double v) { return 3.0 * v - 7.0; }) - base) <
        1e-12);
  CHECK(std::abs(transform([](double v) { return std::exp(v); }) - base) <
        1e-12);
  CHECK(std::abs(transform([](double v) { return v * v * v + 2.0 * v; }) -
                 base) < 1e-12);
}

TEST_CASE("EER is invariant under permutation and duplication") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> targets, nontargets;
  for (int i = 0; i < 80; ++i) targets.push_back(gauss(rng) + 1.0);
  for (int i = 0; i < 120; ++i) nontargets.push_back(gauss(rng));
  ScoreSet base = make_scores(targets, nontargets);
  EvalReport ref = compute_eer(base);

  ScoreSet shuffled = base;
  std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
  CHECK(compute_eer(shuffled).eer == ref.eer);
  CHECK(compute_eer(shuffled).eer_threshold == ref.eer_threshold);

  ScoreSet doubled = base;
  for (const auto &e : base.entries) doubled.entries.push_back(e);
  CHECK(compute_eer(doubled).eer == ref.eer);
}

TEST_CASE("all-identical scores give EER one half") {
  ScoreSet s = make_scores({0.5, 0.5, 0.5}, {0.5, 0.5});
  CHECK(compute_eer(s).eer == 0.5);
}

TEST_CASE("EER preconditions") {
  CHECK_THROWS_AS(compute_eer(make_scores({}, {1.0})), PreconditionError);
  CHECK_THROWS_AS(compute_eer(make_scores({1.0}, {})), PreconditionError);
  ScoreSet bad = make_scores({1.0}, {0.0});
  bad.entries[0].score = std::nan("");
  CHECK_THROWS_AS(compute_eer(bad), PreconditionError);
}

TEST_CASE("DET points are monotone in the threshold sweep") {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> targets, nontargets;
  for (int i = 0; i < 50; ++i) targets.push_back(gauss(rng) + 1.5);
  for (int i = 0; i < 90; ++i) nontargets.push_back(gauss(rng));
  EvalReport report = compute_eer(make_scores(targets, nontargets));
  REQUIRE_FALSE(report.det_points.empty());
  for (size_t i = 1; i < report.det_points.size(); ++i) {
    CHECK(report.det_points[i].false_alarm_rate <=
          report.det_points[i - 1].false_alarm_rate);
    CHECK(report.det_points[i].miss_rate >=
          report.det_points[i - 1].miss_rate);
  }
  CHECK(report.n_target == 50);
  CHECK(report.n_nontarget == 90);
}

TEST_CASE("experiment summary formatting") {
  EvalReport cosine, strong;
  cosine.eer = 0.0288;
  strong.eer = 0.0225;
  ExperimentSummary summary =
      summarize_experiment({{"Cosine", cosine}, {"STRONG", strong}});
  std::string text = summary.text();
  CHECK(text.find("Cosine") != std::string::npos);
  CHECK(text.find("2.88") != std::string::npos);
  CHECK(text.find("STRONG") != std::string::npos);
  CHECK(text.find("2.25") != std::string::npos);
  // Rows keep their order.
  CHECK(text.find("Cosine") < text.find("STRONG"));

  std::string csv = summary.csv();
  CHECK(csv.find("name,eer,eer_percent") == 0);
  CHECK(csv.find("Cosine,") != std::string::npos);

  SECTION("single entry") {
    CHECK(summarize_experiment({{"only", cosine}}).rows.size() == 1);
  }
  SECTION("equal EERs are both rendered in order") {
    ExperimentSummary equal =
        summarize_experiment({{"b", cosine}, {"a", cosine}});
    REQUIRE(equal.rows.size() == 2);
    CHECK(equal.rows[0].name == "b");
    CHECK(equal.rows[1].name == "a");
  }
  SECTION("empty input is rejected") {
    CHECK_THROWS_AS(summarize_experiment({}), PreconditionError);
  }
}
