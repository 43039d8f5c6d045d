// pldakit/eval.hpp

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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "pldakit/errors.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

struct DetPoint {
  double false_alarm_rate = 0.0;
  double miss_rate = 0.0;
};

struct EvalReport {
  double eer = 0.0;
  double eer_threshold = 0.0;
  size_t n_target = 0;
  size_t n_nontarget = 0;
  std::vector<DetPoint> det_points;  // one per distinct threshold, ascending
};

/* EER convention: sweep the accept-if-score>=t rule over the distinct scores
   as thresholds.  At each threshold the operating point is
   (false_alarm_rate, miss_rate); the first point is always (1, 0) and an
   accept-nothing endpoint (0, 1) closes the sweep.  The two error-rate step
   functions are interpolated linearly between adjacent operating points and
   the EER is their crossing.  Ties in score are grouped at one threshold,
   so the result depends only on the order structure of the scores. */
inline EvalReport compute_eer(const ScoreSet &scores) {
  std::vector<double> all;
  size_t n_target = 0, n_nontarget = 0;
  for (const ScoreEntry &e : scores.entries) {
    if (!std::isfinite(e.score))
      throw PreconditionError("eer: non-finite score for trial " +
                              e.enroll_utt + " " + e.test_utt);
    if (e.is_target)
      ++n_target;
    else
      ++n_nontarget;
  }
  if (n_target == 0 || n_nontarget == 0)
    throw PreconditionError("eer: need at least one target and one nontarget "
                            "trial, have " +
                            std::to_string(n_target) + " / " +
                            std::to_string(n_nontarget));

  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(scores.entries.size());
  for (const ScoreEntry &e : scores.entries)
    sorted.emplace_back(e.score, e.is_target);
  std::sort(sorted.begin(), sorted.end());

  EvalReport report;
  report.n_target = n_target;
  report.n_nontarget = n_nontarget;

  // Operating points at each distinct threshold, ascending.
  std::vector<double> thresholds;
  std::vector<double> fars, misses;
  size_t targets_below = 0, nontargets_below = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    double t = sorted[i].first;
    thresholds.push_back(t);
    fars.push_back(static_cast<double>(n_nontarget - nontargets_below) /
                   static_cast<double>(n_nontarget));
    misses.push_back(static_cast<double>(targets_below) /
                     static_cast<double>(n_target));
    while (i < sorted.size() && sorted[i].first == t) {
      if (sorted[i].second)
        ++targets_below;
      else
        ++nontargets_below;
      ++i;
    }
  }
  report.det_points.reserve(thresholds.size());
  for (size_t k = 0; k < thresholds.size(); ++k)
    report.det_points.push_back(DetPoint{fars[k], misses[k]});

  // Accept-nothing endpoint; its nominal threshold is the maximum score.
  thresholds.push_back(thresholds.back());
  fars.push_back(0.0);
  misses.push_back(1.0);

  for (size_t k = 0; k + 1 < thresholds.size(); ++k) {
    double d0 = fars[k] - misses[k];
    double d1 = fars[k + 1] - misses[k + 1];
    if (d0 == 0.0) {
      report.eer = fars[k];
      report.eer_threshold = thresholds[k];
      return report;
    }
    if (d0 > 0.0 && d1 < 0.0) {
      double alpha = d0 / (d0 - d1);
      report.eer = fars[k] + alpha * (fars[k + 1] - fars[k]);
      report.eer_threshold =
          thresholds[k] + alpha * (thresholds[k + 1] - thresholds[k]);
      return report;
    }
  }
  // The sweep starts at difference +1 and ends at -1, so a crossing exists;
  // the last point can only be an exact zero.
  report.eer = fars.back();
  report.eer_threshold = thresholds.back();
  return report;
}

/// One named result row, EER rendered in percent with two decimals plus a
/// machine-readable CSV with full precision.
struct ExperimentSummary {
  struct Row {
    std::string name;
    double eer = 0.0;
  };
  std::vector<Row> rows;

  std::string text() const {
    size_t width = 4;
    for (const Row &r : rows) width = std::max(width, r.name.size());
    std::string out;
    for (const Row &r : rows) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%-*s %6.2f\n", static_cast<int>(width),
                    r.name.c_str(), 100.0 * r.eer);
      out += buf;
    }
    return out;
  }

  std::string csv() const {
    std::string out = "name,eer,eer_percent\n";
    for (const Row &r : rows) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.2f\n", r.name.c_str(), r.eer,
                    100.0 * r.eer);
      out += buf;
    }
    return out;
  }
};

inline ExperimentSummary summarize_experiment(
    const std::vector<std::pair<std::string, EvalReport>> &reports) {
  if (reports.empty())
    throw PreconditionError("summarize: no reports given");
  ExperimentSummary summary;
  for (const auto &[name, report] : reports)
    summary.rows.push_back(ExperimentSummary::Row{name, report.eer});
  return summary;
}

}  // namespace pldakit
