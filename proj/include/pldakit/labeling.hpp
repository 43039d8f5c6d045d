// pldakit/labeling.hpp

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

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pldakit/errors.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

/// Weak speaker labels produced from session metadata alone: two utterances
/// share a label iff they share both session_id and local_speaker_id, so no
/// label ever spans two sessions.  The same physical speaker appearing in
/// several sessions is deliberately split into several labels.
struct WeakLabeling {
  std::map<std::string, std::string> labels;  // utt_id -> session/local

  size_t n_weak_speakers() const {
    std::set<std::string> distinct;
    for (const auto &[utt, label] : labels) distinct.insert(label);
    return distinct.size();
  }
};

/// Label-quality statistics against ground truth.
///   split_rate: fraction of true speakers whose utterances received two or
///               more weak labels (the method's characteristic error).
///   purity:     fraction of weak labels whose utterances all share one true
///               speaker; 1.0 whenever within-session separation is perfect.
struct LabelQualityReport {
  size_t n_weak_speakers = 0;
  size_t n_true_speakers = 0;
  double split_rate = 0.0;
  double purity = 0.0;
};

inline WeakLabeling derive_weak_labels(
    const std::vector<UtteranceRecord> &records) {
  WeakLabeling out;
  for (const UtteranceRecord &r : records)
    out.labels[r.utt_id] = r.session_id + "/" + r.local_speaker_id;
  return out;
}

inline LabelQualityReport quality_report(
    const WeakLabeling &weak, const std::vector<UtteranceRecord> &records) {
  std::unordered_map<std::string, std::string> truth;
  for (const UtteranceRecord &r : records)
    if (r.true_speaker_id) truth[r.utt_id] = *r.true_speaker_id;

  std::vector<std::string> missing;
  for (const auto &[utt, label] : weak.labels)
    if (!truth.contains(utt)) missing.push_back(utt);
  if (!missing.empty()) {
    std::string joined;
    size_t shown = std::min<size_t>(missing.size(), 20);
    for (size_t i = 0; i < shown; ++i) {
      if (i) joined += ", ";
      joined += missing[i];
    }
    if (missing.size() > shown)
      joined += ", ... (" + std::to_string(missing.size()) + " total)";
    throw PreconditionError("quality report: no true speaker for: " + joined);
  }

  std::map<std::string, std::set<std::string>> weak_to_true;
  std::map<std::string, std::set<std::string>> true_to_weak;
  for (const auto &[utt, label] : weak.labels) {
    const std::string &t = truth.at(utt);
    weak_to_true[label].insert(t);
    true_to_weak[t].insert(label);
  }

  LabelQualityReport report;
  report.n_weak_speakers = weak_to_true.size();
  report.n_true_speakers = true_to_weak.size();
  size_t pure = 0;
  for (const auto &[label, trues] : weak_to_true)
    if (trues.size() == 1) ++pure;
  size_t split = 0;
  for (const auto &[t, labels] : true_to_weak)
    if (labels.size() >= 2) ++split;
  report.purity = weak_to_true.empty()
                      ? 0.0
                      : static_cast<double>(pure) / weak_to_true.size();
  report.split_rate = true_to_weak.empty()
                          ? 0.0
                          : static_cast<double>(split) / true_to_weak.size();
  return report;
}

/// Concatenates a strongly and a weakly labelled dataset.  Label namespaces
/// are kept disjoint with "strong/" and "weak/" prefixes so a strong label is
/// never merged with a weak one.  The corpora must be disjoint in utt_id.
inline LabeledDataset pool_datasets(const LabeledDataset &strong,
                                    const LabeledDataset &weak) {
  if (!strong.vectors.empty() && !weak.vectors.empty() &&
      strong.dim != weak.dim)
    throw DimensionError("pool: dimension mismatch " +
                         std::to_string(strong.dim) + " vs " +
                         std::to_string(weak.dim));
  std::vector<IVector> vectors;
  vectors.reserve(strong.vectors.size() + weak.vectors.size());
  std::unordered_map<std::string, std::string> labels;
  labels.reserve(strong.labels.size() + weak.labels.size());

  for (const IVector &v : strong.vectors) {
    vectors.push_back(v);
    labels[v.utt_id] = "strong/" + strong.labels.at(v.utt_id);
  }
  for (const IVector &v : weak.vectors) {
    if (labels.contains(v.utt_id))
      throw DuplicateKeyError("pool: utterance '" + v.utt_id +
                              "' appears in both datasets");
    vectors.push_back(v);
    labels[v.utt_id] = "weak/" + weak.labels.at(v.utt_id);
  }
  LabeledDataset out;
  out.dim = strong.vectors.empty() ? weak.dim : strong.dim;
  out.vectors = std::move(vectors);
  out.labels = std::move(labels);
  return out;
}

}  // namespace pldakit
