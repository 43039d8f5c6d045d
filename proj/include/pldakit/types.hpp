// pldakit/types.hpp

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

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pldakit/errors.hpp"

namespace pldakit {

// Norms below this indicate a degenerate (effectively zero) vector.
constexpr double kZeroNormThreshold = 1e-12;

/// One utterance embedding: an opaque id plus a fixed-dimension real vector.
struct IVector {
  std::string utt_id;
  Eigen::VectorXd values;
};

/// Metadata for one utterance. local_speaker_id is meaningful only within
/// its session; true_speaker_id is present only for human-labelled data.
struct UtteranceRecord {
  std::string utt_id;
  std::string session_id;
  std::string local_speaker_id;
  std::optional<std::string> true_speaker_id;
};

struct Trial {
  std::string enroll_utt;
  std::string test_utt;
  bool is_target = false;
};

struct TrialList {
  std::vector<Trial> trials;
};

struct ScoreEntry {
  std::string enroll_utt;
  std::string test_utt;
  double score = 0.0;
  bool is_target = false;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;
};

/// Training container: vectors plus a speaker label per utterance.
/// The label map and the vector list are a bijection over utt_ids.
struct LabeledDataset {
  std::vector<IVector> vectors;
  std::unordered_map<std::string, std::string> labels;  // utt_id -> speaker
  Eigen::Index dim = 0;
};

inline void check_consistent_dims(const std::vector<IVector> &vectors) {
  if (vectors.empty()) return;
  Eigen::Index d = vectors.front().values.size();
  for (const IVector &v : vectors) {
    if (v.values.size() != d)
      throw DimensionError("utterance '" + v.utt_id + "' has dimension " +
                           std::to_string(v.values.size()) + ", expected " +
                           std::to_string(d));
  }
}

/// Builds a LabeledDataset and validates the utt_id bijection between
/// vectors and labels.
inline LabeledDataset make_labeled_dataset(
    std::vector<IVector> vectors,
    std::unordered_map<std::string, std::string> labels) {
  check_consistent_dims(vectors);
  std::unordered_set<std::string> seen;
  for (const IVector &v : vectors) {
    if (!seen.insert(v.utt_id).second)
      throw DuplicateKeyError("duplicate utt_id '" + v.utt_id +
                              "' in dataset vectors");
    if (!labels.contains(v.utt_id))
      throw PreconditionError("utterance '" + v.utt_id + "' has no label");
  }
  for (const auto &[utt, label] : labels) {
    if (!seen.contains(utt))
      throw PreconditionError("label for unknown utterance '" + utt + "'");
  }
  LabeledDataset ds;
  ds.dim = vectors.empty() ? 0 : vectors.front().values.size();
  ds.vectors = std::move(vectors);
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace pldakit
