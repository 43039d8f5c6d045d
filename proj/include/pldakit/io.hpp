// pldakit/io.hpp

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

// File formats, all plain UTF-8 text:
//   i-vectors:  one utterance per line, `utt_id v1 .. vD`, whitespace-split
//   metadata:   CSV with header utt_id,session_id,local_speaker_id,
//               true_speaker_id (last column may be empty)
//   labels:     `utt_id<TAB>label`
//   trials:     `enroll_utt test_utt target|nontarget`
//   scores:     `enroll_utt test_utt score` with an optional trailing
//               target|nontarget flag
//   model:      one JSON document: dim, rank, u, V (row-major), sigma
//               (row-major), optional preprocess {mean, whitener}
// Reals are written with 17 significant digits so write/read round trips are
// exact; writers are deterministic and atomic (temp file + rename).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pldakit/detail/util.hpp"
#include "pldakit/errors.hpp"
#include "pldakit/plda.hpp"
#include "pldakit/preprocess.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

namespace detail {

// Lines of a text file with 1-based numbering; empty lines are skipped,
// trailing carriage returns stripped.
inline std::vector<std::pair<size_t, std::string>> numbered_lines(
    const std::filesystem::path &path) {
  std::string content = read_text_file(path);
  std::vector<std::pair<size_t, std::string>> lines;
  size_t line_no = 0, start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.emplace_back(line_no, std::move(line));
    if (end == content.size()) break;
    start = end + 1;
  }
  return lines;
}

}  // namespace detail

inline std::vector<IVector> load_ivectors(const std::filesystem::path &path) {
  std::vector<IVector> out;
  std::unordered_set<std::string> seen;
  Eigen::Index dim = -1;
  for (const auto &[line_no, line] : detail::numbered_lines(path)) {
    std::string context = path.string() + ":" + std::to_string(line_no);
    auto fields = detail::split_whitespace(line);
    if (fields.size() < 2)
      throw FormatError(context + ": expected `utt_id v1 .. vD`, got " +
                        std::to_string(fields.size()) + " fields");
    IVector vec;
    vec.utt_id = std::string(fields[0]);
    vec.values.resize(static_cast<Eigen::Index>(fields.size()) - 1);
    for (size_t i = 1; i < fields.size(); ++i)
      vec.values(static_cast<Eigen::Index>(i) - 1) =
          detail::parse_real(fields[i], context);
    if (dim < 0) {
      dim = vec.values.size();
    } else if (vec.values.size() != dim) {
      throw FormatError(context + ": utterance '" + vec.utt_id + "' has " +
                        std::to_string(vec.values.size()) +
                        " values, expected " + std::to_string(dim));
    }
    if (!seen.insert(vec.utt_id).second)
      throw DuplicateKeyError(context + ": duplicate utt_id '" + vec.utt_id +
                              "'");
    out.push_back(std::move(vec));
  }
  return out;
}

inline void save_ivectors(const std::vector<IVector> &vectors,
                          const std::filesystem::path &path) {
  check_consistent_dims(vectors);
  std::string out;
  out.reserve(vectors.size() * 32);
  for (const IVector &v : vectors) {
    if (!v.values.allFinite())
      throw PreconditionError("save ivectors: non-finite values in '" +
                              v.utt_id + "'");
    out += v.utt_id;
    for (Eigen::Index i = 0; i < v.values.size(); ++i) {
      out += ' ';
      out += detail::format_real(v.values(i));
    }
    out += '\n';
  }
  detail::write_text_file_atomic(path, out);
}

constexpr const char *kMetadataHeader =
    "utt_id,session_id,local_speaker_id,true_speaker_id";

inline std::vector<UtteranceRecord> load_metadata(
    const std::filesystem::path &path) {
  auto lines = detail::numbered_lines(path);
  if (lines.empty() || lines.front().second != kMetadataHeader)
    throw FormatError(path.string() + ": first line must be the header `" +
                      std::string(kMetadataHeader) + "`");
  std::vector<UtteranceRecord> out;
  std::unordered_set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto &[line_no, line] = lines[i];
    std::string context = path.string() + ":" + std::to_string(line_no);
    auto fields = detail::split_char(line, ',');
    if (fields.size() != 4)
      throw FormatError(context + ": expected 4 comma-separated fields, got " +
                        std::to_string(fields.size()));
    UtteranceRecord rec;
    rec.utt_id = fields[0];
    rec.session_id = fields[1];
    rec.local_speaker_id = fields[2];
    if (!fields[3].empty()) rec.true_speaker_id = fields[3];
    if (rec.utt_id.empty() || rec.session_id.empty() ||
        rec.local_speaker_id.empty())
      throw FormatError(context + ": utt_id, session_id and local_speaker_id "
                        "must be non-empty");
    // '/' is reserved as the weak-label separator.
    if (rec.session_id.find('/') != std::string::npos ||
        rec.local_speaker_id.find('/') != std::string::npos)
      throw FormatError(context + ": '/' is not allowed in session_id or "
                        "local_speaker_id ('" + rec.session_id + "', '" +
                        rec.local_speaker_id + "')");
    if (!seen.insert(rec.utt_id).second)
      throw DuplicateKeyError(context + ": duplicate utt_id '" + rec.utt_id +
                              "'");
    out.push_back(std::move(rec));
  }
  return out;
}

inline void save_metadata(const std::vector<UtteranceRecord> &records,
                          const std::filesystem::path &path) {
  std::string out = kMetadataHeader;
  out += '\n';
  for (const UtteranceRecord &r : records) {
    out += r.utt_id;
    out += ',';
    out += r.session_id;
    out += ',';
    out += r.local_speaker_id;
    out += ',';
    if (r.true_speaker_id) out += *r.true_speaker_id;
    out += '\n';
  }
  detail::write_text_file_atomic(path, out);
}

inline std::vector<std::pair<std::string, std::string>> load_labels(
    const std::filesystem::path &path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::unordered_set<std::string> seen;
  for (const auto &[line_no, line] : detail::numbered_lines(path)) {
    std::string context = path.string() + ":" + std::to_string(line_no);
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw FormatError(context + ": expected `utt_id<TAB>label`");
    std::string utt = line.substr(0, tab);
    std::string label = line.substr(tab + 1);
    if (!seen.insert(utt).second)
      throw DuplicateKeyError(context + ": duplicate utt_id '" + utt + "'");
    out.emplace_back(std::move(utt), std::move(label));
  }
  return out;
}

inline void save_labels(
    const std::vector<std::pair<std::string, std::string>> &labels,
    const std::filesystem::path &path) {
  std::string out;
  for (const auto &[utt, label] : labels) {
    out += utt;
    out += '\t';
    out += label;
    out += '\n';
  }
  detail::write_text_file_atomic(path, out);
}

inline TrialList load_trials(const std::filesystem::path &path) {
  TrialList out;
  std::unordered_set<std::string> seen;
  for (const auto &[line_no, line] : detail::numbered_lines(path)) {
    std::string context = path.string() + ":" + std::to_string(line_no);
    auto fields = detail::split_whitespace(line);
    if (fields.size() != 3)
      throw FormatError(context +
                        ": expected `enroll_utt test_utt target|nontarget`");
    Trial t;
    t.enroll_utt = std::string(fields[0]);
    t.test_utt = std::string(fields[1]);
    if (fields[2] == "target")
      t.is_target = true;
    else if (fields[2] == "nontarget")
      t.is_target = false;
    else
      throw FormatError(context + ": third field must be target|nontarget, "
                        "got '" + std::string(fields[2]) + "'");
    std::string key = t.enroll_utt + '\x1f' + t.test_utt;
    if (!seen.insert(key).second)
      throw DuplicateKeyError(context + ": duplicate trial pair (" +
                              t.enroll_utt + ", " + t.test_utt + ")");
    out.trials.push_back(std::move(t));
  }
  return out;
}

inline void save_trials(const TrialList &trials,
                        const std::filesystem::path &path) {
  std::string out;
  for (const Trial &t : trials.trials) {
    out += t.enroll_utt;
    out += ' ';
    out += t.test_utt;
    out += t.is_target ? " target\n" : " nontarget\n";
  }
  detail::write_text_file_atomic(path, out);
}

struct LoadedScores {
  std::vector<ScoreEntry> entries;
  bool has_flags = false;  // true when every line carried a target flag
};

inline LoadedScores load_scores(const std::filesystem::path &path) {
  LoadedScores out;
  bool first = true;
  for (const auto &[line_no, line] : detail::numbered_lines(path)) {
    std::string context = path.string() + ":" + std::to_string(line_no);
    auto fields = detail::split_whitespace(line);
    if (fields.size() != 3 && fields.size() != 4)
      throw FormatError(context +
                        ": expected `enroll_utt test_utt score [flag]`");
    bool flagged = fields.size() == 4;
    if (first) {
      out.has_flags = flagged;
      first = false;
    } else if (flagged != out.has_flags) {
      throw FormatError(context + ": inconsistent column count; every line "
                        "must either carry a target flag or none");
    }
    ScoreEntry e;
    e.enroll_utt = std::string(fields[0]);
    e.test_utt = std::string(fields[1]);
    e.score = detail::parse_real(fields[2], context);
    if (flagged) {
      if (fields[3] == "target")
        e.is_target = true;
      else if (fields[3] == "nontarget")
        e.is_target = false;
      else
        throw FormatError(context + ": flag must be target|nontarget, got '" +
                          std::string(fields[3]) + "'");
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline void save_scores(const ScoreSet &scores,
                        const std::filesystem::path &path,
                        bool with_flags = false) {
  std::string out;
  out.reserve(scores.entries.size() * 48);
  for (const ScoreEntry &e : scores.entries) {
    out += e.enroll_utt;
    out += ' ';
    out += e.test_utt;
    out += ' ';
    out += detail::format_real(e.score);
    if (with_flags) out += e.is_target ? " target" : " nontarget";
    out += '\n';
  }
  detail::write_text_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Model file.

struct SavedModel {
  PldaModel model;
  std::optional<Preprocessor> preprocess;
};

namespace detail {

inline nlohmann::ordered_json json_from_vector(const Eigen::VectorXd &v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline nlohmann::ordered_json json_from_matrix(const Eigen::MatrixXd &m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json &j,
                                        const std::string &field) {
  if (!j.is_array())
    throw FormatError("model file: field '" + field + "' must be an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw FormatError("model file: field '" + field +
                        "' contains a non-number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  if (!v.allFinite())
    throw FormatError("model file: field '" + field +
                      "' contains a non-finite value");
  return v;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json &j,
                                        const std::string &field) {
  if (!j.is_array() || j.empty())
    throw FormatError("model file: field '" + field +
                      "' must be a non-empty array of rows");
  size_t cols = 0;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array())
      throw FormatError("model file: field '" + field + "' row " +
                        std::to_string(i) + " is not an array");
    if (i == 0)
      cols = j[i].size();
    else if (j[i].size() != cols)
      throw FormatError("model file: field '" + field + "' row " +
                        std::to_string(i) + " has " +
                        std::to_string(j[i].size()) + " entries, expected " +
                        std::to_string(cols));
  }
  Eigen::MatrixXd m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i)
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw FormatError("model file: field '" + field +
                          "' contains a non-number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          j[i][k].get<double>();
    }
  if (!m.allFinite())
    throw FormatError("model file: field '" + field +
                      "' contains a non-finite value");
  return m;
}

}  // namespace detail

inline void save_model(const PldaModel &model,
                       const std::optional<Preprocessor> &preprocess,
                       const std::filesystem::path &path) {
  model.validate();
  nlohmann::ordered_json doc;
  doc["dim"] = model.dim();
  doc["rank"] = model.rank();
  doc["u"] = detail::json_from_vector(model.mean);
  doc["V"] = detail::json_from_matrix(model.speaker_subspace);
  doc["sigma"] = detail::json_from_matrix(model.residual_cov);
  if (preprocess) {
    preprocess->validate();
    if (preprocess->dim() != model.dim())
      throw DimensionError("save model: preprocess dimension " +
                           std::to_string(preprocess->dim()) +
                           " does not match model dimension " +
                           std::to_string(model.dim()));
    nlohmann::ordered_json prep;
    prep["mean"] = detail::json_from_vector(preprocess->mean);
    if (preprocess->whitener)
      prep["whitener"] = detail::json_from_matrix(*preprocess->whitener);
    doc["preprocess"] = std::move(prep);
  }
  detail::write_text_file_atomic(path, doc.dump(2) + "\n");
}

inline void save_model(const PldaModel &model,
                       const std::filesystem::path &path) {
  save_model(model, std::nullopt, path);
}

inline SavedModel load_model(const std::filesystem::path &path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(detail::read_text_file(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
  for (const char *field : {"dim", "rank", "u", "V", "sigma"})
    if (!doc.contains(field))
      throw FormatError(path.string() + ": missing field '" +
                        std::string(field) + "'");

  SavedModel out;
  out.model.mean = detail::vector_from_json(doc["u"], "u");
  out.model.speaker_subspace = detail::matrix_from_json(doc["V"], "V");
  out.model.residual_cov = detail::matrix_from_json(doc["sigma"], "sigma");

  auto dim = doc["dim"].get<Eigen::Index>();
  auto rank = doc["rank"].get<Eigen::Index>();
  if (out.model.mean.size() != dim)
    throw FormatError(path.string() + ": u has length " +
                      std::to_string(out.model.mean.size()) +
                      " but dim = " + std::to_string(dim));
  if (out.model.speaker_subspace.rows() != dim ||
      out.model.speaker_subspace.cols() != rank)
    throw FormatError(path.string() + ": V is " +
                      std::to_string(out.model.speaker_subspace.rows()) + "x" +
                      std::to_string(out.model.speaker_subspace.cols()) +
                      " but dim = " + std::to_string(dim) +
                      ", rank = " + std::to_string(rank));
  if (out.model.residual_cov.rows() != dim ||
      out.model.residual_cov.cols() != dim)
    throw FormatError(path.string() + ": sigma is " +
                      std::to_string(out.model.residual_cov.rows()) + "x" +
                      std::to_string(out.model.residual_cov.cols()) +
                      " but dim = " + std::to_string(dim));
  try {
    out.model.validate();
  } catch (const Error &e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  if (doc.contains("preprocess")) {
    const auto &prep = doc["preprocess"];
    if (!prep.contains("mean"))
      throw FormatError(path.string() + ": preprocess block missing 'mean'");
    Preprocessor p;
    p.mean = detail::vector_from_json(prep["mean"], "preprocess.mean");
    if (prep.contains("whitener"))
      p.whitener =
          detail::matrix_from_json(prep["whitener"], "preprocess.whitener");
    if (p.mean.size() != dim)
      throw FormatError(path.string() + ": preprocess.mean has length " +
                        std::to_string(p.mean.size()) + " but dim = " +
                        std::to_string(dim));
    try {
      p.validate();
    } catch (const Error &e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    out.preprocess = std::move(p);
  }
  return out;
}

}  // namespace pldakit
