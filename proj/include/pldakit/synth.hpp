// pldakit/synth.hpp

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
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pldakit/detail/util.hpp"
#include "pldakit/errors.hpp"
#include "pldakit/plda.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

/// How session participants are drawn from a speaker pool.
///   kUniform:    uniformly with replacement (the default; cross-session
///                repeats follow the occupancy statistics of the pool size).
///   kRoundRobin: session s uses pool member s mod pool_size; used to build
///                development sets with an exact speaker count.
enum class PoolAssignment { kUniform, kRoundRobin };

struct SynthConfig {
  Eigen::Index dim = 50;
  Eigen::Index rank = 25;
  long n_sessions = 1;
  long customer_pool = 1;    // distinct customers available
  long service_pool = 1;     // distinct service agents available
  double utts_per_channel = 5.0;  // Poisson mean, floored at 1
  double speaker_scale = 1.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd condition_shift;  // empty = no shift; added to every vector
  bool random_spd_sigma = false;    // sample a non-isotropic residual cov
  PoolAssignment customer_assignment = PoolAssignment::kUniform;
  std::string pool_tag = "syn";     // namespaces speaker/utterance ids

  void validate() const {
    if (dim < 1) throw ConfigError("synth: dim must be >= 1");
    if (rank < 1 || rank > dim)
      throw ConfigError("synth: rank outside [1, dim]");
    if (n_sessions < 1) throw ConfigError("synth: n_sessions must be >= 1");
    if (customer_pool < 1 || service_pool < 1)
      throw ConfigError("synth: pool sizes must be >= 1");
    if (utts_per_channel <= 0.0)
      throw ConfigError("synth: utts_per_channel must be > 0");
    if (speaker_scale < 0.0) throw ConfigError("synth: speaker_scale < 0");
    if (noise_scale <= 0.0) throw ConfigError("synth: noise_scale must be > 0");
    if (condition_shift.size() != 0 && condition_shift.size() != dim)
      throw DimensionError("synth: condition_shift length " +
                           std::to_string(condition_shift.size()) +
                           " does not match dim " + std::to_string(dim));
  }
};

struct SynthCorpus {
  std::vector<IVector> vectors;
  std::vector<UtteranceRecord> records;  // true_speaker_id always present
  PldaModel truth_model;
  SynthConfig config;
};

struct EvalSplit {
  TrialList trials;
  std::vector<IVector> vectors;
  size_t n_target = 0;
  size_t n_nontarget = 0;
};

namespace detail {

inline Eigen::VectorXd gaussian_vector(std::mt19937_64 &rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

inline std::string zero_pad(long value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*ld", width, value);
  return buf;
}

// Caches the speaker factor per pool member so the same underlying speaker
// keeps the same factor across sessions.
class SpeakerFactorCache {
 public:
  SpeakerFactorCache(std::mt19937_64 &rng, Eigen::Index rank)
      : rng_(rng), rank_(rank) {}

  const Eigen::VectorXd &factor(const std::string &speaker_id) {
    auto it = cache_.find(speaker_id);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(speaker_id, gaussian_vector(rng_, rank_))
        .first->second;
  }

 private:
  std::mt19937_64 &rng_;
  Eigen::Index rank_;
  std::map<std::string, Eigen::VectorXd> cache_;
};

}  // namespace detail

/// Samples a ground-truth model: zero mean, random orthonormal subspace
/// columns scaled by speaker_scale, isotropic residual covariance
/// noise_scale^2 * I (or a random SPD matrix of comparable scale when
/// random_spd is set).  Deterministic given the seed.
inline PldaModel sample_truth_model(Eigen::Index dim, Eigen::Index rank,
                                    double speaker_scale, double noise_scale,
                                    std::uint64_t seed,
                                    bool random_spd = false) {
  if (rank < 1 || rank > dim)
    throw ConfigError("truth model: rank outside [1, dim]");
  if (noise_scale <= 0.0)
    throw ConfigError("truth model: noise_scale must be > 0");
  std::mt19937_64 rng(seed);

  Eigen::MatrixXd raw(dim, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    raw.col(j) = detail::gaussian_vector(rng, dim);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  Eigen::MatrixXd ortho =
      qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);

  PldaModel model;
  model.mean = Eigen::VectorXd::Zero(dim);
  model.speaker_subspace = ortho * speaker_scale;
  if (random_spd) {
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      m.col(j) = detail::gaussian_vector(rng, dim);
    model.residual_cov =
        noise_scale * noise_scale *
        (0.5 * Eigen::MatrixXd::Identity(dim, dim) +
         (0.5 / static_cast<double>(dim)) * m * m.transpose());
    model.residual_cov =
        0.5 * (model.residual_cov + model.residual_cov.transpose());
  } else {
    model.residual_cov =
        noise_scale * noise_scale * Eigen::MatrixXd::Identity(dim, dim);
  }
  return model;
}

/// Generates a two-channel session corpus from the given ground-truth model.
/// Every session has one customer drawn from the customer pool and one
/// service agent drawn from the service pool; each channel contributes
/// max(1, Poisson(utts_per_channel)) utterances w = u + V y + Sigma^(1/2) e.
/// The factor y is drawn once per pool member and reused across sessions.
/// Session randomness is independent of the truth-model draw, so several
/// corpora can share one truth model under different seeds.
inline SynthCorpus generate_corpus_with_truth(const SynthConfig &config,
                                              const PldaModel &truth) {
  config.validate();
  if (truth.dim() != config.dim || truth.rank() != config.rank)
    throw DimensionError("synth: truth model is " +
                         std::to_string(truth.dim()) + "x" +
                         std::to_string(truth.rank()) + ", config wants " +
                         std::to_string(config.dim) + "x" +
                         std::to_string(config.rank));
  SynthCorpus corpus;
  corpus.config = config;
  corpus.truth_model = truth;

  std::mt19937_64 rng(detail::mix_seed(config.seed, 17));
  std::poisson_distribution<long> poisson(config.utts_per_channel);
  std::uniform_int_distribution<long> draw_customer(0,
                                                    config.customer_pool - 1);
  std::uniform_int_distribution<long> draw_service(0, config.service_pool - 1);
  detail::SpeakerFactorCache factors(rng, config.rank);

  Eigen::LLT<Eigen::MatrixXd> noise_llt(corpus.truth_model.residual_cov);
  if (noise_llt.info() != Eigen::Success)
    throw NumericError("synth: residual covariance not positive definite");
  Eigen::MatrixXd noise_chol = noise_llt.matrixL();

  const bool shifted = config.condition_shift.size() != 0;
  for (long s = 0; s < config.n_sessions; ++s) {
    std::string session_id = config.pool_tag + "-s" + detail::zero_pad(s, 6);
    long customer = config.customer_assignment == PoolAssignment::kRoundRobin
                        ? s % config.customer_pool
                        : draw_customer(rng);
    long service = draw_service(rng);
    struct Channel {
      const char *local_id;
      std::string speaker;
    };
    Channel channels[2] = {
        {"cust", config.pool_tag + "-C" + std::to_string(customer)},
        {"serv", config.pool_tag + "-S" + std::to_string(service)}};
    for (const Channel &ch : channels) {
      long count = std::max<long>(1, poisson(rng));
      const Eigen::VectorXd &y = factors.factor(ch.speaker);
      Eigen::VectorXd speaker_mean =
          corpus.truth_model.mean + corpus.truth_model.speaker_subspace * y;
      for (long k = 0; k < count; ++k) {
        Eigen::VectorXd eps = detail::gaussian_vector(rng, config.dim);
        Eigen::VectorXd w = speaker_mean + noise_chol * eps;
        if (shifted) w += config.condition_shift;
        std::string utt_id =
            session_id + "-" + ch.local_id + "-" + std::to_string(k);
        corpus.vectors.push_back(IVector{utt_id, std::move(w)});
        corpus.records.push_back(
            UtteranceRecord{utt_id, session_id, ch.local_id, ch.speaker});
      }
    }
  }
  return corpus;
}

/// As generate_corpus_with_truth, with the truth model sampled from the
/// config's own seed.
inline SynthCorpus generate_corpus(const SynthConfig &config) {
  config.validate();
  return generate_corpus_with_truth(
      config, sample_truth_model(config.dim, config.rank, config.speaker_scale,
                                 config.noise_scale, config.seed,
                                 config.random_spd_sigma));
}

/// Random unit vector orthogonal to the truth model's speaker subspace,
/// scaled by `magnitude`.  Models a speaker-independent acoustic-condition
/// offset between recording domains.
inline Eigen::VectorXd sample_condition_shift(const PldaModel &truth,
                                              double magnitude,
                                              std::uint64_t seed) {
  if (magnitude == 0.0) return Eigen::VectorXd();
  std::mt19937_64 rng(seed);
  Eigen::VectorXd g = detail::gaussian_vector(rng, truth.dim());
  if (truth.speaker_subspace.norm() > 0.0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(truth.speaker_subspace);
    Eigen::MatrixXd basis =
        qr.householderQ() *
        Eigen::MatrixXd::Identity(truth.dim(), truth.rank());
    g -= basis * (basis.transpose() * g);
  }
  double norm = g.norm();
  if (norm < kZeroNormThreshold)
    throw NumericError("condition shift: degenerate direction");
  return (magnitude / norm) * g;
}

/// Builds an evaluation trial set from held-out speakers of the corpus's
/// truth model.  Eval speaker ids live in a reserved "-E" namespace, so they
/// are disjoint from every training speaker by construction.  Trials are the
/// full cross product of enrollment and test utterances; a trial is a target
/// iff both sides share the underlying speaker.
inline EvalSplit make_eval_split(const SynthCorpus &corpus,
                                 long n_eval_speakers, long enroll_per_spk,
                                 long test_per_spk) {
  const SynthConfig &config = corpus.config;
  if (n_eval_speakers < 2)
    throw PreconditionError("eval split: need at least 2 speakers, got " +
                            std::to_string(n_eval_speakers));
  if (enroll_per_spk < 1 || test_per_spk < 1)
    throw PreconditionError("eval split: enroll/test counts must be >= 1");

  std::mt19937_64 rng(detail::mix_seed(config.seed, 23));
  const bool shifted = config.condition_shift.size() != 0;
  Eigen::LLT<Eigen::MatrixXd> noise_llt(corpus.truth_model.residual_cov);
  if (noise_llt.info() != Eigen::Success)
    throw NumericError("eval split: residual covariance not positive "
                       "definite");
  Eigen::MatrixXd noise_chol = noise_llt.matrixL();

  EvalSplit split;
  std::vector<std::string> enroll_utts, test_utts;
  std::vector<long> enroll_spk, test_spk;
  for (long spk = 0; spk < n_eval_speakers; ++spk) {
    std::string speaker_id =
        config.pool_tag + "-E" + detail::zero_pad(spk, 5);
    Eigen::VectorXd y = detail::gaussian_vector(rng, config.rank);
    Eigen::VectorXd speaker_mean =
        corpus.truth_model.mean + corpus.truth_model.speaker_subspace * y;
    auto emit = [&](const char *kind, long index) {
      Eigen::VectorXd eps = detail::gaussian_vector(rng, config.dim);
      Eigen::VectorXd w = speaker_mean + noise_chol * eps;
      if (shifted) w += config.condition_shift;
      std::string utt_id = speaker_id + "-" + kind + std::to_string(index);
      split.vectors.push_back(IVector{utt_id, std::move(w)});
      return utt_id;
    };
    for (long e = 0; e < enroll_per_spk; ++e) {
      enroll_utts.push_back(emit("enr", e));
      enroll_spk.push_back(spk);
    }
    for (long t = 0; t < test_per_spk; ++t) {
      test_utts.push_back(emit("tst", t));
      test_spk.push_back(spk);
    }
  }

  split.trials.trials.reserve(enroll_utts.size() * test_utts.size());
  for (size_t e = 0; e < enroll_utts.size(); ++e) {
    for (size_t t = 0; t < test_utts.size(); ++t) {
      bool target = enroll_spk[e] == test_spk[t];
      split.trials.trials.push_back(
          Trial{enroll_utts[e], test_utts[t], target});
      if (target)
        ++split.n_target;
      else
        ++split.n_nontarget;
    }
  }
  return split;
}

}  // namespace pldakit
