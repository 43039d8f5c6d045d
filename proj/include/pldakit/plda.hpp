// pldakit/plda.hpp

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
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pldakit/errors.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kSigmaEigenvalueFloor = 1e-8;  // relative to largest eigenvalue

/// Gaussian latent-variable model for speaker embeddings:
///
///   w = mean + speaker_subspace * y + z,   y ~ N(0, I),  z ~ N(0, residual_cov)
///
/// The speaker factor y is shared by all utterances of one speaker; z is
/// drawn per utterance.
struct PldaModel {
  Eigen::VectorXd mean;              // length D
  Eigen::MatrixXd speaker_subspace;  // D x K
  Eigen::MatrixXd residual_cov;      // D x D, symmetric positive definite

  Eigen::Index dim() const { return mean.size(); }
  Eigen::Index rank() const { return speaker_subspace.cols(); }

  /// Total covariance of a single utterance.
  Eigen::MatrixXd total_cov() const {
    return speaker_subspace * speaker_subspace.transpose() + residual_cov;
  }

  /// Covariance shared by two utterances of one speaker.
  Eigen::MatrixXd between_cov() const {
    return speaker_subspace * speaker_subspace.transpose();
  }

  void validate() const {
    const Eigen::Index d = dim();
    if (d < 1) throw DimensionError("plda model: dimension must be >= 1");
    if (speaker_subspace.rows() != d)
      throw DimensionError("plda model: subspace has " +
                           std::to_string(speaker_subspace.rows()) +
                           " rows, expected " + std::to_string(d));
    if (rank() < 1 || rank() > d)
      throw DimensionError("plda model: rank " + std::to_string(rank()) +
                           " outside [1, " + std::to_string(d) + "]");
    if (residual_cov.rows() != d || residual_cov.cols() != d)
      throw DimensionError("plda model: residual covariance is " +
                           std::to_string(residual_cov.rows()) + "x" +
                           std::to_string(residual_cov.cols()) + ", expected " +
                           std::to_string(d) + "x" + std::to_string(d));
    if (!mean.allFinite() || !speaker_subspace.allFinite() ||
        !residual_cov.allFinite())
      throw NumericError("plda model: non-finite entries");
    double asym = (residual_cov - residual_cov.transpose())
                      .cwiseAbs()
                      .maxCoeff();
    if (asym > 1e-10)
      throw NumericError("plda model: residual covariance asymmetry " +
                         std::to_string(asym));
    Eigen::LLT<Eigen::MatrixXd> llt(residual_cov);
    if (llt.info() != Eigen::Success)
      throw NumericError("plda model: residual covariance is not positive "
                         "definite");
  }
};

/// Posterior of one speaker's factor y given n observed utterances.
struct SpeakerPosterior {
  Eigen::VectorXd mean;       // E[y], length K
  Eigen::MatrixXd precision;  // I + n * V^T Sigma^-1 V, K x K
  Eigen::Index count = 0;     // n
};

enum class SigmaMode { kFull, kDiagonal };

struct TrainConfig {
  Eigen::Index rank = 0;            // K; required
  int iterations = 20;
  std::uint64_t seed = 0;           // used only when random_init is set
  Eigen::Index min_utts_per_speaker = 1;
  SigmaMode sigma_mode = SigmaMode::kFull;
  bool random_init = false;         // perturb the deterministic init of V
};

struct TrainResult {
  PldaModel model;
  std::vector<double> log_likelihood;  // marginal data LL after each iteration
};

namespace detail {

// Speaker groups as contiguous row ranges of a stacked data matrix.
struct SpeakerGroups {
  Eigen::MatrixXd data;              // N x D, rows grouped by speaker
  std::vector<Eigen::Index> counts;  // utterances per speaker
  std::vector<Eigen::Index> offsets; // first row of each speaker
};

inline SpeakerGroups group_by_speaker(const LabeledDataset &data,
                                      Eigen::Index min_utts) {
  std::map<std::string, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(data.vectors.size());
       ++i) {
    const auto it = data.labels.find(data.vectors[i].utt_id);
    if (it == data.labels.end())
      throw PreconditionError("train: utterance '" + data.vectors[i].utt_id +
                              "' has no label");
    groups[it->second].push_back(i);
  }
  SpeakerGroups out;
  Eigen::Index total = 0;
  for (const auto &[label, rows] : groups) {
    if (static_cast<Eigen::Index>(rows.size()) < min_utts) continue;
    total += static_cast<Eigen::Index>(rows.size());
  }
  out.data.resize(total, data.dim);
  Eigen::Index row = 0;
  for (const auto &[label, rows] : groups) {
    if (static_cast<Eigen::Index>(rows.size()) < min_utts) continue;
    out.offsets.push_back(row);
    out.counts.push_back(static_cast<Eigen::Index>(rows.size()));
    for (Eigen::Index idx : rows)
      out.data.row(row++) = data.vectors[idx].values.transpose();
  }
  return out;
}

inline void floor_spd_eigenvalues(Eigen::MatrixXd *m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*m);
  if (eig.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed while flooring covariance");
  Eigen::VectorXd evals = eig.eigenvalues();
  double max_eval = evals.maxCoeff();
  double floor = (max_eval > 0.0 ? max_eval : 1.0) * kSigmaEigenvalueFloor;
  bool touched = false;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < floor) {
      evals(i) = floor;
      touched = true;
    }
  }
  if (touched) {
    *m = eig.eigenvectors() * evals.asDiagonal() *
         eig.eigenvectors().transpose();
    *m = 0.5 * (*m + m->transpose());
  }
}

// Per-iteration E-step accumulators plus the pieces of the marginal
// log-likelihood that depend on the per-speaker posteriors.
struct EStepStats {
  Eigen::MatrixXd weighted_sums_y;   // T1 = sum_i f_i E[y_i]^T, D x K
  Eigen::MatrixXd weighted_second;   // T2 = sum_i n_i E[y_i y_i^T], K x K
  double logdet_prec_sum = 0.0;      // sum_i log|L_i|
  double posterior_quad_sum = 0.0;   // sum_i b_i^T L_i^-1 b_i
};

// Shared per-iteration quantities derived from the current model.
struct EStepWorkspace {
  Eigen::LLT<Eigen::MatrixXd> sigma_llt;       // of residual_cov
  Eigen::MatrixXd sigma_inv_subspace;          // Sigma^-1 V, D x K
  Eigen::MatrixXd gram;                        // V^T Sigma^-1 V, K x K
  double sigma_logdet = 0.0;

  static EStepWorkspace build(const Eigen::MatrixXd &subspace,
                              const Eigen::MatrixXd &sigma, int iteration) {
    EStepWorkspace ws;
    ws.sigma_llt.compute(sigma);
    if (ws.sigma_llt.info() != Eigen::Success)
      throw NumericError("EM iteration " + std::to_string(iteration) +
                         ": residual covariance became singular");
    ws.sigma_inv_subspace = ws.sigma_llt.solve(subspace);
    ws.gram = subspace.transpose() * ws.sigma_inv_subspace;
    ws.gram = 0.5 * (ws.gram + ws.gram.transpose());
    ws.sigma_logdet =
        2.0 * ws.sigma_llt.matrixLLT().diagonal().array().log().sum();
    return ws;
  }
};

// Cache of Cholesky factors of L_n = I + n * gram, keyed by n.  Speaker
// posteriors depend on the utterance count only through L_n.
class PosteriorPrecisionCache {
 public:
  PosteriorPrecisionCache(const Eigen::MatrixXd &gram) : gram_(gram) {}

  const Eigen::LLT<Eigen::MatrixXd> &factor(Eigen::Index n) {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second.llt;
    Eigen::Index k = gram_.rows();
    Eigen::MatrixXd prec =
        Eigen::MatrixXd::Identity(k, k) + static_cast<double>(n) * gram_;
    Entry entry;
    entry.llt.compute(prec);
    if (entry.llt.info() != Eigen::Success)
      throw NumericError("posterior precision not positive definite");
    entry.logdet = 2.0 * entry.llt.matrixLLT().diagonal().array().log().sum();
    return cache_.emplace(n, std::move(entry)).first->second.llt;
  }

  double logdet(Eigen::Index n) {
    factor(n);
    return cache_.at(n).logdet;
  }

 private:
  struct Entry {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double logdet = 0.0;
  };
  Eigen::MatrixXd gram_;
  std::map<Eigen::Index, Entry> cache_;
};

// Runs the E-step over speakers [begin, end).  `centered_sums` holds one row
// per speaker: f_i = sum_j (w_ij - u).
inline EStepStats estep_range(const Eigen::MatrixXd &centered_sums,
                              const std::vector<Eigen::Index> &counts,
                              const EStepWorkspace &ws, Eigen::Index begin,
                              Eigen::Index end) {
  const Eigen::Index k = ws.gram.rows();
  const Eigen::Index d = centered_sums.cols();
  EStepStats stats;
  stats.weighted_sums_y = Eigen::MatrixXd::Zero(d, k);
  stats.weighted_second = Eigen::MatrixXd::Zero(k, k);
  PosteriorPrecisionCache cache(ws.gram);
  for (Eigen::Index i = begin; i < end; ++i) {
    const Eigen::Index n = counts[i];
    const auto &llt = cache.factor(n);
    Eigen::VectorXd b =
        ws.sigma_inv_subspace.transpose() * centered_sums.row(i).transpose();
    Eigen::VectorXd ybar = llt.solve(b);
    Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
    stats.weighted_sums_y.noalias() +=
        centered_sums.row(i).transpose() * ybar.transpose();
    stats.weighted_second.noalias() +=
        static_cast<double>(n) * (cov + ybar * ybar.transpose());
    stats.logdet_prec_sum += cache.logdet(n);
    stats.posterior_quad_sum += b.dot(ybar);
  }
  return stats;
}

inline EStepStats estep_parallel(const Eigen::MatrixXd &centered_sums,
                                 const std::vector<Eigen::Index> &counts,
                                 const EStepWorkspace &ws, int threads) {
  const Eigen::Index n_speakers =
      static_cast<Eigen::Index>(counts.size());
  if (threads <= 1 || n_speakers < 2 * threads)
    return estep_range(centered_sums, counts, ws, 0, n_speakers);

  // Fixed contiguous chunks reduced in index order: the result depends on
  // the thread count only through floating-point summation order.
  std::vector<EStepStats> partial(threads);
  std::vector<std::thread> workers;
  Eigen::Index chunk = (n_speakers + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    Eigen::Index begin = std::min<Eigen::Index>(t * chunk, n_speakers);
    Eigen::Index end = std::min<Eigen::Index>(begin + chunk, n_speakers);
    workers.emplace_back([&, t, begin, end] {
      partial[t] = estep_range(centered_sums, counts, ws, begin, end);
    });
  }
  for (auto &w : workers) w.join();
  EStepStats total = std::move(partial[0]);
  for (int t = 1; t < threads; ++t) {
    total.weighted_sums_y += partial[t].weighted_sums_y;
    total.weighted_second += partial[t].weighted_second;
    total.logdet_prec_sum += partial[t].logdet_prec_sum;
    total.posterior_quad_sum += partial[t].posterior_quad_sum;
  }
  return total;
}

/* Marginal data log-likelihood.  Integrating the speaker factor out of
   one speaker's block of n utterances gives

     log p({w_j}) = -0.5 [ n D log(2 pi) + n log|Sigma| + log|L|
                           + sum_j x_j^T Sigma^-1 x_j - b^T L^-1 b ]

   with x_j = w_j - u, f = sum_j x_j, b = V^T Sigma^-1 f and
   L = I + n V^T Sigma^-1 V.  The per-utterance quadratic term summed over
   the whole dataset is trace(Sigma^-1 S) for the total scatter S, so it is
   computed once per iteration instead of per utterance. */
inline double marginal_log_likelihood(Eigen::Index n_total, Eigen::Index dim,
                                      const Eigen::MatrixXd &scatter,
                                      const EStepWorkspace &ws,
                                      const EStepStats &stats) {
  double trace_term = ws.sigma_llt.solve(scatter).trace();
  return -0.5 * (static_cast<double>(n_total) * dim * kLog2Pi +
                 static_cast<double>(n_total) * ws.sigma_logdet +
                 stats.logdet_prec_sum + trace_term -
                 stats.posterior_quad_sum);
}

}  // namespace detail

/// Posterior of the speaker factor given all vectors of one speaker.
inline SpeakerPosterior compute_speaker_posterior(
    const PldaModel &model, const std::vector<Eigen::VectorXd> &vectors) {
  if (vectors.empty())
    throw PreconditionError("speaker posterior: no vectors given");
  for (const auto &v : vectors)
    if (v.size() != model.dim())
      throw DimensionError("speaker posterior: vector dimension " +
                           std::to_string(v.size()) + ", model expects " +
                           std::to_string(model.dim()));
  auto ws = detail::EStepWorkspace::build(model.speaker_subspace,
                                          model.residual_cov, 0);
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index k = model.rank();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dim());
  for (const auto &v : vectors) f += v - model.mean;
  SpeakerPosterior post;
  post.count = n;
  post.precision = Eigen::MatrixXd::Identity(k, k) +
                   static_cast<double>(n) * ws.gram;
  Eigen::LLT<Eigen::MatrixXd> llt(post.precision);
  if (llt.info() != Eigen::Success)
    throw NumericError("speaker posterior: precision not positive definite");
  post.mean = llt.solve(ws.sigma_inv_subspace.transpose() * f);
  return post;
}

/// EM estimation of a PldaModel from a labelled dataset.
///
/// Initialization is deterministic: the mean is the sample mean (and stays
/// fixed), the subspace starts from the top-K eigenvectors of the total
/// covariance scaled by sqrt(eigenvalue / 2), and the residual covariance
/// starts at half the total covariance.  With config.random_init the subspace
/// start is additionally perturbed by seeded Gaussian noise.
///
/// Returns the trained model and the marginal log-likelihood after each
/// iteration; the sequence is non-decreasing up to floating-point tolerance.
inline TrainResult train_em(const LabeledDataset &data,
                            const TrainConfig &config, int threads = 1) {
  if (data.vectors.empty())
    throw PreconditionError("train: empty dataset");
  const Eigen::Index d = data.dim;
  if (config.rank < 1 || config.rank > d)
    throw ConfigError("train: rank " + std::to_string(config.rank) +
                      " outside [1, " + std::to_string(d) + "]");
  if (config.iterations < 1)
    throw ConfigError("train: iterations must be >= 1");
  if (config.min_utts_per_speaker < 1)
    throw ConfigError("train: min_utts_per_speaker must be >= 1");

  detail::SpeakerGroups groups =
      detail::group_by_speaker(data, config.min_utts_per_speaker);
  const Eigen::Index n_speakers =
      static_cast<Eigen::Index>(groups.counts.size());
  const Eigen::Index n_total = groups.data.rows();
  if (n_speakers < 2)
    throw PreconditionError(
        "train: need at least 2 speakers after filtering, have " +
        std::to_string(n_speakers));

  const Eigen::Index k = config.rank;
  Eigen::VectorXd mean = groups.data.colwise().mean().transpose();
  Eigen::MatrixXd centered = groups.data.rowwise() - mean.transpose();
  Eigen::MatrixXd scatter = centered.transpose() * centered;  // S, D x D
  scatter = 0.5 * (scatter + scatter.transpose());
  Eigen::MatrixXd total_cov = scatter / static_cast<double>(n_total);

  // Per-speaker sums of centered vectors, one row per speaker.
  Eigen::MatrixXd centered_sums(n_speakers, d);
  for (Eigen::Index i = 0; i < n_speakers; ++i)
    centered_sums.row(i) = centered
                               .middleRows(groups.offsets[i], groups.counts[i])
                               .colwise()
                               .sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(total_cov);
  if (eig.info() != Eigen::Success)
    throw NumericError("train: eigendecomposition of total covariance failed");
  Eigen::MatrixXd subspace(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index src = d - 1 - j;  // descending eigenvalue order
    double scale = std::sqrt(std::max(eig.eigenvalues()(src), 0.0) * 0.5);
    subspace.col(j) = eig.eigenvectors().col(src) * scale;
  }
  if (config.random_init) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double scale =
        std::sqrt(total_cov.trace() / (2.0 * static_cast<double>(d * k)));
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < d; ++i)
        subspace(i, j) += 0.1 * scale * gauss(rng);
  }
  Eigen::MatrixXd sigma = 0.5 * total_cov;
  if (config.sigma_mode == SigmaMode::kDiagonal)
    sigma = sigma.diagonal().asDiagonal();
  detail::floor_spd_eigenvalues(&sigma);

  std::vector<double> log_likelihood;
  log_likelihood.reserve(config.iterations);

  for (int iter = 1; iter <= config.iterations + 1; ++iter) {
    auto ws = detail::EStepWorkspace::build(subspace, sigma, iter);
    auto stats =
        detail::estep_parallel(centered_sums, groups.counts, ws, threads);
    if (iter > 1)
      log_likelihood.push_back(
          detail::marginal_log_likelihood(n_total, d, scatter, ws, stats));
    if (iter > config.iterations) break;

    // M-step.  V <- T1 T2^-1; Sigma <- (S - V T1^T) / N, symmetrized and
    // floored so a later iteration never sees a singular covariance.
    Eigen::LLT<Eigen::MatrixXd> second_llt(stats.weighted_second);
    if (second_llt.info() != Eigen::Success)
      throw NumericError("EM iteration " + std::to_string(iter) +
                         ": second-moment matrix not positive definite");
    subspace = second_llt.solve(stats.weighted_sums_y.transpose()).transpose();
    sigma = (scatter - subspace * stats.weighted_sums_y.transpose()) /
            static_cast<double>(n_total);
    sigma = 0.5 * (sigma + sigma.transpose());
    if (config.sigma_mode == SigmaMode::kDiagonal)
      sigma = sigma.diagonal().asDiagonal();
    detail::floor_spd_eigenvalues(&sigma);
  }

  TrainResult result;
  result.model.mean = std::move(mean);
  result.model.speaker_subspace = std::move(subspace);
  result.model.residual_cov = std::move(sigma);
  result.log_likelihood = std::move(log_likelihood);
  result.model.validate();
  return result;
}

/* Pairwise verification score.  For total covariance T = V V^T + Sigma and
   between covariance B = V V^T, the same-speaker hypothesis models the pair
   as one joint Gaussian with covariance [[T, B], [B, T]]; the
   different-speaker hypothesis factorizes into two N(u, T) terms.  The
   orthogonal change of variables s = (x1 + x2)/sqrt(2), e = (x1 - x2)/sqrt(2)
   block-diagonalizes the joint covariance into (T + B) and (T - B) = Sigma,
   so the log-likelihood ratio collapses to

     score = -0.5 [ c0 + x1^T Q x1 + x2^T Q x2 + x1^T G x2 ]

   with A = (T+B)^-1, Q = (A + Sigma^-1)/2 - T^-1, G = A - Sigma^-1 and
   c0 = log|T+B| + log|Sigma| - 2 log|T|.  Q, G and c0 depend only on the
   model, so batch scoring costs one dot product per trial. */
class PldaScorer {
 public:
  explicit PldaScorer(const PldaModel &model)
      : mean_(model.mean) {
    model.validate();
    const Eigen::Index d = model.dim();
    Eigen::MatrixXd between = model.between_cov();
    Eigen::MatrixXd total = between + model.residual_cov;
    Eigen::MatrixXd summed = total + between;

    Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd inv_summed = solve_spd(summed, identity, "T + B");
    Eigen::MatrixXd inv_residual =
        solve_spd(model.residual_cov, identity, "Sigma");
    Eigen::MatrixXd inv_total = solve_spd(total, identity, "T");

    quad_ = 0.5 * (inv_summed + inv_residual) - inv_total;
    cross_ = inv_summed - inv_residual;
    constant_ = logdet_spd(summed) + logdet_spd(model.residual_cov) -
                2.0 * logdet_spd(total);
  }

  Eigen::Index dim() const { return mean_.size(); }

  double score(const Eigen::VectorXd &enroll,
               const Eigen::VectorXd &test) const {
    check_dim(enroll);
    check_dim(test);
    Eigen::VectorXd x1 = enroll - mean_;
    Eigen::VectorXd x2 = test - mean_;
    return -0.5 * (constant_ + x1.dot(quad_ * x1) + x2.dot(quad_ * x2) +
                   x1.dot(cross_ * x2));
  }

  /// Per-vector pieces so a batch of trials costs one dot product each.
  struct Projected {
    Eigen::VectorXd centered;
    Eigen::VectorXd crossed;  // cross_ * centered
    double quad = 0.0;        // centered^T quad_ centered
  };

  Projected project(const Eigen::VectorXd &v) const {
    check_dim(v);
    Projected p;
    p.centered = v - mean_;
    p.crossed = cross_ * p.centered;
    p.quad = p.centered.dot(quad_ * p.centered);
    return p;
  }

  double score(const Projected &enroll, const Projected &test) const {
    return -0.5 *
           (constant_ + enroll.quad + test.quad +
            enroll.centered.dot(test.crossed));
  }

 private:
  void check_dim(const Eigen::VectorXd &v) const {
    if (v.size() != mean_.size())
      throw DimensionError("score: vector dimension " +
                           std::to_string(v.size()) + ", model expects " +
                           std::to_string(mean_.size()));
  }

  static Eigen::MatrixXd solve_spd(const Eigen::MatrixXd &m,
                                   const Eigen::MatrixXd &rhs,
                                   const char *what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw NumericError(std::string("scorer: covariance ") + what +
                         " is not positive definite");
    return llt.solve(rhs);
  }

  static double logdet_spd(const Eigen::MatrixXd &m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw NumericError("scorer: log-determinant of a non-SPD matrix");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }

  Eigen::VectorXd mean_;
  Eigen::MatrixXd quad_;
  Eigen::MatrixXd cross_;
  double constant_ = 0.0;
};

/// Log-likelihood ratio between "same speaker" and "different speakers"
/// for a single pair.  Symmetric in its two vector arguments.
inline double score_llr(const PldaModel &model, const IVector &enroll,
                        const IVector &test) {
  PldaScorer scorer(model);
  return scorer.score(enroll.values, test.values);
}

/// Bulk scoring: one score per trial, equal to score_llr element-wise, with
/// the model decompositions and per-vector projections computed once.
inline ScoreSet score_llr_batch(const PldaModel &model, const TrialList &trials,
                                const std::vector<IVector> &vectors,
                                int threads = 1) {
  PldaScorer scorer(model);
  std::unordered_map<std::string, Eigen::Index> index;
  index.reserve(vectors.size());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(vectors.size()); ++i) {
    if (!index.emplace(vectors[i].utt_id, i).second)
      throw DuplicateKeyError("batch score: duplicate utt_id '" +
                              vectors[i].utt_id + "'");
  }
  auto lookup = [&](const std::string &utt) -> Eigen::Index {
    auto it = index.find(utt);
    if (it == index.end())
      throw PreconditionError("batch score: no vector for utterance '" + utt +
                              "'");
    return it->second;
  };

  // Project only the vectors that trials actually reference.
  std::vector<char> used(vectors.size(), 0);
  for (const Trial &t : trials.trials) {
    used[lookup(t.enroll_utt)] = 1;
    used[lookup(t.test_utt)] = 1;
  }
  std::vector<PldaScorer::Projected> projected(vectors.size());
  for (size_t i = 0; i < vectors.size(); ++i)
    if (used[i]) projected[i] = scorer.project(vectors[i].values);

  ScoreSet out;
  out.entries.resize(trials.trials.size());
  auto score_range = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const Trial &t = trials.trials[i];
      const auto &pe = projected[index.at(t.enroll_utt)];
      const auto &pt = projected[index.at(t.test_utt)];
      out.entries[i] = ScoreEntry{t.enroll_utt, t.test_utt,
                                  scorer.score(pe, pt), t.is_target};
    }
  };
  const size_t n = trials.trials.size();
  if (threads <= 1 || n < 1024) {
    score_range(0, n);
  } else {
    std::vector<std::thread> workers;
    size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      size_t begin = std::min(static_cast<size_t>(t) * chunk, n);
      size_t end = std::min(begin + chunk, n);
      workers.emplace_back(score_range, begin, end);
    }
    for (auto &w : workers) w.join();
  }
  return out;
}

/// Cosine similarity, in [-1, 1].
inline double score_cosine(const Eigen::VectorXd &enroll,
                           const Eigen::VectorXd &test) {
  if (enroll.size() != test.size())
    throw DimensionError("cosine: dimension mismatch " +
                         std::to_string(enroll.size()) + " vs " +
                         std::to_string(test.size()));
  double ne = enroll.norm(), nt = test.norm();
  if (ne < kZeroNormThreshold || nt < kZeroNormThreshold)
    throw DegenerateVectorError("cosine: zero-norm vector");
  return enroll.dot(test) / (ne * nt);
}

inline double score_cosine(const IVector &enroll, const IVector &test) {
  return score_cosine(enroll.values, test.values);
}

}  // namespace pldakit
