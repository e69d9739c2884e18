// Copyright 2026 The RelEmb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Pretraining by predicting each word between a noun pair from the pair, the
// word's local window and the outside-window means, with negative sampling.

#ifndef RELEMB_PRETRAIN_HPP_
#define RELEMB_PRETRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "relemb/common.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"
#include "relemb/sampling.hpp"

namespace relemb {

struct PretrainConfig {
  std::size_t dim = 100;
  std::size_t window = 3;
  std::size_t negatives = 25;
  double alpha = 0.025;
  std::size_t m_out = 5;
  double threshold = 1e-5;
  std::size_t epochs = 1;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  // Targets per progress-report window.
  std::size_t report_every = 100000;

  // Throws ConfigError.
  void validate() const;
};

// Reusable buffers for pretrain_step; sized on first use.
struct PretrainScratch {
  std::vector<double> features;
  std::vector<double> grad_features;
  std::vector<double> scores;
  std::vector<WordId> noise;
  std::vector<WordId> neighbors;
};

// Fills `out` (length 2d(2+c)) with
//   [N(n1); N(n2); W(w[t-1]) .. W(w[t-c]); W(w[t+1]) .. W(w[t+c]);
//    mean W(before); mean W(after)]
// for the 0-based target position t. Window slots outside the between-span
// use the NULL row. Precondition t < ctx.m_in().
void build_feature_vector(const NounPairContext& ctx, std::size_t target,
                          const EmbeddingParams& params, std::span<double> out);
std::vector<double> build_feature_vector(const NounPairContext& ctx,
                                         std::size_t target,
                                         const EmbeddingParams& params);

// sigma(W_tilde(w) . f + b(w))
double target_probability(std::span<const double> features, WordId word,
                          const EmbeddingParams& params);

// log p(w_t | f) + sum_j log(1 - p(noise_j | f)) for one target.
double pretrain_objective(const NounPairContext& ctx, std::size_t target,
                          std::span<const WordId> noise,
                          const EmbeddingParams& params);

// One stochastic gradient ascent step on the target's objective term with the
// given noise words. All gradients are taken at the pre-update parameters.
// Returns the objective before the update.
double pretrain_step(const NounPairContext& ctx, std::size_t target,
                     EmbeddingParams& params, double lr,
                     std::span<const WordId> noise, PretrainScratch& scratch);

// Draws `negatives` noise words (re-drawing the target) and steps.
double pretrain_step(const NounPairContext& ctx, std::size_t target,
                     EmbeddingParams& params, double lr, std::size_t negatives,
                     const NoiseSampler& sampler, Rng& rng,
                     PretrainScratch& scratch);

struct ReportWindow {
  std::uint64_t targets_processed = 0;  // progress at window close
  std::uint64_t targets_trained = 0;    // trained targets inside the window
  double mean_objective = 0.0;
  double learning_rate = 0.0;
};

struct TrainingReport {
  std::uint64_t targets_planned = 0;
  std::uint64_t targets_processed = 0;
  std::uint64_t targets_trained = 0;
  std::uint64_t contexts_seen = 0;
  std::uint64_t pairs_discarded = 0;
  std::uint64_t targets_discarded = 0;
  std::vector<ReportWindow> windows;
};

using ProgressCallback = std::function<void(const ReportWindow&)>;

// Linear decay from alpha to (almost) zero over planned progress.
double decayed_learning_rate(double alpha, std::uint64_t processed,
                             std::uint64_t planned);

// Trains from Gaussian/zero initialization. Throws std::invalid_argument on an
// empty stream and ConfigError on invalid config. With threads > 1 the
// workers update shared parameters without locks.
EmbeddingParams train_embeddings(ContextSource& source, const Vocabulary& vocab,
                                 const PretrainConfig& config,
                                 TrainingReport* report = nullptr,
                                 const ProgressCallback& on_window = {});

// Continues training from `init`.
EmbeddingParams train_embeddings(ContextSource& source, const Vocabulary& vocab,
                                 const PretrainConfig& config,
                                 EmbeddingParams init,
                                 TrainingReport* report = nullptr,
                                 const ProgressCallback& on_window = {});

}  // namespace relemb

#endif  // RELEMB_PRETRAIN_HPP_
