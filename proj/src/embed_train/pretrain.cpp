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


#include "relemb/pretrain.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace relemb {

void PretrainConfig::validate() const {
  if (dim < 1) throw ConfigError("d must be >= 1");
  if (window < 1) throw ConfigError("c must be >= 1");
  if (negatives < 1) throw ConfigError("k must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(threshold > 0.0)) throw ConfigError("subsampling threshold t must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (report_every < 1) throw ConfigError("report_every must be >= 1");
}

namespace {

void mean_rows(const Matrix& table, std::span<const WordId> ids,
               std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (ids.empty()) return;
  for (auto id : ids) axpy(1.0, table.row(id), out);
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (double& x : out) x *= inv;
}

}  // namespace

namespace {

void fill_features(const NounPairContext& ctx, std::size_t target,
                   const EmbeddingParams& params, std::span<double> out,
                   std::span<WordId> neighbors) {
  const std::size_t d = params.dim;
  const std::size_t c = params.window;
  if (target >= ctx.m_in()) {
    throw std::out_of_range("target position outside the between-span");
  }
  assert(out.size() == params.predictor_dim());
  auto block = [&](std::size_t slot) { return out.subspan(slot * d, d); };

  std::ranges::copy(params.nouns.row(ctx.n1), block(0).begin());
  std::ranges::copy(params.nouns.row(ctx.n2), block(1).begin());
  window_neighbors(ctx, target, c, neighbors);
  for (std::size_t s = 0; s < 2 * c; ++s) {
    std::ranges::copy(params.words.row(neighbors[s]), block(2 + s).begin());
  }
  mean_rows(params.words, ctx.before, block(2 + 2 * c));
  mean_rows(params.words, ctx.after, block(3 + 2 * c));
}

}  // namespace

void build_feature_vector(const NounPairContext& ctx, std::size_t target,
                          const EmbeddingParams& params, std::span<double> out) {
  std::vector<WordId> neighbors(2 * params.window);
  fill_features(ctx, target, params, out, neighbors);
}

std::vector<double> build_feature_vector(const NounPairContext& ctx,
                                         std::size_t target,
                                         const EmbeddingParams& params) {
  std::vector<double> f(params.predictor_dim());
  build_feature_vector(ctx, target, params, f);
  return f;
}

double target_probability(std::span<const double> features, WordId word,
                          const EmbeddingParams& params) {
  return sigmoid(dot(params.target_weights.row(word), features) +
                 params.target_bias[word]);
}

double pretrain_objective(const NounPairContext& ctx, std::size_t target,
                          std::span<const WordId> noise,
                          const EmbeddingParams& params) {
  const auto f = build_feature_vector(ctx, target, params);
  auto score = [&](WordId w) {
    return dot(params.target_weights.row(w), f) + params.target_bias[w];
  };
  double obj = log_sigmoid(score(ctx.between[target]));
  for (auto w : noise) obj += log_sigmoid(-score(w));
  return obj;
}

double pretrain_step(const NounPairContext& ctx, std::size_t target,
                     EmbeddingParams& params, double lr,
                     std::span<const WordId> noise, PretrainScratch& scratch) {
  const std::size_t d = params.dim;
  const std::size_t c = params.window;
  const std::size_t fdim = params.predictor_dim();
  if (params.target_weight_dim() != fdim) {
    throw std::invalid_argument("prediction weights are not 2d(2+c) long");
  }
  auto& f = scratch.features;
  auto& grad_f = scratch.grad_features;
  auto& g = scratch.scores;
  auto& nb = scratch.neighbors;
  f.resize(fdim);
  grad_f.assign(fdim, 0.0);
  g.resize(noise.size() + 1);
  nb.resize(2 * c);
  fill_features(ctx, target, params, f, nb);

  // g_j = label_j - sigma(score_j), the derivative of the log-likelihood
  // term with respect to score_j.
  double objective = 0.0;
  for (std::size_t j = 0; j <= noise.size(); ++j) {
    const WordId w = j == 0 ? ctx.between[target] : noise[j - 1];
    const double s = dot(params.target_weights.row(w), f) + params.target_bias[w];
    if (j == 0) {
      objective += log_sigmoid(s);
      g[j] = 1.0 - sigmoid(s);
    } else {
      objective += log_sigmoid(-s);
      g[j] = -sigmoid(s);
    }
    axpy(g[j], params.target_weights.row(w), grad_f);
  }
  for (std::size_t j = 0; j <= noise.size(); ++j) {
    const WordId w = j == 0 ? ctx.between[target] : noise[j - 1];
    axpy(lr * g[j], f, params.target_weights.row(w));
    params.target_bias[w] += lr * g[j];
  }

  const std::span<const double> gf(grad_f);
  axpy(lr, gf.subspan(0, d), params.nouns.row(ctx.n1));
  axpy(lr, gf.subspan(d, d), params.nouns.row(ctx.n2));
  for (std::size_t s = 0; s < 2 * c; ++s) {
    axpy(lr, gf.subspan((2 + s) * d, d), params.words.row(nb[s]));
  }
  if (!ctx.before.empty()) {
    const double scale = lr / static_cast<double>(ctx.before.size());
    for (auto w : ctx.before) axpy(scale, gf.subspan((2 + 2 * c) * d, d), params.words.row(w));
  }
  if (!ctx.after.empty()) {
    const double scale = lr / static_cast<double>(ctx.after.size());
    for (auto w : ctx.after) axpy(scale, gf.subspan((3 + 2 * c) * d, d), params.words.row(w));
  }
  return objective;
}

double pretrain_step(const NounPairContext& ctx, std::size_t target,
                     EmbeddingParams& params, double lr, std::size_t negatives,
                     const NoiseSampler& sampler, Rng& rng,
                     PretrainScratch& scratch) {
  scratch.noise.resize(negatives);
  sampler.sample_noise(ctx.between[target], scratch.noise, rng);
  return pretrain_step(ctx, target, params, lr, scratch.noise, scratch);
}

double decayed_learning_rate(double alpha, std::uint64_t processed,
                             std::uint64_t planned) {
  const double remaining =
      1.0 - static_cast<double>(processed) / static_cast<double>(planned);
  return alpha * std::max(remaining, 1e-4);
}

namespace {

constexpr std::size_t kBatchContexts = 256;

class PretrainRun {
 public:
  PretrainRun(ContextSource& source, const Vocabulary& vocab,
              const PretrainConfig& config, EmbeddingParams& params,
              TrainingReport& report, const ProgressCallback& on_window)
      : source_(source),
        config_(config),
        params_(params),
        report_(report),
        on_window_(on_window),
        sampler_(vocab.words().counts()),
        word_filter_(vocab.words().counts(), std::max<std::uint64_t>(vocab.total_token_count(), 1),
                     config.threshold),
        noun_filter_(vocab.nouns().counts(), std::max<std::uint64_t>(vocab.total_noun_count(), 1),
                     config.threshold) {}

  void run() {
    report_.targets_planned = config_.epochs * source_.total_targets();
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
      source_.rewind();
      if (config_.threads == 1) {
        worker(0, epoch);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < config_.threads; ++t) {
          pool.emplace_back([this, t, epoch] { worker(t, epoch); });
        }
        for (auto& th : pool) th.join();
      }
    }
    flush_window(true);
    report_.targets_processed = processed_.load();
  }

 private:
  std::size_t fetch(std::vector<NounPairContext>& batch) {
    std::lock_guard lock(source_mutex_);
    std::size_t n = 0;
    while (n < kBatchContexts && source_.next(batch[n])) ++n;
    return n;
  }

  void worker(std::size_t thread_index, std::size_t epoch) {
    std::seed_seq seq{config_.seed, static_cast<std::uint64_t>(thread_index),
                      static_cast<std::uint64_t>(epoch)};
    Rng rng(seq);
    PretrainScratch scratch;
    std::vector<NounPairContext> batch(kBatchContexts);
    const std::uint64_t planned = report_.targets_planned;
    for (;;) {
      const std::size_t n = fetch(batch);
      if (n == 0) break;
      Tally tally;
      for (std::size_t b = 0; b < n; ++b) {
        const NounPairContext& ctx = batch[b];
        ++tally.contexts;
        const std::uint64_t m_in = ctx.m_in();
        if (pair_discard(noun_filter_, ctx.n1, ctx.n2, rng)) {
          ++tally.pairs_discarded;
          processed_.fetch_add(m_in, std::memory_order_relaxed);
          continue;
        }
        for (std::size_t t = 0; t < m_in; ++t) {
          const std::uint64_t done =
              processed_.fetch_add(1, std::memory_order_relaxed);
          if (word_filter_.discard(ctx.between[t], rng)) {
            ++tally.targets_discarded;
            continue;
          }
          const double lr = decayed_learning_rate(config_.alpha, done, planned);
          tally.objective += pretrain_step(ctx, t, params_, lr, config_.negatives,
                                           sampler_, rng, scratch);
          ++tally.trained;
          tally.last_lr = lr;
        }
      }
      merge(tally);
    }
  }

  struct Tally {
    std::uint64_t contexts = 0;
    std::uint64_t pairs_discarded = 0;
    std::uint64_t targets_discarded = 0;
    std::uint64_t trained = 0;
    double objective = 0.0;
    double last_lr = 0.0;
  };

  void merge(const Tally& t) {
    std::lock_guard lock(report_mutex_);
    report_.contexts_seen += t.contexts;
    report_.pairs_discarded += t.pairs_discarded;
    report_.targets_discarded += t.targets_discarded;
    report_.targets_trained += t.trained;
    window_objective_ += t.objective;
    window_trained_ += t.trained;
    if (t.trained > 0) window_lr_ = t.last_lr;
    flush_window(false);
  }

  // Caller holds report_mutex_ (or is the only thread left).
  void flush_window(bool final) {
    if (window_trained_ == 0) return;
    if (!final && window_trained_ < config_.report_every) return;
    ReportWindow w;
    w.targets_processed = processed_.load(std::memory_order_relaxed);
    w.targets_trained = window_trained_;
    w.mean_objective = window_objective_ / static_cast<double>(window_trained_);
    w.learning_rate = window_lr_;
    report_.windows.push_back(w);
    if (on_window_) on_window_(w);
    window_objective_ = 0.0;
    window_trained_ = 0;
  }

  ContextSource& source_;
  const PretrainConfig& config_;
  EmbeddingParams& params_;
  TrainingReport& report_;
  const ProgressCallback& on_window_;
  NoiseSampler sampler_;
  SubsamplingFilter word_filter_;
  SubsamplingFilter noun_filter_;
  std::mutex source_mutex_;
  std::mutex report_mutex_;
  std::atomic<std::uint64_t> processed_{0};
  double window_objective_ = 0.0;
  std::uint64_t window_trained_ = 0;
  double window_lr_ = 0.0;
};

}  // namespace

EmbeddingParams train_embeddings(ContextSource& source, const Vocabulary& vocab,
                                 const PretrainConfig& config,
                                 TrainingReport* report,
                                 const ProgressCallback& on_window) {
  config.validate();
  return train_embeddings(
      source, vocab, config,
      EmbeddingParams::random_init(config.dim, config.window, vocab.words().size(),
                                   vocab.nouns().size(), config.seed),
      report, on_window);
}

EmbeddingParams train_embeddings(ContextSource& source, const Vocabulary& vocab,
                                 const PretrainConfig& config,
                                 EmbeddingParams init, TrainingReport* report,
                                 const ProgressCallback& on_window) {
  config.validate();
  init.check_shapes();
  if (init.dim != config.dim || init.window != config.window ||
      init.target_weight_dim() != init.predictor_dim()) {
    throw ConfigError("initial parameters do not match d/c of the config");
  }
  if (init.num_words() != vocab.words().size() ||
      init.num_nouns() != vocab.nouns().size()) {
    throw ConfigError("initial parameters do not match the vocabulary size");
  }
  if (source.total_targets() == 0) {
    throw std::invalid_argument("no pretraining targets in the context stream");
  }
  TrainingReport local;
  TrainingReport& rep = report != nullptr ? *report : local;
  rep = TrainingReport{};
  PretrainRun run(source, vocab, config, init, rep, on_window);
  run.run();
  return init;
}

}  // namespace relemb
