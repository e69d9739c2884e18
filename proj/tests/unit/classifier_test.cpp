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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "relemb/classifier.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"
#include "relemb/features.hpp"
#include "relemb/scoring.hpp"

namespace relemb {
namespace {

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// --- softmax ------------------------------------------------------------------------

TEST_CASE("zero softmax parameters give the uniform distribution") {
  const auto params = SoftmaxParams::zeros(19, 7);
  const std::vector<double> e(7, 3.0);
  for (double p : softmax_forward(e, params)) CHECK(p == doctest::Approx(1.0 / 19));
}

TEST_CASE("two-class softmax at (ln 3, 0)") {
  auto params = SoftmaxParams::zeros(2, 1);
  params.bias[0] = std::log(3.0);
  const std::vector<double> e{0.0};
  const auto p = softmax_forward(e, params);
  CHECK(p[0] == doctest::Approx(0.75));
  CHECK(p[1] == doctest::Approx(0.25));
}

TEST_CASE("softmax output is a probability vector, even for huge scores") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto params = SoftmaxParams::zeros(19, 5);
    for (auto& x : params.weights.values()) x = normal(rng);
    for (auto& x : params.bias) x = normal(rng);
    std::vector<double> e(5);
    for (auto& x : e) x = normal(rng);
    const auto p = softmax_forward(e, params);
    CHECK(all_finite(p));
    CHECK(std::all_of(p.begin(), p.end(), [](double x) { return x >= 0.0 && x <= 1.0; }));
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
  }
}

// --- dropout ------------------------------------------------------------------------

TEST_CASE("inverted dropout keeps the expectation") {
  const std::vector<double> e{1.0, -2.0, 0.5, 3.0, -0.25, 7.0, 0.0, 1e-3};
  std::vector<double> sum(e.size(), 0.0);
  Rng rng(2);
  const int draws = 100000;
  std::size_t kept = 0;
  for (int i = 0; i < draws; ++i) {
    std::vector<double> x = e;
    const auto mask = apply_dropout(x, rng);
    for (std::size_t k = 0; k < e.size(); ++k) {
      CHECK((mask.scale[k] == 0.0 || mask.scale[k] == 2.0));
      sum[k] += x[k];
      kept += mask.scale[k] != 0.0;
    }
  }
  for (std::size_t k = 0; k < e.size(); ++k) {
    // The per-draw value is 0 or 2e, with standard deviation |e|.
    const double se = std::abs(e[k]) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(sum[k] / draws - e[k]) <= 3 * se);
  }
  const double keep_rate = static_cast<double>(kept) / (draws * e.size());
  CHECK(keep_rate == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("all-kept mask doubles, all-dropped mask zeroes") {
  std::vector<double> e{1.0, -2.0};
  apply_mask(e, DropoutMask{{2.0, 2.0}});
  CHECK(e == std::vector<double>{2.0, -4.0});
  apply_mask(e, DropoutMask{{0.0, 0.0}});
  CHECK(e == std::vector<double>{0.0, 0.0});
}

// --- AdaGrad ----------------------------------------------------------------------------

TEST_CASE("first AdaGrad step is eta times the sign of the gradient") {
  std::vector<double> p{1.0, 1.0, 1.0};
  std::vector<double> acc(3, 0.0);
  const std::vector<double> g{0.3, -4.0, 0.0};
  adagrad_update(p, g, acc, 0.1);
  CHECK(p[0] == doctest::Approx(1.1).epsilon(1e-5));
  CHECK(p[1] == doctest::Approx(0.9).epsilon(1e-5));
  CHECK(p[0] == doctest::Approx(1.0 + 0.1 * 0.3 / (0.3 + kAdaGradEpsilon)));
  CHECK(p[2] == 1.0);
  CHECK(acc == std::vector<double>{0.09, 16.0, 0.0});
}

TEST_CASE("repeated identical gradients give shrinking steps") {
  std::vector<double> p{0.0};
  std::vector<double> acc{0.0};
  const std::vector<double> g{0.7};
  double prev_step = 1e9, prev_acc = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double before = p[0];
    adagrad_update(p, g, acc, 0.5);
    const double step = p[0] - before;
    CHECK(step < prev_step);
    CHECK(acc[0] > prev_acc);
    prev_step = step;
    prev_acc = acc[0];
  }
}

TEST_CASE("row-wise AdaGrad shares one accumulator per row") {
  std::vector<double> row{0.0, 0.0};
  double acc = 0.0;
  const std::vector<double> g{3.0, 4.0};
  rowwise_adagrad_update(row, g, acc, 1.0);
  CHECK(acc == doctest::Approx(12.5));
  CHECK(row[0] == doctest::Approx(3.0 / std::sqrt(12.5)));
  CHECK(row[1] == doctest::Approx(4.0 / std::sqrt(12.5)));
  const std::vector<double> zero{0.0, 0.0};
  const auto saved = row;
  rowwise_adagrad_update(row, zero, acc, 1.0);
  CHECK(row == saved);
}

// --- objective and gradient ---------------------------------------------------------------

NounPairContext random_context(std::mt19937_64& rng, std::size_t words, std::size_t nouns,
                               std::size_t min_in, std::size_t m_out) {
  NounPairContext ctx;
  ctx.n1 = static_cast<NounId>(rng() % nouns);
  ctx.n2 = static_cast<NounId>(rng() % nouns);
  ctx.between.resize(min_in + rng() % 5);
  for (auto& w : ctx.between) w = static_cast<WordId>(rng() % words);
  ctx.before.resize(m_out);
  ctx.after.resize(m_out);
  for (auto& w : ctx.before) w = static_cast<WordId>(rng() % words);
  for (auto& w : ctx.after) w = static_cast<WordId>(rng() % words);
  return ctx;
}

EmbeddingParams random_params(std::size_t d, std::size_t c, std::size_t words,
                              std::size_t nouns, std::uint64_t seed) {
  auto p = EmbeddingParams::random_init(d, c, words, nouns, seed);
  std::mt19937_64 rng(seed + 7);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (auto& x : p.target_weights.values()) x = normal(rng);
  return p;
}

TEST_CASE("zero parameters, no regularization: objective is -ln 19") {
  const auto emb = EmbeddingParams::random_init(3, 1, 10, 5, 1);
  std::mt19937_64 rng(2);
  const auto ctx = random_context(rng, 10, 5, 1, 2);
  const FeatureOptions opts;
  const auto softmax = SoftmaxParams::zeros(19, feature_layout(emb, opts).size);
  const double j = supervised_objective_and_grad(ctx, 4, emb, softmax, opts, 0.0,
                                                 false, nullptr, nullptr);
  CHECK(j == doctest::Approx(-std::log(19.0)));
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

TEST_CASE("supervised gradient matches central differences (d=4, c=1)") {
  std::mt19937_64 rng(3);
  const std::size_t words = 12, nouns = 6;
  for (int trial = 0; trial < 8; ++trial) {
    auto emb = random_params(4, 1, words, nouns, 50 + trial);
    const auto ctx = random_context(rng, words, nouns, 1, 2);
    FeatureOptions opts;
    if (trial % 2 == 1) opts.bag_of_words = true;
    const std::size_t dim = feature_layout(emb, opts).size;
    auto softmax = SoftmaxParams::zeros(19, dim);
    std::normal_distribution<double> normal(0.0, 0.2);
    for (auto& x : softmax.weights.values()) x = normal(rng);
    for (auto& x : softmax.bias) x = normal(rng);
    Rng mask_rng(trial);
    const auto mask = draw_dropout_mask(dim, mask_rng);
    const DropoutMask* m = trial % 3 == 0 ? nullptr : &mask;
    const int label = static_cast<int>(rng() % 19);
    const double lambda = 1e-2;

    SupervisedGradient grad;
    supervised_objective_and_grad(ctx, label, emb, softmax, opts, lambda, true, m, &grad);
    auto objective = [&] {
      return supervised_objective_and_grad(ctx, label, emb, softmax, opts, lambda, true,
                                           m, nullptr);
    };
    const double h = 1e-5;
    auto numeric = [&](double& x) {
      const double saved = x;
      x = saved + h;
      const double up = objective();
      x = saved - h;
      const double down = objective();
      x = saved;
      return (up - down) / (2 * h);
    };

    double worst = 0.0;
    for (std::size_t i = 0; i < softmax.weights.values().size(); ++i) {
      worst = std::max(worst, relative_error(grad.weights.values()[i],
                                             numeric(softmax.weights.values()[i])));
    }
    for (std::size_t i = 0; i < softmax.bias.size(); ++i) {
      worst = std::max(worst, relative_error(grad.bias[i], numeric(softmax.bias[i])));
    }
    const auto rows = touched_rows(ctx, emb, opts);
    REQUIRE_FALSE(rows.words.empty());
    for (auto id : rows.nouns) {
      for (std::size_t k = 0; k < 4; ++k) {
        worst = std::max(worst, relative_error(grad.nouns.at(id)[k], numeric(emb.nouns(id, k))));
      }
    }
    for (auto id : rows.words) {
      for (std::size_t k = 0; k < 4; ++k) {
        worst = std::max(worst, relative_error(grad.words.at(id)[k], numeric(emb.words(id, k))));
      }
    }
    for (auto id : rows.target_weights) {
      for (std::size_t k = 0; k < emb.target_weight_dim(); ++k) {
        worst = std::max(worst, relative_error(grad.target_weights.at(id)[k],
                                               numeric(emb.target_weights(id, k))));
      }
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("with no data signal the L2 term only shrinks the weights") {
  // Zero embeddings make e = 0, so the weight gradient is -lambda * S.
  auto emb = EmbeddingParams::random_init(2, 1, 6, 3, 4);
  for (auto& x : emb.words.values()) x = 0.0;
  for (auto& x : emb.nouns.values()) x = 0.0;
  NounPairContext ctx;
  ctx.between = {3};
  ctx.before = {2};
  ctx.after = {2};
  const FeatureOptions opts;
  const std::size_t dim = feature_layout(emb, opts).size;
  auto softmax = SoftmaxParams::zeros(19, dim);
  for (auto& x : softmax.weights.values()) x = 0.5;
  SupervisedGradient grad;
  supervised_objective_and_grad(ctx, 0, emb, softmax, opts, 0.1, false, nullptr, &grad);
  for (double g : grad.weights.values()) CHECK(g == doctest::Approx(-0.05));
  CHECK(grad.words.empty());
  const double before = norm2(softmax.weights.values());
  std::vector<double> acc(softmax.weights.values().size(), 0.0);
  adagrad_update(softmax.weights.values(), grad.weights.values(), acc, 0.05);
  CHECK(norm2(softmax.weights.values()) < before);
}

// --- training ----------------------------------------------------------------------------

// Label is a function of the first noun: 8 nouns, 4 classes. With random noun
// embeddings the 8 distinct feature vectors are separable.
std::vector<SemEvalInstance> separable_set(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SemEvalInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    SemEvalInstance inst;
    inst.id = static_cast<int>(i + 1);
    inst.context = random_context(rng, 20, 9, 1, 2);
    inst.context.n1 = 1 + static_cast<NounId>(rng() % 8);
    inst.label = RelationLabel::from_index(static_cast<int>(1 + (inst.context.n1 - 1) % 4));
    out.push_back(std::move(inst));
  }
  return out;
}

SupervisedConfig plain_config() {
  SupervisedConfig config;
  config.eta = 0.1;
  config.lambda = 0.0;
  config.epochs = 50;
  config.dropout = false;
  config.fine_tune = false;
  config.features.between = false;
  config.features.outside = false;
  config.seed = 5;
  return config;
}

double train_accuracy(std::span<const SemEvalInstance> set, const ClassifierTrainResult& r) {
  std::size_t hits = 0;
  for (const auto& inst : set) {
    hits += predict(inst.context, r.model, r.embeddings) == inst.label;
  }
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

TEST_CASE("separable data is fit perfectly within 50 epochs") {
  const auto set = separable_set(120, 6);
  const auto emb = EmbeddingParams::random_init(8, 1, 20, 9, 7);
  const auto result = train_classifier(set, emb, plain_config());
  CHECK(train_accuracy(set, result) == 1.0);
  CHECK(result.epoch_objective.size() == 50);
  CHECK(result.epoch_objective.back() > result.epoch_objective.front());

  auto with_dropout = plain_config();
  with_dropout.dropout = true;
  with_dropout.fine_tune = true;
  with_dropout.features = FeatureOptions{};
  const auto r2 = train_classifier(set, emb, with_dropout);
  CHECK(train_accuracy(set, r2) >= 0.9);
  CHECK(r2.embeddings.all_finite());
}

TEST_CASE("training is reproducible under a seed") {
  const auto set = separable_set(60, 8);
  const auto emb = EmbeddingParams::random_init(4, 2, 20, 9, 9);
  SupervisedConfig config;
  config.epochs = 3;
  const auto a = train_classifier(set, emb, config);
  const auto b = train_classifier(set, emb, config);
  CHECK(a.model == b.model);
  CHECK(a.embeddings == b.embeddings);
  std::ostringstream ba, bb;
  write_classifier(ba, a.model);
  write_classifier(bb, b.model);
  CHECK(ba.str() == bb.str());
}

TEST_CASE("ten times more regularization gives smaller softmax weights") {
  const auto set = separable_set(100, 10);
  const auto emb = EmbeddingParams::random_init(6, 1, 20, 9, 11);
  auto config = plain_config();
  config.epochs = 20;
  double prev = 1e300;
  for (double lambda : {1e-3, 1e-2, 1e-1}) {
    config.lambda = lambda;
    const auto r = train_classifier(set, emb, config);
    const double n = norm2(r.model.softmax.weights.values()) + norm2(r.model.softmax.bias);
    CHECK(n < prev);
    prev = n;
  }
}

TEST_CASE("without fine-tuning the embeddings are untouched") {
  const auto set = separable_set(40, 12);
  const auto emb = random_params(3, 2, 20, 9, 13);
  SupervisedConfig config;
  config.epochs = 2;
  config.fine_tune = false;
  CHECK(train_classifier(set, emb, config).embeddings == emb);
  config.fine_tune = true;
  CHECK_FALSE(train_classifier(set, emb, config).embeddings == emb);
}

TEST_CASE("training input errors") {
  const auto emb = EmbeddingParams::random_init(3, 1, 20, 9, 14);
  const std::vector<SemEvalInstance> none;
  CHECK_THROWS_AS(train_classifier(none, emb, SupervisedConfig{}), std::invalid_argument);
  auto set = separable_set(10, 15);
  auto config = plain_config();
  config.labels = 3;
  CHECK_THROWS_AS(train_classifier(set, emb, config), FormatError);
  config = plain_config();
  config.eta = 0.0;
  CHECK_THROWS_AS(train_classifier(set, emb, config), ConfigError);
  config = plain_config();
  config.lambda = -1.0;
  CHECK_THROWS_AS(train_classifier(set, emb, config), ConfigError);
}

// --- prediction --------------------------------------------------------------------------

TEST_CASE("zero model predicts class 0 by tie-break") {
  const auto emb = random_params(3, 1, 10, 5, 16);
  std::mt19937_64 rng(17);
  ClassifierModel model{SoftmaxParams::zeros(19, feature_layout(emb, {}).size), {}};
  for (int i = 0; i < 20; ++i) {
    CHECK(predict_index(random_context(rng, 10, 5, 0, 2), model, emb) == 0);
  }
}

TEST_CASE("a common shift of all scores keeps the argmax") {
  const auto emb = random_params(3, 1, 10, 5, 18);
  std::mt19937_64 rng(19);
  ClassifierModel model{SoftmaxParams::zeros(19, feature_layout(emb, {}).size), {}};
  std::normal_distribution<double> normal;
  for (auto& x : model.softmax.weights.values()) x = normal(rng);
  for (int i = 0; i < 50; ++i) {
    const auto ctx = random_context(rng, 10, 5, 0, 2);
    const int before = predict_index(ctx, model, emb);
    auto shifted = model;
    for (auto& b : shifted.softmax.bias) b += 123.0;
    CHECK(predict_index(ctx, shifted, emb) == before);
  }
}

TEST_CASE("hand-set two-class model") {
  // d = 1, noun-pair block only: e = (N(n1), N(n2)) = (1, 2).
  auto emb = EmbeddingParams::random_init(1, 1, 4, 3, 0);
  emb.nouns(1, 0) = 1.0;
  emb.nouns(2, 0) = 2.0;
  FeatureOptions opts;
  opts.between = false;
  opts.outside = false;
  ClassifierModel model{SoftmaxParams::zeros(2, 2), opts};
  model.softmax.weights(0, 0) = 1.0;  // o0 = 1
  model.softmax.weights(1, 1) = 1.0;  // o1 = 2 + 0.5
  model.softmax.bias[1] = 0.5;
  NounPairContext ctx;
  ctx.n1 = 1;
  ctx.n2 = 2;
  CHECK(predict(ctx, model, emb).to_string() == "Cause-Effect(e1,e2)");
  model.softmax.bias[1] = -2.0;  // o1 = 0
  CHECK(predict(ctx, model, emb).is_other());
}

// --- cross-validation ------------------------------------------------------------------------

TEST_CASE("8000 instances split into ten folds of 800") {
  const auto fold = fold_assignment(8000, 10, 1);
  std::vector<std::size_t> sizes(10, 0);
  for (auto f : fold) {
    REQUIRE(f < 10);
    ++sizes[f];
  }
  CHECK(sizes == std::vector<std::size_t>(10, 800));
  CHECK(fold_assignment(8000, 10, 1) == fold);
  CHECK(fold_assignment(8000, 10, 2) != fold);
  CHECK_THROWS_AS(fold_assignment(10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(fold_assignment(3, 4, 1), std::invalid_argument);
}

TEST_CASE("uneven folds differ in size by at most one") {
  const auto fold = fold_assignment(103, 10, 3);
  std::vector<std::size_t> sizes(10, 0);
  for (auto f : fold) ++sizes[f];
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  CHECK(*hi - *lo <= 1);
}

TEST_CASE("a one-setting grid equals a direct fold-by-fold evaluation") {
  const auto set = separable_set(80, 20);
  const auto emb = random_params(3, 1, 20, 9, 21);
  SupervisedConfig config;
  config.epochs = 2;
  const std::vector<SupervisedConfig> grid{config};
  const auto cv = cross_validate(set, emb, grid, 4, 9);
  REQUIRE(cv.size() == 1);

  const auto fold = fold_assignment(set.size(), 4, 9);
  double sum = 0.0;
  for (std::size_t f = 0; f < 4; ++f) {
    std::vector<SemEvalInstance> train;
    std::vector<RelationLabel> gold, pred;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (fold[i] != f) train.push_back(set[i]);
    }
    const auto r = train_classifier(train, emb, config);
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (fold[i] != f) continue;
      gold.push_back(set[i].label);
      pred.push_back(predict(set[i].context, r.model, r.embeddings));
    }
    const double f1 = score_semeval(gold, pred).macro_f1;
    CHECK(cv[0].fold_f1[f] == f1);
    sum += f1;
  }
  CHECK(cv[0].mean_f1 == doctest::Approx(sum / 4));
}

// --- classifier files ------------------------------------------------------------------------

TEST_CASE("classifier file round-trip and compatibility check") {
  const auto emb = random_params(3, 2, 10, 5, 22);
  FeatureOptions opts;
  opts.bag_of_words = true;
  opts.m_out = 3;
  ClassifierModel model{SoftmaxParams::zeros(19, feature_layout(emb, opts).size), opts};
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  for (auto& x : model.softmax.weights.values()) x = normal(rng);
  for (auto& x : model.softmax.bias) x = normal(rng);
  std::stringstream buf;
  write_classifier(buf, model);
  CHECK(buf.str().rfind("relemb-clf v1 L=19 dim=" +
                            std::to_string(model.softmax.dim()) + " opts=n+in'+out:mout=3\n",
                        0) == 0);
  CHECK(read_classifier(buf) == model);
  CHECK_NOTHROW(check_compatible(model, emb));

  const auto other = random_params(4, 2, 10, 5, 24);
  try {
    check_compatible(model, other);
    FAIL("expected a dimension mismatch");
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(std::to_string(model.softmax.dim())) != std::string::npos);
    CHECK(msg.find(std::to_string(feature_layout(other, opts).size)) != std::string::npos);
  }
  std::istringstream bad("relemb-clf v1 L=19\n");
  CHECK_THROWS_AS(read_classifier(bad), FormatError);
}

}  // namespace
}  // namespace relemb
