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


#include "relemb/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "../binary_io.hpp"
#include "relemb/scoring.hpp"

namespace relemb {

SoftmaxParams SoftmaxParams::zeros(std::size_t labels, std::size_t dim) {
  return {Matrix(labels, dim), std::vector<double>(labels, 0.0)};
}

void softmax_forward(std::span<const double> e, const SoftmaxParams& params,
                     std::span<double> probs) {
  const std::size_t L = params.labels();
  double max_o = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < L; ++i) {
    probs[i] = dot(params.weights.row(i), e) + params.bias[i];
    max_o = std::max(max_o, probs[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    probs[i] = std::exp(probs[i] - max_o);
    z += probs[i];
  }
  for (std::size_t i = 0; i < L; ++i) probs[i] /= z;
}

std::vector<double> softmax_forward(std::span<const double> e,
                                    const SoftmaxParams& params) {
  std::vector<double> probs(params.labels());
  softmax_forward(e, params, probs);
  return probs;
}

DropoutMask draw_dropout_mask(std::size_t size, Rng& rng) {
  DropoutMask mask;
  mask.scale.resize(size);
  const double keep_scale = 1.0 / (1.0 - kDropoutRate);
  for (double& s : mask.scale) s = uniform01(rng) < kDropoutRate ? 0.0 : keep_scale;
  return mask;
}

void apply_mask(std::span<double> e, const DropoutMask& mask) {
  for (std::size_t i = 0; i < e.size(); ++i) e[i] *= mask.scale[i];
}

DropoutMask apply_dropout(std::span<double> e, Rng& rng) {
  DropoutMask mask = draw_dropout_mask(e.size(), rng);
  apply_mask(e, mask);
  return mask;
}

void adagrad_update(std::span<double> param, std::span<const double> grad,
                    std::span<double> accumulator, double eta, double epsilon) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    accumulator[i] += grad[i] * grad[i];
    param[i] += eta * grad[i] / (std::sqrt(accumulator[i]) + epsilon);
  }
}

void rowwise_adagrad_update(std::span<double> row, std::span<const double> grad,
                            double& accumulator, double eta, double epsilon) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  accumulator += sq / static_cast<double>(grad.size());
  const double step = eta / (std::sqrt(accumulator) + epsilon);
  axpy(step, grad, row);
}

void SupervisedConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (labels < 2) throw ConfigError("need at least two labels");
  features.validate();
}

TouchedRows touched_rows(const NounPairContext& ctx, const EmbeddingParams& params,
                         const FeatureOptions& options) {
  std::set<std::uint32_t> nouns, words, targets;
  if (options.noun_pair) {
    nouns.insert(ctx.n1);
    nouns.insert(ctx.n2);
  }
  if (options.between) {
    for (auto w : ctx.between) targets.insert(w);
    if (options.bag_of_words) {
      for (auto w : ctx.between) words.insert(w);
    } else {
      std::vector<WordId> nb(2 * params.window);
      for (std::size_t i = 0; i < ctx.m_in(); ++i) {
        window_neighbors(ctx, i, params.window, nb);
        words.insert(nb.begin(), nb.end());
      }
    }
  }
  if (options.outside) {
    for (auto w : outside_before(ctx, options.m_out)) words.insert(w);
    for (auto w : outside_after(ctx, options.m_out)) words.insert(w);
  }
  return {{nouns.begin(), nouns.end()},
          {words.begin(), words.end()},
          {targets.begin(), targets.end()}};
}

namespace {

using RowGrads = std::map<std::uint32_t, std::vector<double>>;

std::span<double> grad_row(RowGrads& grads, std::uint32_t id, std::size_t len) {
  auto& row = grads[id];
  if (row.empty()) row.assign(len, 0.0);
  return row;
}

// Routes d(objective)/d(e) into the embedding rows each block reads.
void backprop_features(const NounPairContext& ctx, const EmbeddingParams& params,
                       const FeatureOptions& options, const FeatureLayout& layout,
                       std::span<const double> grad_e, SupervisedGradient& grad) {
  const std::size_t d = params.dim;
  const std::size_t c = params.window;
  const std::size_t td = params.target_weight_dim();
  for (const auto& block : layout.blocks) {
    const auto g = grad_e.subspan(block.offset, block.length);
    switch (block.kind) {
      case FeatureBlockKind::kNounPair:
        axpy(1.0, g.subspan(0, d), grad_row(grad.nouns, ctx.n1, d));
        axpy(1.0, g.subspan(d, d), grad_row(grad.nouns, ctx.n2, d));
        break;
      case FeatureBlockKind::kBetween: {
        const std::size_t m_in = ctx.m_in();
        if (m_in == 0) break;
        const double inv = 1.0 / static_cast<double>(m_in);
        std::vector<WordId> nb(2 * c);
        for (std::size_t i = 0; i < m_in; ++i) {
          window_neighbors(ctx, i, c, nb);
          for (std::size_t s = 0; s < 2 * c; ++s) {
            axpy(inv, g.subspan(s * d, d), grad_row(grad.words, nb[s], d));
          }
          axpy(inv, g.subspan(2 * c * d, td),
               grad_row(grad.target_weights, ctx.between[i], td));
        }
        break;
      }
      case FeatureBlockKind::kBetweenBagOfWords: {
        const std::size_t m_in = ctx.m_in();
        if (m_in == 0) break;
        const double inv = 1.0 / static_cast<double>(m_in);
        for (auto w : ctx.between) {
          axpy(inv, g.subspan(0, d), grad_row(grad.words, w, d));
          axpy(inv, g.subspan(d, td), grad_row(grad.target_weights, w, td));
        }
        break;
      }
      case FeatureBlockKind::kOutside: {
        const auto before = outside_before(ctx, options.m_out);
        const auto after = outside_after(ctx, options.m_out);
        for (auto w : before) {
          axpy(1.0 / static_cast<double>(before.size()), g.subspan(0, d),
               grad_row(grad.words, w, d));
        }
        for (auto w : after) {
          axpy(1.0 / static_cast<double>(after.size()), g.subspan(d, d),
               grad_row(grad.words, w, d));
        }
        break;
      }
    }
  }
}

double squared_norm(std::span<const double> v) { return dot(v, v); }

}  // namespace

double supervised_objective_and_grad(const NounPairContext& ctx, int label,
                                     const EmbeddingParams& embeddings,
                                     const SoftmaxParams& softmax,
                                     const FeatureOptions& options, double lambda,
                                     bool fine_tune, const DropoutMask* mask,
                                     SupervisedGradient* grad) {
  const FeatureLayout layout = feature_layout(embeddings, options);
  if (layout.size != softmax.dim()) {
    throw std::invalid_argument("feature length does not match the softmax weights");
  }
  const std::size_t L = softmax.labels();
  std::vector<double> e(layout.size);
  assemble_features(ctx, embeddings, options, layout, e);
  if (mask != nullptr) apply_mask(e, *mask);

  std::vector<double> o(L);
  double max_o = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < L; ++i) {
    o[i] = dot(softmax.weights.row(i), e) + softmax.bias[i];
    max_o = std::max(max_o, o[i]);
  }
  double z = 0.0;
  for (double x : o) z += std::exp(x - max_o);
  const double log_z = max_o + std::log(z);
  double objective = o[label] - log_z;

  double penalty = squared_norm(softmax.weights.values()) + squared_norm(softmax.bias);
  TouchedRows rows;
  if (fine_tune) {
    rows = touched_rows(ctx, embeddings, options);
    for (auto id : rows.nouns) penalty += squared_norm(embeddings.nouns.row(id));
    for (auto id : rows.words) penalty += squared_norm(embeddings.words.row(id));
    for (auto id : rows.target_weights) {
      penalty += squared_norm(embeddings.target_weights.row(id));
    }
  }
  objective -= 0.5 * lambda * penalty;
  if (grad == nullptr) return objective;

  // d/d o = onehot(label) - p
  std::vector<double> grad_o(L);
  for (std::size_t i = 0; i < L; ++i) grad_o[i] = -std::exp(o[i] - log_z);
  grad_o[label] += 1.0;

  if (grad->weights.rows() != L || grad->weights.cols() != layout.size) {
    grad->weights = Matrix(L, layout.size);
  }
  grad->bias.assign(L, 0.0);
  grad->nouns.clear();
  grad->words.clear();
  grad->target_weights.clear();
  for (std::size_t i = 0; i < L; ++i) {
    auto gw = grad->weights.row(i);
    const auto w = softmax.weights.row(i);
    for (std::size_t j = 0; j < layout.size; ++j) {
      gw[j] = grad_o[i] * e[j] - lambda * w[j];
    }
    grad->bias[i] = grad_o[i] - lambda * softmax.bias[i];
  }
  if (!fine_tune) return objective;

  std::vector<double> grad_e(layout.size, 0.0);
  for (std::size_t i = 0; i < L; ++i) axpy(grad_o[i], softmax.weights.row(i), grad_e);
  if (mask != nullptr) apply_mask(grad_e, *mask);
  backprop_features(ctx, embeddings, options, layout, grad_e, *grad);

  const std::size_t d = embeddings.dim;
  const std::size_t td = embeddings.target_weight_dim();
  for (auto id : rows.nouns) {
    axpy(-lambda, embeddings.nouns.row(id), grad_row(grad->nouns, id, d));
  }
  for (auto id : rows.words) {
    axpy(-lambda, embeddings.words.row(id), grad_row(grad->words, id, d));
  }
  for (auto id : rows.target_weights) {
    axpy(-lambda, embeddings.target_weights.row(id),
         grad_row(grad->target_weights, id, td));
  }
  return objective;
}

ClassifierTrainResult train_classifier(std::span<const SemEvalInstance> instances,
                                       EmbeddingParams embeddings,
                                       const SupervisedConfig& config) {
  config.validate();
  if (instances.empty()) throw std::invalid_argument("no training instances");
  for (const auto& inst : instances) {
    if (inst.label.index() >= static_cast<int>(config.labels)) {
      throw FormatError("instance " + std::to_string(inst.id) + " has label '" +
                        inst.label.to_string() + "' outside the label set");
    }
  }
  embeddings.check_shapes();
  const FeatureLayout layout = feature_layout(embeddings, config.features);

  ClassifierTrainResult result;
  result.model.features = config.features;
  result.model.softmax = SoftmaxParams::zeros(config.labels, layout.size);
  SoftmaxParams& softmax = result.model.softmax;

  std::vector<double> weight_acc(config.labels * layout.size, 0.0);
  std::vector<double> bias_acc(config.labels, 0.0);
  std::vector<double> noun_acc, word_acc, target_acc;
  if (config.fine_tune) {
    noun_acc.assign(embeddings.num_nouns(), 0.0);
    word_acc.assign(embeddings.num_words(), 0.0);
    target_acc.assign(embeddings.num_words(), 0.0);
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  SupervisedGradient grad;
  DropoutMask mask;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (auto idx : order) {
      const auto& inst = instances[idx];
      if (config.dropout) mask = draw_dropout_mask(layout.size, rng);
      total += supervised_objective_and_grad(
          inst.context, inst.label.index(), embeddings, softmax, config.features,
          config.lambda, config.fine_tune, config.dropout ? &mask : nullptr, &grad);
      adagrad_update(softmax.weights.values(), grad.weights.values(), weight_acc,
                     config.eta);
      adagrad_update(softmax.bias, grad.bias, bias_acc, config.eta);
      if (!config.fine_tune) continue;
      for (const auto& [id, g] : grad.nouns) {
        rowwise_adagrad_update(embeddings.nouns.row(id), g, noun_acc[id], config.eta);
      }
      for (const auto& [id, g] : grad.words) {
        rowwise_adagrad_update(embeddings.words.row(id), g, word_acc[id], config.eta);
      }
      for (const auto& [id, g] : grad.target_weights) {
        rowwise_adagrad_update(embeddings.target_weights.row(id), g, target_acc[id],
                               config.eta);
      }
    }
    result.epoch_objective.push_back(total);
  }
  result.embeddings = std::move(embeddings);
  return result;
}

int predict_index(const NounPairContext& ctx, const ClassifierModel& model,
                  const EmbeddingParams& embeddings) {
  const FeatureVector fv = assemble_features(ctx, embeddings, model.features);
  const auto& sm = model.softmax;
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sm.labels(); ++i) {
    const double o = dot(sm.weights.row(i), fv.values) + sm.bias[i];
    if (o > best_score) {
      best_score = o;
      best = static_cast<int>(i);
    }
  }
  return best;
}

RelationLabel predict(const NounPairContext& ctx, const ClassifierModel& model,
                      const EmbeddingParams& embeddings) {
  return RelationLabel::from_index(predict_index(ctx, model, embeddings));
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds,
                                         std::uint64_t seed) {
  if (folds < 2 || folds > n) {
    throw std::invalid_argument("fold count must be in [2, number of instances]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t f = 0; f < folds; ++f) {
    for (std::size_t p = f * n / folds; p < (f + 1) * n / folds; ++p) {
      fold[order[p]] = f;
    }
  }
  return fold;
}

std::vector<CvResult> cross_validate(std::span<const SemEvalInstance> instances,
                                     const EmbeddingParams& embeddings,
                                     std::span<const SupervisedConfig> grid,
                                     std::size_t folds, std::uint64_t split_seed) {
  const auto fold = fold_assignment(instances.size(), folds, split_seed);
  std::vector<CvResult> results;
  for (const auto& config : grid) {
    CvResult r;
    r.config = config;
    double acc_sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<SemEvalInstance> train, held_out;
      for (std::size_t i = 0; i < instances.size(); ++i) {
        (fold[i] == f ? held_out : train).push_back(instances[i]);
      }
      const auto trained = train_classifier(train, embeddings, config);
      std::vector<RelationLabel> gold, pred;
      for (const auto& inst : held_out) {
        gold.push_back(inst.label);
        pred.push_back(predict(inst.context, trained.model, trained.embeddings));
      }
      const EvalReport rep = score_semeval(gold, pred);
      r.fold_f1.push_back(rep.macro_f1);
      acc_sum += rep.accuracy;
    }
    r.mean_f1 = std::accumulate(r.fold_f1.begin(), r.fold_f1.end(), 0.0) /
                static_cast<double>(folds);
    r.mean_accuracy = acc_sum / static_cast<double>(folds);
    results.push_back(std::move(r));
  }
  return results;
}

void write_classifier(std::ostream& out, const ClassifierModel& model) {
  out << "relemb-clf v1 L=" << model.softmax.labels()
      << " dim=" << model.softmax.dim() << " opts=" << model.features.flags()
      << '\n';
  binary::write_f64s(out, model.softmax.weights.values());
  binary::write_f64s(out, model.softmax.bias);
  if (!out) throw std::runtime_error("failed writing classifier");
}

ClassifierModel read_classifier(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("relemb-clf v1 ", 0) != 0) {
    throw FormatError("not a relemb-clf v1 file");
  }
  std::istringstream hs(header.substr(14));
  std::size_t labels = 0, dim = 0;
  std::string opts;
  std::string field;
  while (hs >> field) {
    if (field.rfind("L=", 0) == 0) {
      labels = std::stoul(field.substr(2));
    } else if (field.rfind("dim=", 0) == 0) {
      dim = std::stoul(field.substr(4));
    } else if (field.rfind("opts=", 0) == 0) {
      opts = field.substr(5);
    }
  }
  if (labels < 2 || dim == 0 || opts.empty()) {
    throw FormatError("incomplete classifier header: '" + header + "'");
  }
  ClassifierModel model;
  model.features = FeatureOptions::parse_flags(opts);
  model.softmax = SoftmaxParams::zeros(labels, dim);
  binary::read_f64s(in, model.softmax.weights.values());
  binary::read_f64s(in, model.softmax.bias);
  return model;
}

void save_classifier(const std::string& path, const ClassifierModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_classifier(out, model);
}

ClassifierModel load_classifier(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_classifier(in);
}

void check_compatible(const ClassifierModel& model, const EmbeddingParams& embeddings) {
  const std::size_t expected = feature_layout(embeddings, model.features).size;
  if (expected != model.softmax.dim()) {
    throw FormatError("classifier expects feature dim " +
                      std::to_string(model.softmax.dim()) + " but the model (d=" +
                      std::to_string(embeddings.dim) + ", c=" +
                      std::to_string(embeddings.window) + ") yields feature dim " +
                      std::to_string(expected));
  }
}

}  // namespace relemb
