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


// Softmax relation classifier over embedding features, trained with
// single-instance AdaGrad steps, inverted dropout and L2 regularization, and
// optionally fine-tuning the embeddings it reads.

#ifndef RELEMB_CLASSIFIER_HPP_
#define RELEMB_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relemb/common.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"
#include "relemb/features.hpp"
#include "relemb/labels.hpp"

namespace relemb {

// o = S e + s over L labels.
struct SoftmaxParams {
  Matrix weights;             // L x |e|
  std::vector<double> bias;   // L

  static SoftmaxParams zeros(std::size_t labels, std::size_t dim);
  std::size_t labels() const { return weights.rows(); }
  std::size_t dim() const { return weights.cols(); }

  friend bool operator==(const SoftmaxParams&, const SoftmaxParams&) = default;
};

// Max-subtracted softmax of S e + s.
void softmax_forward(std::span<const double> e, const SoftmaxParams& params,
                     std::span<double> probs);
std::vector<double> softmax_forward(std::span<const double> e,
                                    const SoftmaxParams& params);

inline constexpr double kDropoutRate = 0.5;

// Per-element multipliers: 0 for dropped elements, 1/(1-rate) = 2 for kept.
struct DropoutMask {
  std::vector<double> scale;
};

DropoutMask draw_dropout_mask(std::size_t size, Rng& rng);
void apply_mask(std::span<double> e, const DropoutMask& mask);
// Draws a mask and applies it to `e` in place.
DropoutMask apply_dropout(std::span<double> e, Rng& rng);

inline constexpr double kAdaGradEpsilon = 1e-6;

// Element-wise AdaGrad ascent: acc += g^2; p += eta * g / (sqrt(acc) + eps).
void adagrad_update(std::span<double> param, std::span<const double> grad,
                    std::span<double> accumulator, double eta,
                    double epsilon = kAdaGradEpsilon);

// Row-wise AdaGrad with one accumulator per row: acc += mean(g^2).
void rowwise_adagrad_update(std::span<double> row, std::span<const double> grad,
                            double& accumulator, double eta,
                            double epsilon = kAdaGradEpsilon);

struct SupervisedConfig {
  double eta = 0.05;       // AdaGrad base learning rate
  double lambda = 1e-5;    // L2 strength
  std::size_t epochs = 10;
  bool dropout = true;
  bool fine_tune = true;
  std::size_t labels = kNumLabels;
  FeatureOptions features;
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void validate() const;
};

// Gradient of one instance's objective. Embedding gradients are sparse and
// keyed by row id; they are empty unless fine-tuning.
struct SupervisedGradient {
  Matrix weights;
  std::vector<double> bias;
  std::map<std::uint32_t, std::vector<double>> nouns;
  std::map<std::uint32_t, std::vector<double>> words;
  std::map<std::uint32_t, std::vector<double>> target_weights;
};

// Embedding rows the instance's feature vector reads.
struct TouchedRows {
  std::vector<NounId> nouns;
  std::vector<WordId> words;
  std::vector<WordId> target_weights;
};

TouchedRows touched_rows(const NounPairContext& ctx, const EmbeddingParams& params,
                         const FeatureOptions& options);

// log p(label | mask * e) - (lambda/2) * ||theta_touched||^2, where
// theta_touched is S, s and, when fine-tuning, the embedding rows the instance
// reads. Fills `grad` (if non-null) with the gradient of that value.
double supervised_objective_and_grad(const NounPairContext& ctx, int label,
                                     const EmbeddingParams& embeddings,
                                     const SoftmaxParams& softmax,
                                     const FeatureOptions& options, double lambda,
                                     bool fine_tune, const DropoutMask* mask,
                                     SupervisedGradient* grad);

struct ClassifierModel {
  SoftmaxParams softmax;
  FeatureOptions features;

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

struct ClassifierTrainResult {
  ClassifierModel model;
  EmbeddingParams embeddings;
  std::vector<double> epoch_objective;
};

// Zero-initialized S and s; shuffled single-instance epochs. Throws
// std::invalid_argument on an empty set and FormatError on a label index
// outside [0, labels).
ClassifierTrainResult train_classifier(std::span<const SemEvalInstance> instances,
                                       EmbeddingParams embeddings,
                                       const SupervisedConfig& config);

// Argmax of the dropout-free softmax; ties go to the lowest index.
int predict_index(const NounPairContext& ctx, const ClassifierModel& model,
                  const EmbeddingParams& embeddings);
RelationLabel predict(const NounPairContext& ctx, const ClassifierModel& model,
                      const EmbeddingParams& embeddings);

// Seeded shuffle split; fold f receives shuffled positions
// [f*n/folds, (f+1)*n/folds). Throws std::invalid_argument if folds < 2 or
// folds > n.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds,
                                         std::uint64_t seed);

struct CvResult {
  SupervisedConfig config;
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
  double mean_accuracy = 0.0;
};

// Evaluates every setting on the same fold split.
std::vector<CvResult> cross_validate(std::span<const SemEvalInstance> instances,
                                     const EmbeddingParams& embeddings,
                                     std::span<const SupervisedConfig> grid,
                                     std::size_t folds, std::uint64_t split_seed);

// Header "relemb-clf v1 L=<L> dim=<|e|> opts=<flags>" then little-endian
// float64 S (row per label) and s.
void write_classifier(std::ostream& out, const ClassifierModel& model);
ClassifierModel read_classifier(std::istream& in);
void save_classifier(const std::string& path, const ClassifierModel& model);
ClassifierModel load_classifier(const std::string& path);

// Throws FormatError naming both dimensions when the classifier was not
// trained on features of these embeddings.
void check_compatible(const ClassifierModel& model, const EmbeddingParams& embeddings);

}  // namespace relemb

#endif  // RELEMB_CLASSIFIER_HPP_
