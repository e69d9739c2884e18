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


#ifndef RELEMB_EVAL_HPP_
#define RELEMB_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relemb/classifier.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"

namespace relemb {

struct WordSimPair {
  std::string word1;
  std::string word2;
  double score = 0.0;
};

// Comma- or tab-separated "word1,word2,score". Lines starting with '#' and a
// header line whose score field is not numeric are skipped.
std::vector<WordSimPair> read_wordsim(std::istream& in);

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. Returns 0 when either side is
// constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

enum class EmbeddingTable { kNouns, kWords };

struct WordSimResult {
  double rho = 0.0;
  std::size_t pairs = 0;
  std::size_t oov_pairs = 0;  // pairs with at least one word scored via UNK
  std::vector<std::string> oov_words;
};

WordSimResult spearman_wordsim(std::span<const WordSimPair> pairs,
                               EmbeddingTable table, const EmbeddingParams& params,
                               const Vocabulary& vocab);

struct NgramScore {
  std::string surface;  // space-joined, "NULL" for padded slots
  double score = 0.0;
};

// Scores every n-gram embedding (n = 1, 3, ..., 2c+1) occurring between the
// noun pairs of `instances` against the g_in columns of S for `class_index`;
// window slots beyond (n-1)/2 are masked to NULL. Returns the top_k distinct
// surfaces by score (ties by surface). Throws std::invalid_argument if the
// model has no g_in block or n is not an odd number in [1, 2c+1].
std::vector<NgramScore> top_ngrams(const ClassifierModel& model,
                                   const EmbeddingParams& params,
                                   const Vocabulary& vocab,
                                   std::span<const SemEvalInstance> instances,
                                   int class_index, std::size_t n,
                                   std::size_t top_k);

struct AblationRow {
  std::string name;
  FeatureOptions features;
  CvResult cv;
};

// The five feature combinations g_n; g_in; g_in'; g_n+g_in; g_n+g_in+g_out,
// each cross-validated on the same split with `base`'s other settings.
std::vector<std::pair<std::string, FeatureOptions>> ablation_settings(
    std::optional<std::size_t> m_out);
std::vector<AblationRow> run_ablations(std::span<const SemEvalInstance> instances,
                                       const EmbeddingParams& params,
                                       const SupervisedConfig& base,
                                       std::size_t folds, std::uint64_t split_seed);

}  // namespace relemb

#endif  // RELEMB_EVAL_HPP_
