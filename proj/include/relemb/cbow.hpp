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


// Continuous bag-of-words word embeddings with negative sampling and
// subsampling, used to initialize the noun-pair model for the word2vec
// baseline.

#ifndef RELEMB_CBOW_HPP_
#define RELEMB_CBOW_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relemb/common.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"
#include "relemb/sampling.hpp"

namespace relemb {

struct CbowConfig {
  std::size_t dim = 100;
  std::size_t window = 3;
  std::size_t negatives = 25;
  double alpha = 0.025;
  double threshold = 1e-5;
  std::size_t epochs = 1;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  // Throws ConfigError.
  void validate() const;
};

// Input and output vectors, one row per word surface.
struct CbowModel {
  std::size_t dim = 0;
  std::size_t window = 0;
  std::vector<std::string> words;
  Matrix input;
  Matrix output;

  friend bool operator==(const CbowModel&, const CbowModel&) = default;
};

using EncodedSentence = std::vector<WordId>;

EncodedSentence encode_sentence(const TaggedSentence& sentence,
                                const Vocabulary& vocab);

// Mean of the input vectors of the up-to-c words on each side of position t.
// Returns the number of context words (0 leaves `out` zeroed).
std::size_t cbow_context(std::span<const WordId> sentence, std::size_t t,
                         std::size_t window, const CbowModel& model,
                         std::span<double> out);

// log sigma(v_out(w_t) . h) + sum_j log sigma(-v_out(noise_j) . h).
double cbow_objective(std::span<const WordId> sentence, std::size_t t,
                      std::span<const WordId> noise, const CbowModel& model);

// One ascent step on cbow_objective with gradients at the pre-update values;
// the context gradient is split evenly over the context words. Returns the
// objective before the update.
double cbow_step(std::span<const WordId> sentence, std::size_t t,
                 std::span<const WordId> noise, CbowModel& model, double lr);

struct CbowReport {
  std::uint64_t tokens_planned = 0;
  std::uint64_t tokens_discarded = 0;
  std::uint64_t tokens_trained = 0;
  double mean_objective = 0.0;
};

// Input vectors start uniform in [-0.5/d, 0.5/d), output vectors at zero.
// Subsampled tokens are dropped from a sentence before windows are formed.
// Throws std::invalid_argument when there are no tokens.
CbowModel train_cbow(std::span<const EncodedSentence> sentences,
                     const Vocabulary& vocab, const CbowConfig& config,
                     CbowReport* report = nullptr);

struct ImportReport {
  std::vector<std::string> missing_words;
  std::vector<std::string> missing_nouns;
};

// Builds noun-pair model parameters from CBOW vectors: N and W rows copy the
// input vectors of the same surface, the prediction weights are the output
// vectors (width d) and biases are zero. Surfaces absent from the CBOW model
// take the UNK vector and are listed in `report`. Throws FormatError if the
// CBOW model has no UNK entry.
EmbeddingParams import_as_initialization(const CbowModel& cbow,
                                         const Vocabulary& vocab,
                                         std::size_t window,
                                         ImportReport* report = nullptr);

// Wraps externally trained vectors. Without output vectors the prediction
// weights are zero.
CbowModel cbow_from_text_vectors(const TextVectors& input,
                                 const TextVectors* output, std::size_t window);

// Header "relemb-cbow v1 d=<d> c=<c> nwords=<n>", n surface lines, then
// little-endian float64 input and output blocks.
void write_cbow(std::ostream& out, const CbowModel& model);
CbowModel read_cbow(std::istream& in);
void save_cbow(const std::string& path, const CbowModel& model);
CbowModel load_cbow(const std::string& path);

}  // namespace relemb

#endif  // RELEMB_CBOW_HPP_
