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


#ifndef RELEMB_EMBEDDINGS_HPP_
#define RELEMB_EMBEDDINGS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "relemb/common.hpp"
#include "relemb/corpus.hpp"

namespace relemb {

// Learned parameters of the noun-pair model.
//
//   nouns           |noun inventory| x d       noun-pair embeddings
//   words           |word inventory| x d       word embeddings (NULL, UNK rows)
//   target_weights  |word inventory| x k       per-word prediction weights
//   target_bias     |word inventory|
//
// For pretrained models k = 2d(2+window), the length of the prediction
// feature vector. Models imported from CBOW use k = d.
struct EmbeddingParams {
  std::size_t dim = 0;
  std::size_t window = 0;
  Matrix nouns;
  Matrix words;
  Matrix target_weights;
  std::vector<double> target_bias;

  // Length of the pretraining feature vector, 2d(2+c).
  std::size_t predictor_dim() const { return 2 * dim * (2 + window); }
  std::size_t target_weight_dim() const { return target_weights.cols(); }
  std::size_t num_words() const { return words.rows(); }
  std::size_t num_nouns() const { return nouns.rows(); }

  // N and W drawn from a zero-mean Gaussian with variance 1/d; prediction
  // weights and biases are zero.
  static EmbeddingParams random_init(std::size_t dim, std::size_t window,
                                     std::size_t num_words,
                                     std::size_t num_nouns, std::uint64_t seed);

  // Throws FormatError if any block's shape is inconsistent with dim/window.
  void check_shapes() const;
  bool all_finite() const;

  friend bool operator==(const EmbeddingParams&, const EmbeddingParams&) = default;
};

// Writes the 2c neighbor ids of the 0-based target position t in the order
// w[t-1] .. w[t-c], w[t+1] .. w[t+c]; out-of-span slots get the NULL id.
void window_neighbors(const NounPairContext& ctx, std::size_t target,
                      std::size_t window, std::span<WordId> out);

// Binary model file: text header line
//   relemb-model v1 d=<d> c=<c> nwords=<n> nnouns=<m> [tdim=<k>]
// then little-endian float64 blocks N, W, W_tilde, b. Each block stores one
// vocabulary entry's vector contiguously. tdim is written only when it
// differs from 2d(2+c).
void write_model(std::ostream& out, const EmbeddingParams& params);
EmbeddingParams read_model(std::istream& in);
void save_model(const std::string& path, const EmbeddingParams& params);
EmbeddingParams load_model(const std::string& path);

// Interchange text format: one "word v1 ... vd" line per row.
void write_text_vectors(std::ostream& out, const Matrix& vectors,
                        const Inventory& inventory);

struct TextVectors {
  std::vector<std::string> words;
  Matrix vectors;
};

// Accepts an optional word2vec-style "<rows> <dim>" first line. Throws
// FormatError on ragged rows.
TextVectors read_text_vectors(std::istream& in);

}  // namespace relemb

#endif  // RELEMB_EMBEDDINGS_HPP_
