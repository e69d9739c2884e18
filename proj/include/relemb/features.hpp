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


// Classification features built from trained embeddings:
//   g_n   = [N(n1); N(n2)]                                   2d
//   g_in  = mean over i of h_i, where
//           h_i = [W(w[i-1]) .. W(w[i-c]); W(w[i+1]) .. W(w[i+c]); W~(w[i])]
//   g_in' = mean over i of [W(w[i]); W~(w[i])]   (bag-of-words ablation)
//   g_out = [mean W(before); mean W(after)]                  2d
// concatenated in that fixed order.

#ifndef RELEMB_FEATURES_HPP_
#define RELEMB_FEATURES_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"

namespace relemb {

struct FeatureOptions {
  bool noun_pair = true;     // g_n
  bool between = true;       // g_in (or g_in' when bag_of_words)
  bool outside = true;       // g_out
  bool bag_of_words = false;
  // Use only the nearest m_out outside words (must not exceed the context's).
  std::optional<std::size_t> m_out;

  // Throws ConfigError if no block is enabled.
  void validate() const;

  // Compact flag string, e.g. "n+in+out", "in'", "n+in+out:mout=3".
  std::string flags() const;
  static FeatureOptions parse_flags(std::string_view flags);

  friend bool operator==(const FeatureOptions&, const FeatureOptions&) = default;
};

enum class FeatureBlockKind { kNounPair, kBetween, kBetweenBagOfWords, kOutside };

struct FeatureBlock {
  FeatureBlockKind kind;
  std::size_t offset;
  std::size_t length;
};

struct FeatureLayout {
  std::vector<FeatureBlock> blocks;
  std::size_t size = 0;

  // nullopt if the block is not part of the layout.
  std::optional<FeatureBlock> find(FeatureBlockKind kind) const;
};

FeatureLayout feature_layout(const EmbeddingParams& params,
                             const FeatureOptions& options);

// |h_i| = 2cd + |W~ row|; 4d(1+c) for pretrained parameters.
std::size_t ngram_dim(const EmbeddingParams& params);

struct FeatureVector {
  std::vector<double> values;
  FeatureLayout layout;
};

void noun_pair_features(const NounPairContext& ctx, const EmbeddingParams& params,
                        std::span<double> out);

// h_i for the 0-based position i. Throws std::out_of_range if i >= M_in.
void ngram_embedding(const NounPairContext& ctx, std::size_t i,
                     const EmbeddingParams& params, std::span<double> out);

// h_i with window slots farther than `radius` from i replaced by NULL. Used
// to score n-grams with n = 2*radius + 1 < 2c + 1.
void masked_ngram_embedding(const NounPairContext& ctx, std::size_t i,
                            std::size_t radius, const EmbeddingParams& params,
                            std::span<double> out);

// Mean of h_i; zero vector when M_in = 0.
void between_features(const NounPairContext& ctx, const EmbeddingParams& params,
                      std::span<double> out);

// Mean of [W(w_i); W~(w_i)]; zero vector when M_in = 0.
void between_bag_of_words(const NounPairContext& ctx,
                          const EmbeddingParams& params, std::span<double> out);

// `m_out` nearest outside words on each side (all when nullopt).
void outside_features(const NounPairContext& ctx, const EmbeddingParams& params,
                      std::optional<std::size_t> m_out, std::span<double> out);

FeatureVector assemble_features(const NounPairContext& ctx,
                                const EmbeddingParams& params,
                                const FeatureOptions& options);

// Writes into `out` (length layout.size) without allocating.
void assemble_features(const NounPairContext& ctx, const EmbeddingParams& params,
                       const FeatureOptions& options, const FeatureLayout& layout,
                       std::span<double> out);

// Outside-window ids actually used under an m_out override.
std::span<const WordId> outside_before(const NounPairContext& ctx,
                                       std::optional<std::size_t> m_out);
std::span<const WordId> outside_after(const NounPairContext& ctx,
                                      std::optional<std::size_t> m_out);

// Debug dump: one "id<TAB>label<TAB>v1,v2,..." line per instance.
void write_feature_dump(std::ostream& out, std::span<const SemEvalInstance> instances,
                        const EmbeddingParams& params, const FeatureOptions& options);

}  // namespace relemb

#endif  // RELEMB_FEATURES_HPP_
