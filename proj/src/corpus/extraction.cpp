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


#include "relemb/corpus.hpp"

namespace relemb {

NounPairContext make_context(std::span<const WordId> word_ids, std::size_t first,
                             std::size_t second, NounId n1, NounId n2,
                             std::size_t m_out) {
  NounPairContext ctx;
  ctx.n1 = n1;
  ctx.n2 = n2;
  ctx.between.assign(word_ids.begin() + first + 1, word_ids.begin() + second);
  ctx.before.assign(m_out, Vocabulary::kNullWord);
  ctx.after.assign(m_out, Vocabulary::kNullWord);
  for (std::size_t j = 0; j < m_out && j < first; ++j) {
    ctx.before[m_out - 1 - j] = word_ids[first - 1 - j];
  }
  for (std::size_t j = 0; j < m_out && second + 1 + j < word_ids.size(); ++j) {
    ctx.after[j] = word_ids[second + 1 + j];
  }
  return ctx;
}

std::vector<NounPairContext> extract_noun_pair_contexts(
    const TaggedSentence& sentence, const Vocabulary& vocab,
    const ExtractionOptions& options, std::uint64_t sentence_ref) {
  std::vector<NounPairContext> out;
  std::vector<std::size_t> noun_positions;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (is_noun_tag(sentence.tokens[i].pos)) noun_positions.push_back(i);
  }
  if (noun_positions.size() < 2) return out;

  std::vector<WordId> ids;
  ids.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) ids.push_back(vocab.word_id(tok.surface));

  for (std::size_t a = 0; a < noun_positions.size(); ++a) {
    const std::size_t p = noun_positions[a];
    for (std::size_t b = a + 1; b < noun_positions.size(); ++b) {
      const std::size_t q = noun_positions[b];
      const std::size_t gap = q - p - 1;
      if (gap > options.max_between) break;
      if (gap < options.min_between) continue;
      NounPairContext ctx =
          make_context(ids, p, q, vocab.noun_id(sentence.tokens[p].surface),
                       vocab.noun_id(sentence.tokens[q].surface), options.m_out);
      ctx.sentence_ref = sentence_ref;
      out.push_back(std::move(ctx));
    }
  }
  return out;
}

}  // namespace relemb
