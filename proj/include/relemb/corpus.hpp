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

// Corpus ingestion: POS-tagged sentences, vocabularies, noun-pair context
// extraction and the SemEval-2010 Task 8 labeled format.

#ifndef RELEMB_CORPUS_HPP_
#define RELEMB_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relemb/common.hpp"
#include "relemb/labels.hpp"

namespace relemb {

struct TaggedToken {
  std::string surface;
  std::string pos;
};

struct TaggedSentence {
  std::vector<TaggedToken> tokens;
};

// NN, NNS, NNP, NNPS.
bool is_noun_tag(std::string_view pos);

// Streams sentences from the two-column "surface<TAB>POS" format. Blank lines
// end sentences; lines that do not have exactly two non-empty tab-separated
// fields are skipped and counted.
class TaggedCorpusReader {
 public:
  explicit TaggedCorpusReader(std::istream& in) : in_(in) {}

  // Returns the next sentence, or nullopt at end of input. Throws DecodeError
  // (with the line number) on invalid UTF-8.
  std::optional<TaggedSentence> next();

  std::size_t malformed_lines() const { return malformed_lines_; }
  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t malformed_lines_ = 0;
  std::size_t line_number_ = 0;
};

struct CorpusParseStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t malformed_lines = 0;
};

std::vector<TaggedSentence> parse_tagged_corpus(std::istream& in,
                                                CorpusParseStats* stats = nullptr);

// A frequency-ranked inventory of surface forms. Entries [0, num_special())
// are reserved tokens; regular entries follow in non-increasing count order.
class Inventory {
 public:
  std::size_t size() const { return surfaces_.size(); }
  std::size_t num_special() const { return num_special_; }

  const std::string& surface(std::uint32_t id) const { return surfaces_[id]; }
  std::uint64_t count(std::uint32_t id) const { return counts_[id]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  // nullopt for out-of-inventory forms (specials are never found by surface).
  std::optional<std::uint32_t> find(std::string_view surface) const;

  void add_special(std::string surface, std::uint64_t count);
  void add(std::string surface, std::uint64_t count);
  void set_count(std::uint32_t id, std::uint64_t count) { counts_[id] = count; }

  friend bool operator==(const Inventory& a, const Inventory& b) {
    return a.surfaces_ == b.surfaces_ && a.counts_ == b.counts_ &&
           a.num_special_ == b.num_special_;
  }

 private:
  std::vector<std::string> surfaces_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t num_special_ = 0;
};

// Word and noun inventories. Word ids 0 and 1 are UNK and NULL; noun id 0 is
// UNK. Lookups are total: out-of-vocabulary forms map to UNK. The UNK count is
// the number of out-of-vocabulary occurrences, so each inventory's counts sum
// to its total.
class Vocabulary {
 public:
  static constexpr WordId kUnkWord = 0;
  static constexpr WordId kNullWord = 1;
  static constexpr NounId kUnkNoun = 0;
  static constexpr std::string_view kUnkSurface = "<UNK>";
  static constexpr std::string_view kNullSurface = "<NULL>";

  Vocabulary() = default;
  Vocabulary(Inventory words, Inventory nouns, bool lowercase);

  const Inventory& words() const { return words_; }
  const Inventory& nouns() const { return nouns_; }
  bool lowercase() const { return lowercase_; }

  WordId word_id(std::string_view surface) const;
  NounId noun_id(std::string_view surface) const;

  std::uint64_t total_token_count() const { return total_tokens_; }
  std::uint64_t total_noun_count() const { return total_nouns_; }

  // Applies the lowercase flag.
  std::string normalize(std::string_view surface) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_ && a.nouns_ == b.nouns_ &&
           a.lowercase_ == b.lowercase_;
  }

 private:
  Inventory words_;
  Inventory nouns_;
  bool lowercase_ = true;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t total_nouns_ = 0;
};

// Accumulates counts for vocabulary building. Shards can count disjoint
// sentence ranges and be merged in any order: ties are broken by the global
// (sentence index, token index) of a form's first occurrence.
class VocabularyCounter {
 public:
  explicit VocabularyCounter(bool lowercase = true) : lowercase_(lowercase) {}

  void add(const TaggedSentence& sentence, std::uint64_t sentence_index);
  void merge(const VocabularyCounter& other);

  Vocabulary build(std::size_t max_words, std::size_t max_nouns) const;

 private:
  struct Entry {
    std::uint64_t count = 0;
    std::uint64_t first_sentence = std::numeric_limits<std::uint64_t>::max();
    std::uint32_t first_token = 0;
  };
  static void bump(std::unordered_map<std::string, Entry>& table,
                   const std::string& key, std::uint64_t sentence,
                   std::uint32_t token, std::uint64_t amount);
  static Inventory rank(const std::unordered_map<std::string, Entry>& table,
                        std::size_t limit, std::uint64_t total, bool with_null);

  bool lowercase_;
  std::unordered_map<std::string, Entry> words_;
  std::unordered_map<std::string, Entry> nouns_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t total_nouns_ = 0;
};

// Throws ConfigError if max_words or max_nouns is zero.
Vocabulary build_vocabulary(const std::vector<TaggedSentence>& sentences,
                            std::size_t max_words, std::size_t max_nouns,
                            bool lowercase = true);

// File format: header "relemb-vocab v1 <n_words> <n_nouns>", then one
// "surface<TAB>count" line per entry, words first, specials included.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

inline constexpr std::uint64_t kNoSentence = std::numeric_limits<std::uint64_t>::max();

// A noun pair with the words between it and fixed-width outside windows.
// `before` lists the M_out words left of n1 in sentence order (nearest last);
// `after` lists the M_out words right of n2 (nearest first). Missing slots
// hold Vocabulary::kNullWord.
struct NounPairContext {
  NounId n1 = Vocabulary::kUnkNoun;
  NounId n2 = Vocabulary::kUnkNoun;
  std::vector<WordId> between;
  std::vector<WordId> before;
  std::vector<WordId> after;
  std::uint64_t sentence_ref = kNoSentence;

  std::size_t m_in() const { return between.size(); }
  std::size_t m_out() const { return before.size(); }

  friend bool operator==(const NounPairContext&, const NounPairContext&) = default;
};

struct ExtractionOptions {
  std::size_t m_out = 5;
  std::size_t max_between = 10;
  std::size_t min_between = 1;
};

// Builds the context for entity heads at `first` < `second` over the encoded
// sentence. No distance checks.
NounPairContext make_context(std::span<const WordId> word_ids, std::size_t first,
                             std::size_t second, NounId n1, NounId n2,
                             std::size_t m_out);

// Every ordered pair of noun-tagged tokens whose gap is within
// [min_between, max_between].
std::vector<NounPairContext> extract_noun_pair_contexts(
    const TaggedSentence& sentence, const Vocabulary& vocab,
    const ExtractionOptions& options,
    std::uint64_t sentence_ref = kNoSentence);

struct SemEvalInstance {
  int id = 0;
  RelationLabel label;
  NounPairContext context;
  std::vector<std::string> tokens;  // tokenized sentence, markup removed
  std::size_t e1_head = 0;          // token positions of the entity heads
  std::size_t e2_head = 0;
};

struct SemEvalError {
  int id = 0;
  std::size_t line = 0;
  std::string message;
};

struct SemEvalParseResult {
  std::vector<SemEvalInstance> instances;
  std::vector<SemEvalError> errors;
};

// Splits raw text into tokens: whitespace separates, punctuation characters
// become their own tokens, and clitics 's / n't are split off.
std::vector<std::string> tokenize(std::string_view text);

// Parses the official SemEval-2010 Task 8 file layout. Multi-token entities
// are reduced to their last token. Per-instance problems are collected in
// `errors` rather than thrown; invalid UTF-8 throws DecodeError.
SemEvalParseResult parse_semeval(std::istream& in, const Vocabulary& vocab,
                                 std::size_t m_out);

// Parses a single "<id>\t\"sentence\"" line; throws FormatError.
SemEvalInstance parse_semeval_sentence(std::string_view line,
                                       const Vocabulary& vocab,
                                       std::size_t m_out);

// A restartable stream of pretraining contexts.
class ContextSource {
 public:
  virtual ~ContextSource() = default;
  virtual void rewind() = 0;
  virtual bool next(NounPairContext& out) = 0;
  virtual std::uint64_t total_contexts() const = 0;
  // Sum of M_in over all contexts: the number of prediction targets.
  virtual std::uint64_t total_targets() const = 0;
};

class InMemoryContexts : public ContextSource {
 public:
  explicit InMemoryContexts(std::vector<NounPairContext> contexts);

  void rewind() override { cursor_ = 0; }
  bool next(NounPairContext& out) override;
  std::uint64_t total_contexts() const override { return contexts_.size(); }
  std::uint64_t total_targets() const override { return targets_; }

  const std::vector<NounPairContext>& contexts() const { return contexts_; }

 private:
  std::vector<NounPairContext> contexts_;
  std::size_t cursor_ = 0;
  std::uint64_t targets_ = 0;
};

// Binary context file: a fixed-width text header line
// "relemb-contexts v1 m_out=<M> count=<n> targets=<t>" followed by
// little-endian records (n1, n2, m_in, ids...) of uint32 values.
class ContextFileWriter {
 public:
  ContextFileWriter(const std::string& path, std::size_t m_out);
  ~ContextFileWriter();
  ContextFileWriter(const ContextFileWriter&) = delete;
  ContextFileWriter& operator=(const ContextFileWriter&) = delete;

  void write(const NounPairContext& context);
  // Rewrites the header with final counts. Called by the destructor.
  void close();

  std::uint64_t count() const { return count_; }
  std::uint64_t targets() const { return targets_; }

 private:
  void write_header();

  std::ofstream out_;
  std::size_t m_out_;
  std::uint64_t count_ = 0;
  std::uint64_t targets_ = 0;
  bool closed_ = false;
};

class ContextFileReader : public ContextSource {
 public:
  explicit ContextFileReader(const std::string& path);

  void rewind() override;
  bool next(NounPairContext& out) override;
  std::uint64_t total_contexts() const override { return count_; }
  std::uint64_t total_targets() const override { return targets_; }
  std::size_t m_out() const { return m_out_; }

 private:
  std::ifstream in_;
  std::streampos data_start_;
  std::size_t m_out_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t targets_ = 0;
  std::uint64_t read_ = 0;
};

}  // namespace relemb

#endif  // RELEMB_CORPUS_HPP_
