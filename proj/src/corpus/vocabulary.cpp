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
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "relemb/corpus.hpp"

namespace relemb {

std::optional<std::uint32_t> Inventory::find(std::string_view surface) const {
  const auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Inventory::add_special(std::string surface, std::uint64_t count) {
  surfaces_.push_back(std::move(surface));
  counts_.push_back(count);
  ++num_special_;
}

void Inventory::add(std::string surface, std::uint64_t count) {
  const auto id = static_cast<std::uint32_t>(surfaces_.size());
  index_.emplace(surface, id);
  surfaces_.push_back(std::move(surface));
  counts_.push_back(count);
}

Vocabulary::Vocabulary(Inventory words, Inventory nouns, bool lowercase)
    : words_(std::move(words)), nouns_(std::move(nouns)), lowercase_(lowercase) {
  for (auto c : words_.counts()) total_tokens_ += c;
  for (auto c : nouns_.counts()) total_nouns_ += c;
}

std::string Vocabulary::normalize(std::string_view surface) const {
  return lowercase_ ? ascii_lowercase(surface) : std::string(surface);
}

WordId Vocabulary::word_id(std::string_view surface) const {
  return words_.find(normalize(surface)).value_or(kUnkWord);
}

NounId Vocabulary::noun_id(std::string_view surface) const {
  return nouns_.find(normalize(surface)).value_or(kUnkNoun);
}

void VocabularyCounter::bump(std::unordered_map<std::string, Entry>& table,
                             const std::string& key, std::uint64_t sentence,
                             std::uint32_t token, std::uint64_t amount) {
  Entry& e = table[key];
  e.count += amount;
  if (std::tie(sentence, token) < std::tie(e.first_sentence, e.first_token)) {
    e.first_sentence = sentence;
    e.first_token = token;
  }
}

void VocabularyCounter::add(const TaggedSentence& sentence,
                            std::uint64_t sentence_index) {
  for (std::uint32_t t = 0; t < sentence.tokens.size(); ++t) {
    const auto& tok = sentence.tokens[t];
    const std::string key =
        lowercase_ ? ascii_lowercase(tok.surface) : tok.surface;
    bump(words_, key, sentence_index, t, 1);
    ++total_tokens_;
    if (is_noun_tag(tok.pos)) {
      bump(nouns_, key, sentence_index, t, 1);
      ++total_nouns_;
    }
  }
}

void VocabularyCounter::merge(const VocabularyCounter& other) {
  for (const auto& [key, e] : other.words_) {
    bump(words_, key, e.first_sentence, e.first_token, e.count);
  }
  for (const auto& [key, e] : other.nouns_) {
    bump(nouns_, key, e.first_sentence, e.first_token, e.count);
  }
  total_tokens_ += other.total_tokens_;
  total_nouns_ += other.total_nouns_;
}

Inventory VocabularyCounter::rank(
    const std::unordered_map<std::string, Entry>& table, std::size_t limit,
    std::uint64_t total, bool with_null) {
  std::vector<std::pair<const std::string*, const Entry*>> order;
  order.reserve(table.size());
  for (const auto& [key, e] : table) order.emplace_back(&key, &e);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    const Entry& x = *a.second;
    const Entry& y = *b.second;
    if (x.count != y.count) return x.count > y.count;
    return std::tie(x.first_sentence, x.first_token) <
           std::tie(y.first_sentence, y.first_token);
  });
  if (order.size() > limit) order.resize(limit);

  std::uint64_t kept = 0;
  for (const auto& [key, e] : order) kept += e->count;

  Inventory inv;
  inv.add_special(std::string(Vocabulary::kUnkSurface), total - kept);
  if (with_null) inv.add_special(std::string(Vocabulary::kNullSurface), 0);
  for (const auto& [key, e] : order) inv.add(*key, e->count);
  return inv;
}

Vocabulary VocabularyCounter::build(std::size_t max_words,
                                    std::size_t max_nouns) const {
  if (max_words == 0 || max_nouns == 0) {
    throw ConfigError("max_words and max_nouns must be at least 1");
  }
  return Vocabulary(rank(words_, max_words, total_tokens_, true),
                    rank(nouns_, max_nouns, total_nouns_, false), lowercase_);
}

Vocabulary build_vocabulary(const std::vector<TaggedSentence>& sentences,
                            std::size_t max_words, std::size_t max_nouns,
                            bool lowercase) {
  VocabularyCounter counter(lowercase);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    counter.add(sentences[i], i);
  }
  return counter.build(max_words, max_nouns);
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  out << "relemb-vocab v1 " << vocab.words().size() << ' '
      << vocab.nouns().size() << (vocab.lowercase() ? " lowercase" : "")
      << '\n';
  for (const Inventory* inv : {&vocab.words(), &vocab.nouns()}) {
    for (std::uint32_t id = 0; id < inv->size(); ++id) {
      out << inv->surface(id) << '\t' << inv->count(id) << '\n';
    }
  }
}

namespace {

Inventory read_section(std::istream& in, std::size_t n, std::size_t specials,
                       std::size_t& line_no) {
  Inventory inv;
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw FormatError("vocabulary file truncated at line " +
                        std::to_string(line_no));
    }
    ++line_no;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw FormatError("vocabulary line " + std::to_string(line_no) +
                        " has no tab");
    }
    std::uint64_t count = 0;
    try {
      count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw FormatError("bad count on vocabulary line " +
                        std::to_string(line_no));
    }
    std::string surface = line.substr(0, tab);
    if (i < specials) {
      inv.add_special(std::move(surface), count);
    } else {
      inv.add(std::move(surface), count);
    }
  }
  return inv;
}

}  // namespace

Vocabulary read_vocabulary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("empty vocabulary file");
  std::istringstream hs(header);
  std::string magic, version, flag;
  std::size_t n_words = 0, n_nouns = 0;
  if (!(hs >> magic >> version >> n_words >> n_nouns) ||
      magic != "relemb-vocab" || version != "v1") {
    throw FormatError("bad vocabulary header: '" + header + "'");
  }
  const bool lowercase = (hs >> flag) && flag == "lowercase";
  if (n_words < 2 || n_nouns < 1) {
    throw FormatError("vocabulary header declares too few entries");
  }
  std::size_t line_no = 1;
  Inventory words = read_section(in, n_words, 2, line_no);
  Inventory nouns = read_section(in, n_nouns, 1, line_no);
  return Vocabulary(std::move(words), std::move(nouns), lowercase);
}

}  // namespace relemb
