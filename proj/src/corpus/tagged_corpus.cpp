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


#include <istream>
#include <string>

#include "relemb/corpus.hpp"

namespace relemb {

bool is_noun_tag(std::string_view pos) {
  return pos == "NN" || pos == "NNS" || pos == "NNP" || pos == "NNPS";
}

std::optional<TaggedSentence> TaggedCorpusReader::next() {
  TaggedSentence sentence;
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_valid_utf8(line)) {
      throw DecodeError("invalid UTF-8 on line " + std::to_string(line_number_));
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (!sentence.tokens.empty()) return sentence;
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      ++malformed_lines_;
      continue;
    }
    sentence.tokens.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  if (!sentence.tokens.empty()) return sentence;
  return std::nullopt;
}

std::vector<TaggedSentence> parse_tagged_corpus(std::istream& in,
                                                CorpusParseStats* stats) {
  TaggedCorpusReader reader(in);
  std::vector<TaggedSentence> sentences;
  std::size_t tokens = 0;
  while (auto sentence = reader.next()) {
    tokens += sentence->tokens.size();
    sentences.push_back(std::move(*sentence));
  }
  if (stats != nullptr) {
    stats->sentences = sentences.size();
    stats->tokens = tokens;
    stats->malformed_lines = reader.malformed_lines();
  }
  return sentences;
}

}  // namespace relemb
