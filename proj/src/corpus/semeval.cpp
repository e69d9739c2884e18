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


#include <cctype>
#include <istream>
#include <string>

#include "relemb/corpus.hpp"

namespace relemb {
namespace {

bool is_punct(char ch) {
  switch (ch) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '(': case ')': case '[': case ']': case '{': case '}':
    case '"': case '`':
      return true;
    default:
      return false;
  }
}

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
}

void push_word(std::string word, std::vector<std::string>& out) {
  if (word.empty()) return;
  auto ends_with = [&](std::string_view suffix) {
    return word.size() > suffix.size() &&
           ascii_lowercase(word.substr(word.size() - suffix.size())) == suffix;
  };
  if (ends_with("n't")) {
    out.push_back(word.substr(0, word.size() - 3));
    out.push_back(word.substr(word.size() - 3));
  } else if (ends_with("'s")) {
    out.push_back(word.substr(0, word.size() - 2));
    out.push_back(word.substr(word.size() - 2));
  } else {
    out.push_back(std::move(word));
  }
}

bool all_punct(const std::string& token) {
  for (char ch : token) {
    if (!is_punct(ch) && ch != '\'') return false;
  }
  return true;
}

std::size_t head_of(const std::vector<std::string>& entity) {
  for (std::size_t i = entity.size(); i-- > 0;) {
    if (!all_punct(entity[i])) return i;
  }
  return entity.size() - 1;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  for (char ch : text) {
    if (is_space(ch)) {
      push_word(std::move(word), out);
      word.clear();
    } else if (is_punct(ch)) {
      push_word(std::move(word), out);
      word.clear();
      out.emplace_back(1, ch);
    } else {
      word.push_back(ch);
    }
  }
  push_word(std::move(word), out);
  return out;
}

SemEvalInstance parse_semeval_sentence(std::string_view line,
                                       const Vocabulary& vocab,
                                       std::size_t m_out) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw FormatError("sentence line has no tab after the id");
  }
  SemEvalInstance inst;
  try {
    inst.id = std::stoi(std::string(line.substr(0, tab)));
  } catch (const std::exception&) {
    throw FormatError("sentence line does not start with a numeric id");
  }
  std::string_view text = line.substr(tab + 1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = text.substr(1, text.size() - 2);
  }

  const auto e1s = text.find("<e1>");
  const auto e1e = text.find("</e1>");
  const auto e2s = text.find("<e2>");
  const auto e2e = text.find("</e2>");
  if (e1s == std::string_view::npos || e1e == std::string_view::npos ||
      e2s == std::string_view::npos || e2e == std::string_view::npos) {
    throw FormatError("missing <e1>/<e2> entity markup");
  }
  if (!(e1s < e1e && e1e < e2s && e2s < e2e)) {
    throw FormatError("entity markup must be <e1>...</e1> before <e2>...</e2>");
  }

  const auto pre = tokenize(text.substr(0, e1s));
  const auto ent1 = tokenize(text.substr(e1s + 4, e1e - e1s - 4));
  const auto mid = tokenize(text.substr(e1e + 5, e2s - e1e - 5));
  const auto ent2 = tokenize(text.substr(e2s + 4, e2e - e2s - 4));
  const auto post = tokenize(text.substr(e2e + 5));
  if (ent1.empty() || ent2.empty()) throw FormatError("empty entity span");

  auto& toks = inst.tokens;
  toks.insert(toks.end(), pre.begin(), pre.end());
  inst.e1_head = toks.size() + head_of(ent1);
  toks.insert(toks.end(), ent1.begin(), ent1.end());
  toks.insert(toks.end(), mid.begin(), mid.end());
  inst.e2_head = toks.size() + head_of(ent2);
  toks.insert(toks.end(), ent2.begin(), ent2.end());
  toks.insert(toks.end(), post.begin(), post.end());

  std::vector<WordId> ids;
  ids.reserve(toks.size());
  for (const auto& t : toks) ids.push_back(vocab.word_id(t));
  inst.context = make_context(ids, inst.e1_head, inst.e2_head,
                              vocab.noun_id(toks[inst.e1_head]),
                              vocab.noun_id(toks[inst.e2_head]), m_out);
  return inst;
}

SemEvalParseResult parse_semeval(std::istream& in, const Vocabulary& vocab,
                                 std::size_t m_out) {
  SemEvalParseResult result;
  std::string line;
  std::size_t line_no = 0;
  std::optional<SemEvalInstance> pending;
  int pending_id = 0;
  std::size_t pending_line = 0;
  bool expect_label = false;
  bool pending_failed = false;

  auto report_missing_label = [&] {
    result.errors.push_back({pending_id, pending_line, "missing relation label"});
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_valid_utf8(line)) {
      throw DecodeError("invalid UTF-8 on line " + std::to_string(line_no));
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (expect_label && !pending_failed) report_missing_label();
      expect_label = false;
      continue;
    }
    if (expect_label) {
      const bool looks_like_sentence =
          std::isdigit(static_cast<unsigned char>(line[0])) &&
          line.find('\t') != std::string::npos;
      if (!looks_like_sentence) {
        expect_label = false;
        if (pending_failed) continue;
        try {
          pending->label = RelationLabel::parse(line);
          result.instances.push_back(std::move(*pending));
        } catch (const FormatError& e) {
          result.errors.push_back({pending_id, line_no, e.what()});
        }
        continue;
      }
      if (!pending_failed) report_missing_label();
      expect_label = false;
    }
    if (line.rfind("Comment", 0) == 0) continue;

    pending_line = line_no;
    pending_id = 0;
    try {
      pending_id = std::stoi(line.substr(0, line.find('\t')));
    } catch (const std::exception&) {
    }
    pending_failed = false;
    try {
      pending = parse_semeval_sentence(line, vocab, m_out);
    } catch (const FormatError& e) {
      result.errors.push_back({pending_id, line_no, e.what()});
      pending_failed = true;
    }
    expect_label = true;
  }
  if (expect_label && !pending_failed) report_missing_label();
  return result;
}

}  // namespace relemb
