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
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "relemb/corpus.hpp"

namespace relemb {
namespace {

TaggedSentence tagged(std::initializer_list<std::pair<const char*, const char*>> toks) {
  TaggedSentence s;
  for (const auto& [w, p] : toks) s.tokens.push_back({w, p});
  return s;
}

std::vector<std::string> surfaces(const Vocabulary& v, const std::vector<WordId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(v.words().surface(id));
  return out;
}

// --- tagged corpus ---------------------------------------------------------

TEST_CASE("two-column corpus: one sentence of two tokens") {
  std::istringstream in("conflicts\tNNS\nare\tVBP\n\n");
  CorpusParseStats stats;
  const auto sentences = parse_tagged_corpus(in, &stats);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens.size() == 2);
  CHECK(sentences[0].tokens[0].surface == "conflicts");
  CHECK(sentences[0].tokens[0].pos == "NNS");
  CHECK(stats.malformed_lines == 0);
}

TEST_CASE("blank leading lines are ignored") {
  std::istringstream a("conflicts\tNNS\nare\tVBP\n\n");
  std::istringstream b("\n\n\nconflicts\tNNS\nare\tVBP\n\n");
  const auto sa = parse_tagged_corpus(a);
  const auto sb = parse_tagged_corpus(b);
  REQUIRE(sa.size() == sb.size());
  CHECK(sa[0].tokens.size() == sb[0].tokens.size());
}

TEST_CASE("single-column line is skipped and counted") {
  std::istringstream in("conflicts\tNNS\nbroken\nare\tVBP\n\n");
  CorpusParseStats stats;
  const auto sentences = parse_tagged_corpus(in, &stats);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens.size() == 2);
  CHECK(stats.malformed_lines == 1);
}

TEST_CASE("last sentence without trailing blank line is still emitted") {
  std::istringstream in("a\tDT\n\nb\tNN\nc\tNN");
  CHECK(parse_tagged_corpus(in).size() == 2);
}

TEST_CASE("empty input is an empty stream") {
  std::istringstream in("");
  CHECK(parse_tagged_corpus(in).empty());
}

TEST_CASE("invalid UTF-8 raises a decode error") {
  std::istringstream in("ok\tNN\nbad\xFF\tNN\n\n");
  CHECK_THROWS_AS(parse_tagged_corpus(in), DecodeError);
}

TEST_CASE("noun tags") {
  for (const char* t : {"NN", "NNS", "NNP", "NNPS"}) CHECK(is_noun_tag(t));
  for (const char* t : {"VB", "N", "NNX", "nn", "JJ"}) CHECK_FALSE(is_noun_tag(t));
}

// --- vocabulary ------------------------------------------------------------

TEST_CASE("top-k words by count; the rest map to UNK") {
  // counts a:5, b:3, c:1
  std::vector<TaggedSentence> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(tagged({{"a", "DT"}}));
  for (int i = 0; i < 3; ++i) corpus.push_back(tagged({{"b", "DT"}}));
  corpus.push_back(tagged({{"c", "DT"}}));
  const Vocabulary v = build_vocabulary(corpus, 2, 1);
  REQUIRE(v.words().size() == 4);  // UNK, NULL, a, b
  CHECK(v.words().surface(Vocabulary::kUnkWord) == "<UNK>");
  CHECK(v.words().surface(Vocabulary::kNullWord) == "<NULL>");
  CHECK(v.words().surface(2) == "a");
  CHECK(v.words().surface(3) == "b");
  CHECK(v.word_id("c") == Vocabulary::kUnkWord);
  CHECK(v.words().count(Vocabulary::kUnkWord) == 1);
  CHECK(v.total_token_count() == 9);
}

TEST_CASE("a word tagged both VB and NN counts as a noun only when tagged NN") {
  std::vector<TaggedSentence> corpus{
      tagged({{"cause", "VB"}, {"the", "DT"}, {"cause", "NN"}}),
      tagged({{"cause", "VB"}})};
  const Vocabulary v = build_vocabulary(corpus, 10, 10);
  CHECK(v.words().count(v.word_id("cause")) == 3);
  CHECK(v.nouns().count(v.noun_id("cause")) == 1);
  CHECK(v.noun_id("the") == Vocabulary::kUnkNoun);
  CHECK(v.total_noun_count() == 1);
}

TEST_CASE("count ties keep the form seen first") {
  std::vector<TaggedSentence> corpus{tagged({{"b", "DT"}, {"a", "DT"}}),
                                     tagged({{"a", "DT"}, {"b", "DT"}})};
  const Vocabulary v = build_vocabulary(corpus, 1, 1);
  CHECK(v.word_id("b") == 2);
  CHECK(v.word_id("a") == Vocabulary::kUnkWord);
}

TEST_CASE("lowercasing is a flag") {
  std::vector<TaggedSentence> corpus{tagged({{"Cause", "NN"}, {"cause", "NN"}})};
  const Vocabulary lower = build_vocabulary(corpus, 10, 10, true);
  CHECK(lower.words().size() == 3);
  CHECK(lower.word_id("CAUSE") == lower.word_id("cause"));
  const Vocabulary exact = build_vocabulary(corpus, 10, 10, false);
  CHECK(exact.words().size() == 4);
  CHECK(exact.word_id("CAUSE") == Vocabulary::kUnkWord);
}

TEST_CASE("zero inventory sizes are rejected") {
  std::vector<TaggedSentence> corpus{tagged({{"a", "NN"}})};
  CHECK_THROWS_AS(build_vocabulary(corpus, 0, 1), ConfigError);
  CHECK_THROWS_AS(build_vocabulary(corpus, 1, 0), ConfigError);
}

TEST_CASE("vocabulary invariants on a random corpus") {
  std::mt19937 rng(5);
  std::vector<TaggedSentence> corpus;
  const char* tags[] = {"NN", "VB", "DT", "NNS"};
  for (int s = 0; s < 200; ++s) {
    TaggedSentence sent;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int t = 0; t < len; ++t) {
      sent.tokens.push_back({"w" + std::to_string(rng() % 40), tags[rng() % 4]});
    }
    corpus.push_back(sent);
  }
  const Vocabulary v = build_vocabulary(corpus, 15, 10);
  for (const Inventory* inv : {&v.words(), &v.nouns()}) {
    std::uint64_t sum = 0;
    for (std::uint32_t i = 0; i < inv->size(); ++i) sum += inv->count(i);
    for (std::uint32_t i = inv->num_special() + 1; i < inv->size(); ++i) {
      CHECK(inv->count(i - 1) >= inv->count(i));
      CHECK(inv->count(i) > 0);
    }
    CHECK(sum == (inv == &v.words() ? v.total_token_count() : v.total_noun_count()));
  }
  CHECK(v.words().size() == 17);
  CHECK(v.nouns().size() == 11);
}

TEST_CASE("sharded counting is independent of merge order") {
  std::mt19937 rng(9);
  std::vector<TaggedSentence> corpus;
  for (int s = 0; s < 60; ++s) {
    TaggedSentence sent;
    for (int t = 0; t < 6; ++t) {
      sent.tokens.push_back({"w" + std::to_string(rng() % 15), rng() % 2 ? "NN" : "VB"});
    }
    corpus.push_back(sent);
  }
  VocabularyCounter whole;
  for (std::size_t i = 0; i < corpus.size(); ++i) whole.add(corpus[i], i);

  std::vector<VocabularyCounter> shards(4);
  for (std::size_t i = 0; i < corpus.size(); ++i) shards[i % 4].add(corpus[i], i);
  VocabularyCounter forward, backward;
  for (int k = 0; k < 4; ++k) forward.merge(shards[k]);
  for (int k = 3; k >= 0; --k) backward.merge(shards[k]);

  const Vocabulary expected = whole.build(8, 5);
  CHECK(forward.build(8, 5) == expected);
  CHECK(backward.build(8, 5) == expected);
}

TEST_CASE("vocabulary file round-trip") {
  std::vector<TaggedSentence> corpus{
      tagged({{"The", "DT"}, {"stress", "NN"}, {"caused", "VBD"}, {"divorce", "NN"}})};
  for (bool lowercase : {true, false}) {
    const Vocabulary v = build_vocabulary(corpus, 10, 10, lowercase);
    std::stringstream buf;
    write_vocabulary(buf, v);
    CHECK(read_vocabulary(buf) == v);
  }
  std::istringstream bad("relemb-vocab v2 1 1\n");
  CHECK_THROWS_AS(read_vocabulary(bad), FormatError);
}

// --- pair extraction ---------------------------------------------------------

TaggedSentence nouns_at(std::size_t length, std::initializer_list<std::size_t> nouns) {
  TaggedSentence s;
  for (std::size_t i = 0; i < length; ++i) {
    const bool noun = std::find(nouns.begin(), nouns.end(), i) != nouns.end();
    s.tokens.push_back({(noun ? "n" : "w") + std::to_string(i), noun ? "NN" : "VB"});
  }
  return s;
}

Vocabulary vocab_of(const std::vector<TaggedSentence>& corpus) {
  return build_vocabulary(corpus, 1000, 1000);
}

TEST_CASE("pairs more than 10 words apart are omitted") {
  const auto s = nouns_at(13, {0, 12});  // 11 words between
  CHECK(extract_noun_pair_contexts(s, vocab_of({s}), {}).empty());
  const auto t = nouns_at(12, {0, 11});  // exactly 10
  CHECK(extract_noun_pair_contexts(t, vocab_of({t}), {}).size() == 1);
}

TEST_CASE("adjacent nouns yield no pretraining pair") {
  const auto s = nouns_at(4, {1, 2});
  CHECK(extract_noun_pair_contexts(s, vocab_of({s}), {}).empty());
}

TEST_CASE("nouns at {1,4,8} give three ordered pairs") {
  const auto s = nouns_at(10, {1, 4, 8});
  const Vocabulary v = vocab_of({s});
  const auto pairs = extract_noun_pair_contexts(s, v, {});
  REQUIRE(pairs.size() == 3);
  std::vector<std::pair<std::string, std::string>> got;
  for (const auto& p : pairs) {
    got.emplace_back(v.nouns().surface(p.n1), v.nouns().surface(p.n2));
  }
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::pair<std::string, std::string>>{
                   {"n1", "n4"}, {"n1", "n8"}, {"n4", "n8"}});
}

TEST_CASE("outside windows: nearest-last before, nearest-first after, NULL padded") {
  const auto s = nouns_at(8, {2, 5});  // w0 w1 n2 w3 w4 n5 w6 w7
  const Vocabulary v = vocab_of({s});
  ExtractionOptions opts;
  opts.m_out = 3;
  const auto pairs = extract_noun_pair_contexts(s, v, opts, 42);
  REQUIRE(pairs.size() == 1);
  const auto& ctx = pairs[0];
  CHECK(surfaces(v, ctx.between) == std::vector<std::string>{"w3", "w4"});
  CHECK(surfaces(v, ctx.before) == std::vector<std::string>{"<NULL>", "w0", "w1"});
  CHECK(surfaces(v, ctx.after) == std::vector<std::string>{"w6", "w7", "<NULL>"});
  CHECK(ctx.sentence_ref == 42);
}

TEST_CASE("outside windows truncate to the nearest M_out words") {
  const auto s = nouns_at(12, {4, 6});
  const Vocabulary v = vocab_of({s});
  ExtractionOptions opts;
  opts.m_out = 2;
  const auto ctx = extract_noun_pair_contexts(s, v, opts).at(0);
  CHECK(surfaces(v, ctx.before) == std::vector<std::string>{"w2", "w3"});
  CHECK(surfaces(v, ctx.after) == std::vector<std::string>{"w7", "w8"});
}

TEST_CASE("pair count equals a brute-force enumeration; contexts obey invariants") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + rng() % 30;
    TaggedSentence s;
    std::vector<std::size_t> noun_pos;
    for (std::size_t i = 0; i < len; ++i) {
      const bool noun = rng() % 3 == 0;
      if (noun) noun_pos.push_back(i);
      s.tokens.push_back({"t" + std::to_string(rng() % 7), noun ? "NNS" : "IN"});
    }
    std::size_t expected = 0;
    for (std::size_t a = 0; a < noun_pos.size(); ++a) {
      for (std::size_t b = a + 1; b < noun_pos.size(); ++b) {
        const std::size_t gap = noun_pos[b] - noun_pos[a] - 1;
        if (gap >= 1 && gap <= 10) ++expected;
      }
    }
    ExtractionOptions opts;
    opts.m_out = 1 + rng() % 5;
    const auto pairs = extract_noun_pair_contexts(s, vocab_of({s}), opts);
    CHECK(pairs.size() == expected);
    for (const auto& p : pairs) {
      CHECK(p.m_in() >= 1);
      CHECK(p.m_in() <= 10);
      CHECK(p.before.size() == opts.m_out);
      CHECK(p.after.size() == opts.m_out);
    }
  }
}

// --- SemEval format ------------------------------------------------------------

Vocabulary semeval_vocab() {
  std::vector<TaggedSentence> corpus{
      tagged({{"financial", "JJ"}, {"stress", "NN"}, {"is", "VBZ"}, {"one", "CD"},
              {"of", "IN"}, {"the", "DT"}, {"main", "JJ"}, {"causes", "NNS"},
              {"of", "IN"}, {"divorce", "NN"}, {".", "."}}),
      tagged({{"the", "DT"}, {"burst", "NN"}, {"has", "VBZ"}, {"been", "VBN"},
              {"caused", "VBN"}, {"by", "IN"}, {"water", "NN"}, {"hammer", "NN"},
              {"pressure", "NN"}, {"embedding", "NN"}})};
  return build_vocabulary(corpus, 100, 100);
}

TEST_CASE("SemEval example: Cause-Effect(e1,e2) with its between-words") {
  const Vocabulary v = semeval_vocab();
  std::istringstream in(
      "1\t\"Financial <e1>stress</e1> is one of the main causes of <e2>divorce</e2>.\"\n"
      "Cause-Effect(e1,e2)\nComment:\n\n");
  const auto result = parse_semeval(in, v, 5);
  REQUIRE(result.errors.empty());
  REQUIRE(result.instances.size() == 1);
  const auto& inst = result.instances[0];
  CHECK(inst.id == 1);
  CHECK(inst.label.to_string() == "Cause-Effect(e1,e2)");
  CHECK(v.nouns().surface(inst.context.n1) == "stress");
  CHECK(v.nouns().surface(inst.context.n2) == "divorce");
  CHECK(surfaces(v, inst.context.between) ==
        std::vector<std::string>{"is", "one", "of", "the", "main", "causes", "of"});
  CHECK(surfaces(v, inst.context.after) ==
        std::vector<std::string>{".", "<NULL>", "<NULL>", "<NULL>", "<NULL>"});
}

TEST_CASE("SemEval example: reversed direction") {
  const Vocabulary v = semeval_vocab();
  std::istringstream in(
      "2\t\"The <e1>burst</e1> has been caused by water hammer <e2>pressure</e2>.\"\n"
      "Cause-Effect(e2,e1)\nComment: reversed\n\n");
  const auto result = parse_semeval(in, v, 5);
  REQUIRE(result.instances.size() == 1);
  CHECK(result.instances[0].label.direction() == Direction::kE2E1);
  CHECK(v.nouns().surface(result.instances[0].context.n2) == "pressure");
}

TEST_CASE("multi-token entity is reduced to its last token") {
  const Vocabulary v = semeval_vocab();
  const auto inst = parse_semeval_sentence(
      "3\t\"The <e1>word embedding</e1> has been caused by <e2>stress</e2>.\"", v, 5);
  CHECK(inst.tokens[inst.e1_head] == "embedding");
  CHECK(v.nouns().surface(inst.context.n1) == "embedding");
  CHECK(surfaces(v, inst.context.before).back() == "<UNK>");  // "word"
}

TEST_CASE("adjacent entities give an empty between-span") {
  const Vocabulary v = semeval_vocab();
  const auto inst =
      parse_semeval_sentence("4\t\"<e1>water</e1> <e2>pressure</e2>\"", v, 2);
  CHECK(inst.context.m_in() == 0);
  CHECK(inst.context.before.size() == 2);
}

TEST_CASE("per-instance errors carry the instance id") {
  const Vocabulary v = semeval_vocab();
  std::istringstream in(
      "10\t\"No markup here.\"\nOther\nComment:\n\n"
      "11\t\"The <e1>burst</e1> of <e2>pressure</e2>\"\nFriendship(e1,e2)\nComment:\n\n"
      "12\t\"The <e1>burst</e1> of <e2>pressure</e2>\"\nOther\nComment:\n\n");
  const auto result = parse_semeval(in, v, 5);
  REQUIRE(result.instances.size() == 1);
  CHECK(result.instances[0].id == 12);
  REQUIRE(result.errors.size() == 2);
  CHECK(result.errors[0].id == 10);
  CHECK(result.errors[1].id == 11);
}

TEST_CASE("SemEval parsing tolerates CRLF and missing Comment lines") {
  const Vocabulary v = semeval_vocab();
  std::istringstream in(
      "1\t\"The <e1>burst</e1> of <e2>pressure</e2>\"\r\nOther\r\n\r\n"
      "2\t\"The <e1>burst</e1> of <e2>pressure</e2>\"\nOther\n");
  const auto result = parse_semeval(in, v, 5);
  CHECK(result.errors.empty());
  CHECK(result.instances.size() == 2);
}

TEST_CASE("tokenizer splits punctuation and clitics") {
  CHECK(tokenize("The company's (new) plant didn't work.") ==
        std::vector<std::string>{"The", "company", "'s", "(", "new", ")", "plant",
                                 "did", "n't", "work", "."});
}

// --- context files -------------------------------------------------------------

TEST_CASE("context file round-trip and rewind") {
  const auto path = std::filesystem::temp_directory_path() / "relemb_ctx_test.bin";
  std::vector<NounPairContext> contexts;
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    NounPairContext c;
    c.n1 = rng() % 100;
    c.n2 = rng() % 100;
    c.between.resize(1 + rng() % 10);
    for (auto& w : c.between) w = rng() % 1000;
    c.before.resize(3);
    c.after.resize(3);
    for (auto& w : c.before) w = rng() % 1000;
    for (auto& w : c.after) w = rng() % 1000;
    contexts.push_back(c);
  }
  std::uint64_t targets = 0;
  {
    ContextFileWriter writer(path.string(), 3);
    for (const auto& c : contexts) {
      writer.write(c);
      targets += c.m_in();
    }
  }
  ContextFileReader reader(path.string());
  CHECK(reader.total_contexts() == contexts.size());
  CHECK(reader.total_targets() == targets);
  CHECK(reader.m_out() == 3);
  for (int pass = 0; pass < 2; ++pass) {
    reader.rewind();
    NounPairContext c;
    std::size_t i = 0;
    while (reader.next(c)) {
      REQUIRE(i < contexts.size());
      CHECK(c == contexts[i]);
      ++i;
    }
    CHECK(i == contexts.size());
  }
  std::filesystem::remove(path);
}

TEST_CASE("in-memory contexts count their targets") {
  NounPairContext a, b;
  a.between = {1, 2, 3};
  b.between = {4};
  InMemoryContexts src({a, b});
  CHECK(src.total_contexts() == 2);
  CHECK(src.total_targets() == 4);
}

}  // namespace
}  // namespace relemb
