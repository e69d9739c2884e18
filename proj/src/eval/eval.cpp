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


#include "relemb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "relemb/features.hpp"

namespace relemb {

std::vector<WordSimPair> read_wordsim(std::istream& in) {
  std::vector<WordSimPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(sep, start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (fields.size() < 3) {
      throw FormatError("word-similarity line " + std::to_string(line_no) +
                        " has fewer than three fields");
    }
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(fields[2], &used);
    } catch (const std::exception&) {
      if (pairs.empty()) continue;  // header
      throw FormatError("bad score on word-similarity line " + std::to_string(line_no));
    }
    pairs.push_back({fields[0], fields[1], score});
  }
  return pairs;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("rank correlation of unequal lengths");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

WordSimResult spearman_wordsim(std::span<const WordSimPair> pairs,
                               EmbeddingTable table, const EmbeddingParams& params,
                               const Vocabulary& vocab) {
  WordSimResult result;
  std::set<std::string> oov;
  std::vector<double> human, model;
  const bool nouns = table == EmbeddingTable::kNouns;
  auto lookup = [&](const std::string& w, bool& missing) {
    const std::uint32_t id = nouns ? vocab.noun_id(w) : vocab.word_id(w);
    const std::uint32_t unk = nouns ? Vocabulary::kUnkNoun : Vocabulary::kUnkWord;
    if (id == unk) {
      missing = true;
      oov.insert(w);
    }
    return nouns ? params.nouns.row(id) : params.words.row(id);
  };
  for (const auto& p : pairs) {
    bool missing = false;
    const auto a = lookup(p.word1, missing);
    const auto b = lookup(p.word2, missing);
    if (missing) ++result.oov_pairs;
    human.push_back(p.score);
    model.push_back(cosine_similarity(a, b));
  }
  result.pairs = pairs.size();
  result.rho = spearman_rho(human, model);
  result.oov_words.assign(oov.begin(), oov.end());
  return result;
}

std::vector<NgramScore> top_ngrams(const ClassifierModel& model,
                                   const EmbeddingParams& params,
                                   const Vocabulary& vocab,
                                   std::span<const SemEvalInstance> instances,
                                   int class_index, std::size_t n,
                                   std::size_t top_k) {
  const FeatureLayout layout = feature_layout(params, model.features);
  const auto block = layout.find(FeatureBlockKind::kBetween);
  if (!block) throw std::invalid_argument("classifier has no n-gram (g_in) block");
  if (layout.size != model.softmax.dim()) {
    throw std::invalid_argument("classifier does not match these embeddings");
  }
  if (n % 2 == 0 || n > 2 * params.window + 1) {
    throw std::invalid_argument("n must be odd and at most 2c+1");
  }
  if (class_index < 0 || static_cast<std::size_t>(class_index) >= model.softmax.labels()) {
    throw std::invalid_argument("class index out of range");
  }
  const std::size_t radius = n / 2;
  const auto weights =
      model.softmax.weights.row(class_index).subspan(block->offset, block->length);

  auto surface_of = [&](WordId w) -> std::string {
    return w == Vocabulary::kNullWord ? "NULL" : vocab.words().surface(w);
  };

  std::map<std::string, double> best;
  std::vector<double> h(block->length);
  for (const auto& inst : instances) {
    const auto& ctx = inst.context;
    for (std::size_t i = 0; i < ctx.m_in(); ++i) {
      masked_ngram_embedding(ctx, i, radius, params, h);
      const double score = dot(h, weights);
      std::string surface;
      for (std::size_t k = 0; k < n; ++k) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(i + k) -
                                   static_cast<std::ptrdiff_t>(radius);
        const WordId w = pos >= 0 && pos < static_cast<std::ptrdiff_t>(ctx.m_in())
                             ? ctx.between[static_cast<std::size_t>(pos)]
                             : Vocabulary::kNullWord;
        if (k > 0) surface += ' ';
        surface += surface_of(w);
      }
      auto [it, inserted] = best.emplace(std::move(surface), score);
      if (!inserted) it->second = std::max(it->second, score);
    }
  }
  std::vector<NgramScore> ranked;
  ranked.reserve(best.size());
  for (const auto& [s, v] : best) ranked.push_back({s, v});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const NgramScore& a, const NgramScore& b) { return a.score > b.score; });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

std::vector<std::pair<std::string, FeatureOptions>> ablation_settings(
    std::optional<std::size_t> m_out) {
  auto make = [&](bool n, bool in, bool bow, bool out) {
    FeatureOptions o;
    o.noun_pair = n;
    o.between = in;
    o.bag_of_words = bow;
    o.outside = out;
    o.m_out = m_out;
    return o;
  };
  return {
      {"g_n", make(true, false, false, false)},
      {"g_in", make(false, true, false, false)},
      {"g_in'", make(false, true, true, false)},
      {"g_n+g_in", make(true, true, false, false)},
      {"g_n+g_in+g_out", make(true, true, false, true)},
  };
}

std::vector<AblationRow> run_ablations(std::span<const SemEvalInstance> instances,
                                       const EmbeddingParams& params,
                                       const SupervisedConfig& base,
                                       std::size_t folds, std::uint64_t split_seed) {
  std::vector<AblationRow> rows;
  for (auto& [name, features] : ablation_settings(base.features.m_out)) {
    SupervisedConfig config = base;
    config.features = features;
    const std::vector<SupervisedConfig> grid{config};
    auto cv = cross_validate(instances, params, grid, folds, split_seed);
    rows.push_back({name, features, std::move(cv.front())});
  }
  return rows;
}

}  // namespace relemb
