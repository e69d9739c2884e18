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


#include "relemb/features.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace relemb {

void FeatureOptions::validate() const {
  if (!noun_pair && !between && !outside) {
    throw ConfigError("at least one feature block must be enabled");
  }
}

std::string FeatureOptions::flags() const {
  std::string out;
  auto add = [&](std::string_view part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (noun_pair) add("n");
  if (between) add(bag_of_words ? "in'" : "in");
  if (outside) add("out");
  if (m_out) out += ":mout=" + std::to_string(*m_out);
  return out;
}

FeatureOptions FeatureOptions::parse_flags(std::string_view flags) {
  FeatureOptions opts;
  opts.noun_pair = opts.between = opts.outside = false;
  const auto colon = flags.find(':');
  std::string_view blocks = flags.substr(0, colon);
  if (colon != std::string_view::npos) {
    const std::string_view rest = flags.substr(colon + 1);
    if (rest.rfind("mout=", 0) != 0) {
      throw ConfigError("bad feature option suffix: '" + std::string(rest) + "'");
    }
    try {
      opts.m_out = std::stoul(std::string(rest.substr(5)));
    } catch (const std::exception&) {
      throw ConfigError("bad mout value in feature flags");
    }
  }
  while (!blocks.empty()) {
    const auto plus = blocks.find('+');
    const std::string_view part = blocks.substr(0, plus);
    if (part == "n") {
      opts.noun_pair = true;
    } else if (part == "in") {
      opts.between = true;
    } else if (part == "in'") {
      opts.between = true;
      opts.bag_of_words = true;
    } else if (part == "out") {
      opts.outside = true;
    } else {
      throw ConfigError("unknown feature block '" + std::string(part) + "'");
    }
    if (plus == std::string_view::npos) break;
    blocks.remove_prefix(plus + 1);
  }
  opts.validate();
  return opts;
}

std::optional<FeatureBlock> FeatureLayout::find(FeatureBlockKind kind) const {
  for (const auto& b : blocks) {
    if (b.kind == kind) return b;
  }
  return std::nullopt;
}

std::size_t ngram_dim(const EmbeddingParams& params) {
  return 2 * params.window * params.dim + params.target_weight_dim();
}

FeatureLayout feature_layout(const EmbeddingParams& params,
                             const FeatureOptions& options) {
  options.validate();
  FeatureLayout layout;
  auto push = [&](FeatureBlockKind kind, std::size_t length) {
    layout.blocks.push_back({kind, layout.size, length});
    layout.size += length;
  };
  if (options.noun_pair) push(FeatureBlockKind::kNounPair, 2 * params.dim);
  if (options.between) {
    if (options.bag_of_words) {
      push(FeatureBlockKind::kBetweenBagOfWords,
           params.dim + params.target_weight_dim());
    } else {
      push(FeatureBlockKind::kBetween, ngram_dim(params));
    }
  }
  if (options.outside) push(FeatureBlockKind::kOutside, 2 * params.dim);
  return layout;
}

void noun_pair_features(const NounPairContext& ctx, const EmbeddingParams& params,
                        std::span<double> out) {
  const std::size_t d = params.dim;
  std::ranges::copy(params.nouns.row(ctx.n1), out.begin());
  std::ranges::copy(params.nouns.row(ctx.n2), out.begin() + d);
}

void masked_ngram_embedding(const NounPairContext& ctx, std::size_t i,
                            std::size_t radius, const EmbeddingParams& params,
                            std::span<double> out) {
  if (i >= ctx.m_in()) throw std::out_of_range("n-gram position outside the between-span");
  const std::size_t d = params.dim;
  const std::size_t c = params.window;
  std::vector<WordId> neighbors(2 * c);
  window_neighbors(ctx, i, c, neighbors);
  for (std::size_t s = 0; s < 2 * c; ++s) {
    const std::size_t distance = s % c + 1;
    const WordId w = distance <= radius ? neighbors[s] : Vocabulary::kNullWord;
    std::ranges::copy(params.words.row(w), out.begin() + s * d);
  }
  std::ranges::copy(params.target_weights.row(ctx.between[i]),
                    out.begin() + 2 * c * d);
}

void ngram_embedding(const NounPairContext& ctx, std::size_t i,
                     const EmbeddingParams& params, std::span<double> out) {
  masked_ngram_embedding(ctx, i, params.window, params, out);
}

void between_features(const NounPairContext& ctx, const EmbeddingParams& params,
                      std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m_in = ctx.m_in();
  if (m_in == 0) return;
  std::vector<double> h(ngram_dim(params));
  for (std::size_t i = 0; i < m_in; ++i) {
    ngram_embedding(ctx, i, params, h);
    axpy(1.0, h, out);
  }
  const double inv = 1.0 / static_cast<double>(m_in);
  for (double& x : out) x *= inv;
}

void between_bag_of_words(const NounPairContext& ctx,
                          const EmbeddingParams& params, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m_in = ctx.m_in();
  if (m_in == 0) return;
  const std::size_t d = params.dim;
  for (auto w : ctx.between) {
    axpy(1.0, params.words.row(w), out.subspan(0, d));
    axpy(1.0, params.target_weights.row(w), out.subspan(d));
  }
  const double inv = 1.0 / static_cast<double>(m_in);
  for (double& x : out) x *= inv;
}

std::span<const WordId> outside_before(const NounPairContext& ctx,
                                       std::optional<std::size_t> m_out) {
  std::span<const WordId> all(ctx.before);
  if (!m_out) return all;
  if (*m_out > all.size()) {
    throw std::invalid_argument("M_out override exceeds the context's outside window");
  }
  return all.subspan(all.size() - *m_out);
}

std::span<const WordId> outside_after(const NounPairContext& ctx,
                                      std::optional<std::size_t> m_out) {
  std::span<const WordId> all(ctx.after);
  if (!m_out) return all;
  if (*m_out > all.size()) {
    throw std::invalid_argument("M_out override exceeds the context's outside window");
  }
  return all.subspan(0, *m_out);
}

void outside_features(const NounPairContext& ctx, const EmbeddingParams& params,
                      std::optional<std::size_t> m_out, std::span<double> out) {
  const std::size_t d = params.dim;
  std::fill(out.begin(), out.end(), 0.0);
  const auto before = outside_before(ctx, m_out);
  const auto after = outside_after(ctx, m_out);
  for (auto w : before) axpy(1.0 / static_cast<double>(before.size()), params.words.row(w), out.subspan(0, d));
  for (auto w : after) axpy(1.0 / static_cast<double>(after.size()), params.words.row(w), out.subspan(d, d));
}

void assemble_features(const NounPairContext& ctx, const EmbeddingParams& params,
                       const FeatureOptions& options, const FeatureLayout& layout,
                       std::span<double> out) {
  for (const auto& block : layout.blocks) {
    auto dst = out.subspan(block.offset, block.length);
    switch (block.kind) {
      case FeatureBlockKind::kNounPair:
        noun_pair_features(ctx, params, dst);
        break;
      case FeatureBlockKind::kBetween:
        between_features(ctx, params, dst);
        break;
      case FeatureBlockKind::kBetweenBagOfWords:
        between_bag_of_words(ctx, params, dst);
        break;
      case FeatureBlockKind::kOutside:
        outside_features(ctx, params, options.m_out, dst);
        break;
    }
  }
}

FeatureVector assemble_features(const NounPairContext& ctx,
                                const EmbeddingParams& params,
                                const FeatureOptions& options) {
  FeatureVector fv;
  fv.layout = feature_layout(params, options);
  fv.values.resize(fv.layout.size);
  assemble_features(ctx, params, options, fv.layout, fv.values);
  return fv;
}

void write_feature_dump(std::ostream& out, std::span<const SemEvalInstance> instances,
                        const EmbeddingParams& params, const FeatureOptions& options) {
  const FeatureLayout layout = feature_layout(params, options);
  std::vector<double> e(layout.size);
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& inst : instances) {
    assemble_features(inst.context, params, options, layout, e);
    out << inst.id << '\t' << inst.label.to_string() << '\t';
    for (std::size_t i = 0; i < e.size(); ++i) out << (i > 0 ? "," : "") << e[i];
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace relemb
