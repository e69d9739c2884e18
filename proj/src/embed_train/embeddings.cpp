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


#include "relemb/embeddings.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "../binary_io.hpp"

namespace relemb {

EmbeddingParams EmbeddingParams::random_init(std::size_t dim, std::size_t window,
                                             std::size_t num_words,
                                             std::size_t num_nouns,
                                             std::uint64_t seed) {
  EmbeddingParams p;
  p.dim = dim;
  p.window = window;
  p.nouns = Matrix(num_nouns, dim);
  p.words = Matrix(num_words, dim);
  p.target_weights = Matrix(num_words, p.predictor_dim());
  p.target_bias.assign(num_words, 0.0);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  for (double& x : p.nouns.values()) x = gauss(rng);
  for (double& x : p.words.values()) x = gauss(rng);
  return p;
}

void EmbeddingParams::check_shapes() const {
  auto fail = [](const std::string& what) {
    throw FormatError("inconsistent embedding shapes: " + what);
  };
  if (dim == 0) fail("d = 0");
  if (nouns.cols() != dim) fail("noun vectors are not d-dimensional");
  if (words.cols() != dim) fail("word vectors are not d-dimensional");
  if (target_weights.rows() != words.rows()) {
    fail("prediction weights do not cover the word inventory");
  }
  if (target_bias.size() != words.rows()) {
    fail("bias does not cover the word inventory");
  }
  if (target_weights.cols() != predictor_dim() && target_weights.cols() != dim) {
    fail("prediction weight length is neither 2d(2+c) nor d");
  }
}

bool EmbeddingParams::all_finite() const {
  return relemb::all_finite(nouns.values()) && relemb::all_finite(words.values()) &&
         relemb::all_finite(target_weights.values()) &&
         relemb::all_finite(target_bias);
}

void window_neighbors(const NounPairContext& ctx, std::size_t target,
                      std::size_t window, std::span<WordId> out) {
  const std::size_t m_in = ctx.m_in();
  for (std::size_t j = 1; j <= window; ++j) {
    out[j - 1] = target >= j ? ctx.between[target - j] : Vocabulary::kNullWord;
    out[window + j - 1] =
        target + j < m_in ? ctx.between[target + j] : Vocabulary::kNullWord;
  }
}

void write_model(std::ostream& out, const EmbeddingParams& params) {
  params.check_shapes();
  out << "relemb-model v1 d=" << params.dim << " c=" << params.window
      << " nwords=" << params.num_words() << " nnouns=" << params.num_nouns();
  if (params.target_weight_dim() != params.predictor_dim()) {
    out << " tdim=" << params.target_weight_dim();
  }
  out << '\n';
  binary::write_f64s(out, params.nouns.values());
  binary::write_f64s(out, params.words.values());
  binary::write_f64s(out, params.target_weights.values());
  binary::write_f64s(out, params.target_bias);
  if (!out) throw std::runtime_error("failed writing model");
}

namespace {

std::size_t header_value(const std::string& header, std::string_view key,
                         std::optional<std::size_t> fallback = std::nullopt) {
  const std::string needle = " " + std::string(key) + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) {
    if (fallback) return *fallback;
    throw FormatError("model header lacks '" + std::string(key) + "'");
  }
  try {
    return std::stoull(header.substr(pos + needle.size()));
  } catch (const std::exception&) {
    throw FormatError("bad value for '" + std::string(key) + "' in model header");
  }
}

}  // namespace

EmbeddingParams read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("relemb-model v1 ", 0) != 0) {
    throw FormatError("not a relemb-model v1 file");
  }
  EmbeddingParams p;
  p.dim = header_value(header, "d");
  p.window = header_value(header, "c");
  const std::size_t nwords = header_value(header, "nwords");
  const std::size_t nnouns = header_value(header, "nnouns");
  const std::size_t tdim = header_value(header, "tdim", p.predictor_dim());
  p.nouns = Matrix(nnouns, p.dim);
  p.words = Matrix(nwords, p.dim);
  p.target_weights = Matrix(nwords, tdim);
  p.target_bias.assign(nwords, 0.0);
  binary::read_f64s(in, p.nouns.values());
  binary::read_f64s(in, p.words.values());
  binary::read_f64s(in, p.target_weights.values());
  binary::read_f64s(in, p.target_bias);
  p.check_shapes();
  return p;
}

void save_model(const std::string& path, const EmbeddingParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_model(out, params);
}

EmbeddingParams load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_model(in);
}

void write_text_vectors(std::ostream& out, const Matrix& vectors,
                        const Inventory& inventory) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::uint32_t id = 0; id < vectors.rows(); ++id) {
    out << inventory.surface(id);
    for (double x : vectors.row(id)) out << ' ' << x;
    out << '\n';
  }
}

TextVectors read_text_vectors(std::istream& in) {
  TextVectors tv;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> row;
    double x;
    while (ls >> x) row.push_back(x);
    if (first) {
      first = false;
      // word2vec text header: "<rows> <dim>"
      if (row.size() == 1 && word.find_first_not_of("0123456789") == std::string::npos) {
        continue;
      }
    }
    if (!ls.eof()) throw FormatError("non-numeric vector entry for '" + word + "'");
    if (dim == 0) dim = row.size();
    if (row.size() != dim || dim == 0) {
      throw FormatError("vector for '" + word + "' has " +
                        std::to_string(row.size()) + " entries, expected " +
                        std::to_string(dim));
    }
    tv.words.push_back(std::move(word));
    values.insert(values.end(), row.begin(), row.end());
  }
  tv.vectors = Matrix(tv.words.size(), dim);
  std::copy(values.begin(), values.end(), tv.vectors.values().begin());
  return tv;
}

}  // namespace relemb
