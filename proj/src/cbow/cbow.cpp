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


#include "relemb/cbow.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "../binary_io.hpp"
#include "relemb/pretrain.hpp"

namespace relemb {

void CbowConfig::validate() const {
  if (dim < 1) throw ConfigError("d must be >= 1");
  if (window < 1) throw ConfigError("c must be >= 1");
  if (negatives < 1) throw ConfigError("k must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(threshold > 0.0)) throw ConfigError("subsampling threshold t must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

EncodedSentence encode_sentence(const TaggedSentence& sentence,
                                const Vocabulary& vocab) {
  EncodedSentence ids;
  ids.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) ids.push_back(vocab.word_id(tok.surface));
  return ids;
}

std::size_t cbow_context(std::span<const WordId> sentence, std::size_t t,
                         std::size_t window, const CbowModel& model,
                         std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t lo = t >= window ? t - window : 0;
  const std::size_t hi = std::min(sentence.size(), t + window + 1);
  std::size_t count = 0;
  for (std::size_t j = lo; j < hi; ++j) {
    if (j == t) continue;
    axpy(1.0, model.input.row(sentence[j]), out);
    ++count;
  }
  if (count > 0) {
    const double inv = 1.0 / static_cast<double>(count);
    for (double& x : out) x *= inv;
  }
  return count;
}

double cbow_objective(std::span<const WordId> sentence, std::size_t t,
                      std::span<const WordId> noise, const CbowModel& model) {
  std::vector<double> h(model.dim);
  cbow_context(sentence, t, model.window, model, h);
  double obj = log_sigmoid(dot(model.output.row(sentence[t]), h));
  for (auto w : noise) obj += log_sigmoid(-dot(model.output.row(w), h));
  return obj;
}

namespace {

struct CbowScratch {
  std::vector<double> hidden;
  std::vector<double> grad_hidden;
  std::vector<double> scores;
};

double step(std::span<const WordId> sentence, std::size_t t,
            std::span<const WordId> noise, CbowModel& model, double lr,
            CbowScratch& s) {
  s.hidden.resize(model.dim);
  s.grad_hidden.assign(model.dim, 0.0);
  s.scores.resize(noise.size() + 1);
  const std::size_t count = cbow_context(sentence, t, model.window, model, s.hidden);

  double obj = 0.0;
  for (std::size_t j = 0; j <= noise.size(); ++j) {
    const WordId w = j == 0 ? sentence[t] : noise[j - 1];
    const double score = dot(model.output.row(w), s.hidden);
    const double label = j == 0 ? 1.0 : 0.0;
    obj += j == 0 ? log_sigmoid(score) : log_sigmoid(-score);
    s.scores[j] = label - sigmoid(score);
    axpy(s.scores[j], model.output.row(w), s.grad_hidden);
  }
  for (std::size_t j = 0; j <= noise.size(); ++j) {
    const WordId w = j == 0 ? sentence[t] : noise[j - 1];
    axpy(lr * s.scores[j], s.hidden, model.output.row(w));
  }
  if (count == 0) return obj;
  const double share = lr / static_cast<double>(count);
  const std::size_t lo = t >= model.window ? t - model.window : 0;
  const std::size_t hi = std::min(sentence.size(), t + model.window + 1);
  for (std::size_t j = lo; j < hi; ++j) {
    if (j != t) axpy(share, s.grad_hidden, model.input.row(sentence[j]));
  }
  return obj;
}

}  // namespace

double cbow_step(std::span<const WordId> sentence, std::size_t t,
                 std::span<const WordId> noise, CbowModel& model, double lr) {
  CbowScratch scratch;
  return step(sentence, t, noise, model, lr, scratch);
}

namespace {

constexpr std::size_t kBatchSentences = 64;

class CbowRun {
 public:
  CbowRun(std::span<const EncodedSentence> sentences, const Vocabulary& vocab,
          const CbowConfig& config, CbowModel& model, CbowReport& report)
      : sentences_(sentences),
        config_(config),
        model_(model),
        report_(report),
        sampler_(vocab.words().counts()),
        filter_(vocab.words().counts(), vocab.total_token_count(), config.threshold) {
    for (const auto& s : sentences) tokens_ += s.size();
  }

  std::uint64_t tokens() const { return tokens_; }

  void run() {
    report_.tokens_planned = config_.epochs * tokens_;
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
      cursor_ = 0;
      if (config_.threads == 1) {
        worker(0, epoch);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < config_.threads; ++t) {
          pool.emplace_back([this, t, epoch] { worker(t, epoch); });
        }
        for (auto& th : pool) th.join();
      }
    }
    if (report_.tokens_trained > 0) {
      report_.mean_objective =
          objective_ / static_cast<double>(report_.tokens_trained);
    }
  }

 private:
  void worker(std::size_t thread_index, std::size_t epoch) {
    std::seed_seq seq{config_.seed, static_cast<std::uint64_t>(thread_index),
                      static_cast<std::uint64_t>(epoch)};
    Rng rng(seq);
    CbowScratch scratch;
    EncodedSentence kept;
    std::vector<WordId> noise(config_.negatives);
    for (;;) {
      const std::size_t begin = cursor_.fetch_add(kBatchSentences);
      if (begin >= sentences_.size()) break;
      const std::size_t end = std::min(sentences_.size(), begin + kBatchSentences);
      std::uint64_t discarded = 0, trained = 0;
      double objective = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& sentence = sentences_[i];
        const std::uint64_t done =
            processed_.fetch_add(sentence.size(), std::memory_order_relaxed);
        kept.clear();
        for (auto w : sentence) {
          if (filter_.discard(w, rng)) {
            ++discarded;
          } else {
            kept.push_back(w);
          }
        }
        const double lr = decayed_learning_rate(config_.alpha, done,
                                                report_.tokens_planned);
        for (std::size_t t = 0; t < kept.size(); ++t) {
          sampler_.sample_noise(kept[t], noise, rng);
          objective += step(kept, t, noise, model_, lr, scratch);
          ++trained;
        }
      }
      std::lock_guard lock(mutex_);
      report_.tokens_discarded += discarded;
      report_.tokens_trained += trained;
      objective_ += objective;
    }
  }

  std::span<const EncodedSentence> sentences_;
  const CbowConfig& config_;
  CbowModel& model_;
  CbowReport& report_;
  NoiseSampler sampler_;
  SubsamplingFilter filter_;
  std::uint64_t tokens_ = 0;
  std::atomic<std::size_t> cursor_{0};
  std::atomic<std::uint64_t> processed_{0};
  std::mutex mutex_;
  double objective_ = 0.0;
};

}  // namespace

CbowModel train_cbow(std::span<const EncodedSentence> sentences,
                     const Vocabulary& vocab, const CbowConfig& config,
                     CbowReport* report) {
  config.validate();
  const std::size_t n = vocab.words().size();
  for (const auto& s : sentences) {
    for (auto w : s) {
      if (w >= n) throw std::out_of_range("word id outside the vocabulary");
    }
  }
  CbowModel model;
  model.dim = config.dim;
  model.window = config.window;
  model.words.reserve(n);
  for (std::uint32_t id = 0; id < n; ++id) model.words.push_back(vocab.words().surface(id));
  model.input = Matrix(n, config.dim);
  model.output = Matrix(n, config.dim);
  Rng init_rng(config.seed);
  const double scale = 1.0 / static_cast<double>(config.dim);
  for (double& x : model.input.values()) x = (uniform01(init_rng) - 0.5) * scale;

  CbowReport local;
  CbowReport& rep = report != nullptr ? *report : local;
  rep = CbowReport{};
  CbowRun run(sentences, vocab, config, model, rep);
  if (run.tokens() == 0) throw std::invalid_argument("no tokens in the sentence stream");
  run.run();
  return model;
}

EmbeddingParams import_as_initialization(const CbowModel& cbow,
                                         const Vocabulary& vocab,
                                         std::size_t window,
                                         ImportReport* report) {
  if (window < 1) throw ConfigError("c must be >= 1");
  std::unordered_map<std::string_view, std::uint32_t> index;
  for (std::uint32_t i = 0; i < cbow.words.size(); ++i) index.emplace(cbow.words[i], i);
  const auto unk = index.find(Vocabulary::kUnkSurface);
  if (unk == index.end()) {
    throw FormatError("CBOW model has no " + std::string(Vocabulary::kUnkSurface) +
                      " entry to stand in for missing words");
  }
  const std::uint32_t unk_row = unk->second;
  ImportReport local;
  ImportReport& rep = report != nullptr ? *report : local;
  rep = ImportReport{};

  const std::size_t d = cbow.dim;
  EmbeddingParams p;
  p.dim = d;
  p.window = window;
  p.words = Matrix(vocab.words().size(), d);
  p.nouns = Matrix(vocab.nouns().size(), d);
  p.target_weights = Matrix(vocab.words().size(), d);
  p.target_bias.assign(vocab.words().size(), 0.0);

  auto source_row = [&](const std::string& surface, std::vector<std::string>& missing) {
    const auto it = index.find(surface);
    if (it != index.end()) return it->second;
    missing.push_back(surface);
    return unk_row;
  };
  for (std::uint32_t id = 0; id < vocab.words().size(); ++id) {
    const std::uint32_t r = source_row(vocab.words().surface(id), rep.missing_words);
    std::ranges::copy(cbow.input.row(r), p.words.row(id).begin());
    std::ranges::copy(cbow.output.row(r), p.target_weights.row(id).begin());
  }
  for (std::uint32_t id = 0; id < vocab.nouns().size(); ++id) {
    const std::uint32_t r = source_row(vocab.nouns().surface(id), rep.missing_nouns);
    std::ranges::copy(cbow.input.row(r), p.nouns.row(id).begin());
  }
  return p;
}

CbowModel cbow_from_text_vectors(const TextVectors& input,
                                 const TextVectors* output, std::size_t window) {
  CbowModel m;
  m.dim = input.vectors.cols();
  m.window = window;
  m.words = input.words;
  m.input = input.vectors;
  m.output = Matrix(m.input.rows(), m.dim);
  if (output != nullptr) {
    if (output->words != input.words || output->vectors.cols() != m.dim) {
      throw FormatError("input and output vectors disagree on words or dimension");
    }
    m.output = output->vectors;
  }
  return m;
}

namespace {

std::size_t header_field(const std::string& header, std::string_view key) {
  const std::string needle = " " + std::string(key) + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) {
    throw FormatError("CBOW header lacks '" + std::string(key) + "'");
  }
  try {
    return std::stoull(header.substr(pos + needle.size()));
  } catch (const std::exception&) {
    throw FormatError("bad value for '" + std::string(key) + "' in CBOW header");
  }
}

}  // namespace

void write_cbow(std::ostream& out, const CbowModel& model) {
  out << "relemb-cbow v1 d=" << model.dim << " c=" << model.window
      << " nwords=" << model.words.size() << '\n';
  for (const auto& w : model.words) out << w << '\n';
  binary::write_f64s(out, model.input.values());
  binary::write_f64s(out, model.output.values());
  if (!out) throw std::runtime_error("failed writing CBOW model");
}

CbowModel read_cbow(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("relemb-cbow v1 ", 0) != 0) {
    throw FormatError("not a relemb-cbow v1 file");
  }
  CbowModel m;
  m.dim = header_field(header, "d");
  m.window = header_field(header, "c");
  const std::size_t n = header_field(header, "nwords");
  m.words.resize(n);
  for (auto& w : m.words) {
    if (!std::getline(in, w)) throw FormatError("truncated CBOW word list");
  }
  m.input = Matrix(n, m.dim);
  m.output = Matrix(n, m.dim);
  binary::read_f64s(in, m.input.values());
  binary::read_f64s(in, m.output.values());
  return m;
}

void save_cbow(const std::string& path, const CbowModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_cbow(out, model);
}

CbowModel load_cbow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_cbow(in);
}

}  // namespace relemb
