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


// relemb: command-line driver for the noun-pair embedding pipeline.
//
//   relemb build-vocab  tagged corpus -> vocabulary
//   relemb extract      tagged corpus -> noun-pair context file
//   relemb pretrain     contexts -> embedding model
//   relemb cbow         tagged corpus -> CBOW vectors (word2vec baseline)
//   relemb train        SemEval training file -> classifier
//   relemb cv           cross-validated hyperparameter grid or ablations
//   relemb eval         score predictions (or predict and score)
//   relemb wordsim      Spearman rho on a word-similarity list
//   relemb ngrams       highest-scoring n-grams per relation class
//
// Options can also come from an INI file given with --config, one section per
// subcommand ("[pretrain]" then "d = 100"); flags on the command line win.

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relemb/cbow.hpp"
#include "relemb/classifier.hpp"
#include "relemb/corpus.hpp"
#include "relemb/embeddings.hpp"
#include "relemb/eval.hpp"
#include "relemb/features.hpp"
#include "relemb/pretrain.hpp"
#include "relemb/scoring.hpp"

namespace relemb {
namespace {

// Bad arguments or missing inputs; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

Vocabulary load_vocab(const std::string& path) {
  auto in = open_input(path);
  return read_vocabulary(in);
}

std::vector<SemEvalInstance> load_semeval(const std::string& path,
                                          const Vocabulary& vocab,
                                          std::size_t m_out) {
  auto in = open_input(path);
  auto parsed = parse_semeval(in, vocab, m_out);
  for (const auto& e : parsed.errors) {
    fmt::print(stderr, "warning: {}:{}: instance {} skipped: {}\n", path, e.line,
               e.id, e.message);
  }
  if (parsed.instances.empty()) {
    throw std::runtime_error("no usable instances in '" + path + "'");
  }
  return std::move(parsed.instances);
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(fmt::format("{} is required", what));
  std::ifstream probe(path);
  if (!probe) throw UsageError(fmt::format("{} '{}' does not exist", what, path));
}

// Where the classifier's embeddings come from.
struct InitOptions {
  std::string init = "rand";
  std::string model;
  std::string cbow;
  std::size_t dim = 100;
  std::size_t window = 3;

  void add_to(CLI::App* app) {
    app->add_option("--init", init, "Embedding initialization")
        ->check(CLI::IsMember({"rand", "pretrained", "w2v"}))
        ->capture_default_str();
    app->add_option("--model", model, "Pretrained model file (--init pretrained)");
    app->add_option("--cbow", cbow, "CBOW model file (--init w2v)");
    app->add_option("--d", dim, "Embedding dimension for --init rand")
        ->capture_default_str();
    app->add_option("--c", window, "Window size c for --init rand and w2v")
        ->capture_default_str();
  }

  EmbeddingParams load(const Vocabulary& vocab, std::uint64_t seed) const {
    if (init == "rand") {
      if (dim < 1 || window < 1) throw ConfigError("d and c must be >= 1");
      return EmbeddingParams::random_init(dim, window, vocab.words().size(),
                                          vocab.nouns().size(), seed);
    }
    if (init == "pretrained") {
      require_file(model, "--model");
      EmbeddingParams p = load_model(model);
      if (p.num_words() != vocab.words().size() ||
          p.num_nouns() != vocab.nouns().size()) {
        throw FormatError(fmt::format(
            "model has {} words / {} nouns but the vocabulary has {} / {}",
            p.num_words(), p.num_nouns(), vocab.words().size(),
            vocab.nouns().size()));
      }
      return p;
    }
    require_file(cbow, "--cbow");
    ImportReport report;
    EmbeddingParams p = import_as_initialization(load_cbow(cbow), vocab, window, &report);
    if (!report.missing_words.empty() || !report.missing_nouns.empty()) {
      fmt::print(stderr, "note: {} words and {} nouns not in the CBOW model use UNK\n",
                 report.missing_words.size(), report.missing_nouns.size());
    }
    return p;
  }
};

// Shared supervised-training flags.
struct SupervisedOptions {
  SupervisedConfig config;
  std::string features = "n+in+out";
  bool no_dropout = false;
  bool no_fine_tune = false;

  void add_to(CLI::App* app, bool scalar_rates) {
    if (scalar_rates) {
      app->add_option("--eta", config.eta, "AdaGrad learning rate")->capture_default_str();
      app->add_option("--lambda", config.lambda, "L2 strength")->capture_default_str();
    }
    app->add_option("--epochs", config.epochs, "Training epochs")->capture_default_str();
    app->add_option("--features", features, "Feature blocks, e.g. n+in+out or in'")
        ->capture_default_str();
    app->add_flag("--no-dropout", no_dropout, "Disable dropout");
    app->add_flag("--no-fine-tune", no_fine_tune, "Keep embeddings fixed");
    app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  }

  SupervisedConfig resolve(std::size_t m_out) const {
    SupervisedConfig c = config;
    c.dropout = !no_dropout;
    c.fine_tune = !no_fine_tune;
    c.features = FeatureOptions::parse_flags(features);
    if (!c.features.m_out) c.features.m_out = m_out;
    c.validate();
    return c;
  }
};

// --- build-vocab -----------------------------------------------------------

struct BuildVocabCmd {
  std::string corpus;
  std::string out;
  std::size_t max_words = 300000;
  std::size_t max_nouns = 300000;
  bool keep_case = false;

  void add_to(CLI::App* app) {
    app->add_option("--corpus", corpus, "POS-tagged corpus (surface<TAB>tag)")->required();
    app->add_option("--out", out, "Vocabulary output file")->required();
    app->add_option("--max-words", max_words, "Word inventory size")->capture_default_str();
    app->add_option("--max-nouns", max_nouns, "Noun inventory size")->capture_default_str();
    app->add_flag("--keep-case", keep_case, "Do not lowercase surfaces");
  }

  int run() const {
    require_file(corpus, "--corpus");
    if (max_words < 1 || max_nouns < 1) throw ConfigError("inventory sizes must be >= 1");
    auto in = open_input(corpus);
    TaggedCorpusReader reader(in);
    VocabularyCounter counter(!keep_case);
    std::uint64_t sentences = 0, tokens = 0;
    while (auto s = reader.next()) {
      counter.add(*s, sentences++);
      tokens += s->tokens.size();
    }
    const Vocabulary vocab = counter.build(max_words, max_nouns);
    auto out_file = open_output(out);
    write_vocabulary(out_file, vocab);
    fmt::print("sentences={} tokens={} malformed_lines={} words={} nouns={}\n",
               sentences, tokens, reader.malformed_lines(), vocab.words().size(),
               vocab.nouns().size());
    return 0;
  }
};

// --- extract ----------------------------------------------------------------

struct ExtractCmd {
  std::string corpus;
  std::string vocab;
  std::string out;
  ExtractionOptions options;

  void add_to(CLI::App* app) {
    app->add_option("--corpus", corpus, "POS-tagged corpus")->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--out", out, "Context output file")->required();
    app->add_option("--m-out", options.m_out, "Outside window size")->capture_default_str();
    app->add_option("--max-between", options.max_between,
                    "Maximum number of words between the nouns")
        ->capture_default_str();
    app->add_option("--min-between", options.min_between,
                    "Minimum number of words between the nouns")
        ->capture_default_str();
  }

  int run() const {
    require_file(corpus, "--corpus");
    require_file(vocab, "--vocab");
    if (options.min_between > options.max_between) {
      throw ConfigError("--min-between exceeds --max-between");
    }
    const Vocabulary v = load_vocab(vocab);
    auto in = open_input(corpus);
    TaggedCorpusReader reader(in);
    ContextFileWriter writer(out, options.m_out);
    std::uint64_t sentences = 0, tokens = 0, unknown = 0;
    while (auto s = reader.next()) {
      for (const auto& tok : s->tokens) {
        if (v.word_id(tok.surface) == Vocabulary::kUnkWord) ++unknown;
      }
      tokens += s->tokens.size();
      for (const auto& ctx : extract_noun_pair_contexts(*s, v, options, sentences)) {
        writer.write(ctx);
      }
      ++sentences;
    }
    writer.close();
    fmt::print("sentences={} pairs={} targets={} unk_rate={:.6f}\n", sentences,
               writer.count(), writer.targets(),
               tokens > 0 ? static_cast<double>(unknown) / static_cast<double>(tokens) : 0.0);
    return 0;
  }
};

// --- pretrain ---------------------------------------------------------------

struct PretrainCmd {
  std::string vocab;
  std::string contexts;
  std::string out;
  std::string text_out;
  PretrainConfig config;

  void add_to(CLI::App* app) {
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--contexts", contexts, "Context file from 'extract'")->required();
    app->add_option("--out", out, "Model output file")->required();
    app->add_option("--text-out", text_out,
                    "Also write <prefix>.nouns.txt and <prefix>.words.txt");
    app->add_option("--d", config.dim, "Embedding dimension")->capture_default_str();
    app->add_option("--c", config.window, "Window size")->capture_default_str();
    app->add_option("--k", config.negatives, "Negative samples")->capture_default_str();
    app->add_option("--alpha", config.alpha, "Initial learning rate")->capture_default_str();
    app->add_option("--t", config.threshold, "Subsampling threshold")->capture_default_str();
    app->add_option("--epochs", config.epochs, "Passes over the contexts")
        ->capture_default_str();
    app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
    app->add_option("--report-every", config.report_every, "Targets per progress line")
        ->capture_default_str();
  }

  int run() {
    config.validate();
    require_file(vocab, "--vocab");
    require_file(contexts, "--contexts");
    const Vocabulary v = load_vocab(vocab);
    ContextFileReader source(contexts);
    config.m_out = source.m_out();
    fmt::print(stderr, "contexts={} targets={} m_out={}\n", source.total_contexts(),
               source.total_targets(), source.m_out());
    TrainingReport report;
    const EmbeddingParams params = train_embeddings(
        source, v, config, &report, [](const ReportWindow& w) {
          fmt::print(stderr, "progress targets={} trained={} objective={:.6f} lr={:.6g}\n",
                     w.targets_processed, w.targets_trained, w.mean_objective,
                     w.learning_rate);
        });
    save_model(out, params);
    if (!text_out.empty()) {
      auto nouns = open_output(text_out + ".nouns.txt");
      write_text_vectors(nouns, params.nouns, v.nouns());
      auto words = open_output(text_out + ".words.txt");
      write_text_vectors(words, params.words, v.words());
    }
    fmt::print("targets_planned={} trained={} pairs_discarded={} targets_discarded={}\n",
               report.targets_planned, report.targets_trained, report.pairs_discarded,
               report.targets_discarded);
    return 0;
  }
};

// --- cbow -------------------------------------------------------------------

struct CbowCmd {
  std::string corpus;
  std::string vocab;
  std::string out;
  std::string text_out;
  CbowConfig config;

  void add_to(CLI::App* app) {
    app->add_option("--corpus", corpus, "POS-tagged corpus")->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--out", out, "CBOW model output file")->required();
    app->add_option("--text-out", text_out, "Also write input vectors as text");
    app->add_option("--d", config.dim, "Embedding dimension")->capture_default_str();
    app->add_option("--c", config.window, "Window size")->capture_default_str();
    app->add_option("--k", config.negatives, "Negative samples")->capture_default_str();
    app->add_option("--alpha", config.alpha, "Initial learning rate")->capture_default_str();
    app->add_option("--t", config.threshold, "Subsampling threshold")->capture_default_str();
    app->add_option("--epochs", config.epochs, "Passes over the corpus")
        ->capture_default_str();
    app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  }

  int run() const {
    config.validate();
    require_file(corpus, "--corpus");
    require_file(vocab, "--vocab");
    const Vocabulary v = load_vocab(vocab);
    auto in = open_input(corpus);
    TaggedCorpusReader reader(in);
    std::vector<EncodedSentence> sentences;
    while (auto s = reader.next()) sentences.push_back(encode_sentence(*s, v));
    CbowReport report;
    const CbowModel model = train_cbow(sentences, v, config, &report);
    save_cbow(out, model);
    if (!text_out.empty()) {
      auto text = open_output(text_out);
      write_text_vectors(text, model.input, v.words());
    }
    fmt::print("tokens_planned={} trained={} discarded={} mean_objective={:.6f}\n",
               report.tokens_planned, report.tokens_trained, report.tokens_discarded,
               report.mean_objective);
    return 0;
  }
};

// --- train ------------------------------------------------------------------

struct TrainCmd {
  std::string data;
  std::string vocab;
  std::string out;
  std::string embeddings_out;
  std::size_t m_out = 5;
  InitOptions init;
  SupervisedOptions supervised;

  void add_to(CLI::App* app) {
    app->add_option("--train", data, "SemEval-format training file")->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--out", out, "Classifier output file")->required();
    app->add_option("--embeddings-out", embeddings_out,
                    "Embeddings after fine-tuning (needed by eval)")
        ->required();
    app->add_option("--m-out", m_out, "Outside window size")->capture_default_str();
    init.add_to(app);
    supervised.add_to(app, true);
  }

  int run() const {
    require_file(data, "--train");
    require_file(vocab, "--vocab");
    const SupervisedConfig config = supervised.resolve(m_out);
    const Vocabulary v = load_vocab(vocab);
    const auto instances = load_semeval(data, v, m_out);
    EmbeddingParams params = init.load(v, config.seed);
    auto result = train_classifier(instances, std::move(params), config);
    for (std::size_t e = 0; e < result.epoch_objective.size(); ++e) {
      fmt::print(stderr, "epoch {} objective={:.6f}\n", e + 1, result.epoch_objective[e]);
    }
    save_classifier(out, result.model);
    save_model(embeddings_out, result.embeddings);
    fmt::print("instances={} features={} dim={}\n", instances.size(),
               result.model.features.flags(), result.model.softmax.dim());
    return 0;
  }
};

// --- cv ---------------------------------------------------------------------

struct CvCmd {
  std::string data;
  std::string vocab;
  std::size_t folds = 10;
  std::uint64_t split_seed = 1;
  std::vector<double> etas{0.05};
  std::vector<double> lambdas{1e-5};
  std::vector<std::size_t> m_outs{5};
  bool ablations = false;
  InitOptions init;
  SupervisedOptions supervised;

  void add_to(CLI::App* app) {
    app->add_option("--train", data, "SemEval-format training file")->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--folds", folds, "Number of folds")->capture_default_str();
    app->add_option("--split-seed", split_seed, "Seed of the fold split")
        ->capture_default_str();
    app->add_option("--eta", etas, "AdaGrad learning rates to try")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--lambda", lambdas, "L2 strengths to try")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--m-out", m_outs, "Outside window sizes to try")
        ->delimiter(',')
        ->capture_default_str();
    app->add_flag("--ablations", ablations,
                  "Compare feature combinations instead of a grid (uses the first "
                  "eta/lambda/m-out)");
    init.add_to(app);
    supervised.add_to(app, false);
  }

  int run() const {
    require_file(data, "--train");
    require_file(vocab, "--vocab");
    if (etas.empty() || lambdas.empty() || m_outs.empty()) {
      throw ConfigError("grid lists must not be empty");
    }
    const std::size_t parse_m_out = *std::max_element(m_outs.begin(), m_outs.end());
    const Vocabulary v = load_vocab(vocab);
    const auto instances = load_semeval(data, v, parse_m_out);
    if (folds < 2 || folds > instances.size()) {
      throw ConfigError(fmt::format("--folds must be in [2, {}]", instances.size()));
    }
    const EmbeddingParams params = init.load(v, supervised.config.seed);
    const auto assignment = fold_assignment(instances.size(), folds, split_seed);
    std::vector<std::size_t> sizes(folds, 0);
    for (auto f : assignment) ++sizes[f];
    fmt::print("instances={} folds={} fold_sizes={}\n", instances.size(), folds,
               fmt::join(sizes, ","));

    if (ablations) {
      SupervisedOptions base_opts = supervised;
      base_opts.config.eta = etas.front();
      base_opts.config.lambda = lambdas.front();
      const SupervisedConfig base = base_opts.resolve(m_outs.front());
      fmt::print("{:<16} {:>8} {:>8}\n", "features", "F1", "acc");
      for (const auto& row : run_ablations(instances, params, base, folds, split_seed)) {
        fmt::print("{:<16} {:>8.2f} {:>8.2f}\n", row.name, row.cv.mean_f1,
                   row.cv.mean_accuracy);
      }
      return 0;
    }

    std::vector<SupervisedConfig> grid;
    for (auto m : m_outs) {
      for (auto eta : etas) {
        for (auto lambda : lambdas) {
          SupervisedOptions o = supervised;
          o.config.eta = eta;
          o.config.lambda = lambda;
          SupervisedConfig c = o.resolve(m);
          c.features.m_out = m;
          grid.push_back(c);
        }
      }
    }
    const auto results = cross_validate(instances, params, grid, folds, split_seed);
    fmt::print("{:>6} {:>10} {:>10} {:>8} {:>8}\n", "m_out", "eta", "lambda", "F1", "acc");
    const CvResult* best = nullptr;
    for (const auto& r : results) {
      fmt::print("{:>6} {:>10g} {:>10g} {:>8.2f} {:>8.2f}\n", *r.config.features.m_out,
                 r.config.eta, r.config.lambda, r.mean_f1, r.mean_accuracy);
      if (best == nullptr || r.mean_f1 > best->mean_f1) best = &r;
    }
    fmt::print("best m_out={} eta={:g} lambda={:g} F1={:.2f}\n",
               *best->config.features.m_out, best->config.eta, best->config.lambda,
               best->mean_f1);
    return 0;
  }
};

// --- eval -------------------------------------------------------------------

// Gold labels from either a SemEval-format file or "id<TAB>label" lines.
std::vector<Prediction> read_gold(const std::string& path) {
  auto in = open_input(path);
  std::string first;
  while (std::getline(in, first) && first.find_first_not_of(" \t\r") == std::string::npos) {
  }
  in.clear();
  in.seekg(0);
  const auto tab = first.find('\t');
  const bool semeval = tab != std::string::npos && tab + 1 < first.size() &&
                       first[tab + 1] == '"';
  if (!semeval) return read_predictions(in);
  const Vocabulary empty;
  std::vector<Prediction> gold;
  for (const auto& inst : load_semeval(path, empty, 0)) {
    gold.push_back({inst.id, inst.label});
  }
  return gold;
}

struct EvalCmd {
  std::string gold;
  std::string pred;
  std::string test;
  std::string vocab;
  std::string model;
  std::string classifier;
  std::string predictions_out;
  std::string report_out;
  std::string dump_features;
  std::string format = "table";
  std::size_t bootstrap = 0;
  double confidence = 0.95;
  std::uint64_t seed = 1;

  void add_to(CLI::App* app) {
    app->add_option("--gold", gold, "Gold labels (SemEval file or id<TAB>label)");
    app->add_option("--pred", pred, "Predicted labels (id<TAB>label)");
    app->add_option("--test", test, "SemEval file to predict and score");
    app->add_option("--vocab", vocab, "Vocabulary file (with --test)");
    app->add_option("--model", model, "Embeddings written by 'train' (with --test)");
    app->add_option("--classifier", classifier, "Classifier file (with --test)");
    app->add_option("--predictions-out", predictions_out, "Write predictions here");
    app->add_option("--report-out", report_out, "Write the report here instead of stdout");
    app->add_option("--dump-features", dump_features,
                    "Write the feature vectors of --test instances here");
    app->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"table", "kv"}))
        ->capture_default_str();
    app->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 = none)")
        ->capture_default_str();
    app->add_option("--confidence", confidence, "Bootstrap interval level")
        ->capture_default_str();
    app->add_option("--seed", seed, "Bootstrap seed")->capture_default_str();
  }

  int run() const {
    std::vector<RelationLabel> g, p;
    if (!test.empty()) {
      require_file(test, "--test");
      require_file(vocab, "--vocab");
      require_file(model, "--model");
      require_file(classifier, "--classifier");
      const Vocabulary v = load_vocab(vocab);
      const EmbeddingParams emb = load_model(model);
      const ClassifierModel clf = load_classifier(classifier);
      check_compatible(clf, emb);
      const auto instances = load_semeval(test, v, clf.features.m_out.value_or(5));
      std::vector<Prediction> preds;
      for (const auto& inst : instances) {
        g.push_back(inst.label);
        preds.push_back({inst.id, predict(inst.context, clf, emb)});
        p.push_back(preds.back().label);
      }
      if (!predictions_out.empty()) {
        auto out = open_output(predictions_out);
        write_predictions(out, preds);
      }
      if (!dump_features.empty()) {
        auto out = open_output(dump_features);
        write_feature_dump(out, instances, emb, clf.features);
      }
    } else {
      require_file(gold, "--gold");
      require_file(pred, "--pred");
      const auto gold_rows = read_gold(gold);
      auto pred_in = open_input(pred);
      const auto pred_rows = read_predictions(pred_in);
      std::map<int, RelationLabel> by_id;
      for (const auto& r : pred_rows) {
        if (!by_id.emplace(r.id, r.label).second) {
          throw FormatError(fmt::format("duplicate prediction for id {}", r.id));
        }
      }
      for (const auto& r : gold_rows) {
        const auto it = by_id.find(r.id);
        if (it == by_id.end()) {
          throw FormatError(fmt::format("no prediction for id {}", r.id));
        }
        g.push_back(r.label);
        p.push_back(it->second);
      }
      if (by_id.size() != gold_rows.size()) {
        throw FormatError("predictions contain ids that are not in the gold file");
      }
    }
    EvalReport report = score_semeval(g, p);
    if (bootstrap > 0) report.interval = bootstrap_ci(g, p, bootstrap, confidence, seed);
    std::ostringstream text;
    if (format == "kv") {
      write_report_keyvalue(text, report);
    } else {
      write_report_table(text, report);
    }
    if (report_out.empty()) {
      std::cout << text.str();
    } else {
      auto out = open_output(report_out);
      out << text.str();
    }
    return 0;
  }
};

// --- wordsim ----------------------------------------------------------------

struct WordSimCmd {
  std::string pairs;
  std::string vocab;
  std::string model;
  std::string cbow;
  std::string table = "words";

  void add_to(CLI::App* app) {
    app->add_option("--pairs", pairs, "Word-similarity list (word1,word2,score)")
        ->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--model", model, "Embedding model file");
    app->add_option("--cbow", cbow, "CBOW model file (instead of --model)");
    app->add_option("--table", table, "Embedding table to compare")
        ->check(CLI::IsMember({"words", "nouns"}))
        ->capture_default_str();
  }

  int run() const {
    require_file(pairs, "--pairs");
    require_file(vocab, "--vocab");
    if (model.empty() == cbow.empty()) throw UsageError("give exactly one of --model, --cbow");
    const Vocabulary v = load_vocab(vocab);
    EmbeddingParams params;
    if (!model.empty()) {
      require_file(model, "--model");
      params = load_model(model);
    } else {
      require_file(cbow, "--cbow");
      const CbowModel m = load_cbow(cbow);
      params = import_as_initialization(m, v, std::max<std::size_t>(m.window, 1));
    }
    auto in = open_input(pairs);
    const auto list = read_wordsim(in);
    const auto result = spearman_wordsim(
        list, table == "nouns" ? EmbeddingTable::kNouns : EmbeddingTable::kWords, params, v);
    fmt::print("rho={:.4f} pairs={} oov_pairs={}\n", result.rho, result.pairs,
               result.oov_pairs);
    if (!result.oov_words.empty()) {
      fmt::print(stderr, "scored via UNK: {}\n", fmt::join(result.oov_words, " "));
    }
    return 0;
  }
};

// --- ngrams -----------------------------------------------------------------

struct NgramsCmd {
  std::string data;
  std::string vocab;
  std::string model;
  std::string classifier;
  std::vector<std::string> classes;
  std::size_t n = 3;
  std::size_t top = 3;

  void add_to(CLI::App* app) {
    app->add_option("--data", data, "SemEval-format file to collect n-grams from")
        ->required();
    app->add_option("--vocab", vocab, "Vocabulary file")->required();
    app->add_option("--model", model, "Embeddings written by 'train'")->required();
    app->add_option("--classifier", classifier, "Classifier file")->required();
    app->add_option("--class", classes, "Labels to list, e.g. 'Cause-Effect(e1,e2)' "
                                        "(default: all relation labels)");
    app->add_option("--n", n, "n-gram length (odd)")->capture_default_str();
    app->add_option("--top", top, "Entries per class")->capture_default_str();
  }

  int run() const {
    require_file(data, "--data");
    require_file(vocab, "--vocab");
    require_file(model, "--model");
    require_file(classifier, "--classifier");
    const Vocabulary v = load_vocab(vocab);
    const EmbeddingParams emb = load_model(model);
    const ClassifierModel clf = load_classifier(classifier);
    check_compatible(clf, emb);
    const auto instances = load_semeval(data, v, clf.features.m_out.value_or(5));
    std::vector<RelationLabel> labels;
    for (const auto& c : classes) labels.push_back(RelationLabel::parse(c));
    if (labels.empty()) {
      for (int i = 1; i < kNumLabels; ++i) labels.push_back(RelationLabel::from_index(i));
    }
    for (const auto& label : labels) {
      if (static_cast<std::size_t>(label.index()) >= clf.softmax.labels()) {
        throw FormatError("classifier has no class " + label.to_string());
      }
      fmt::print("{}\n", label.to_string());
      for (const auto& s : top_ngrams(clf, emb, v, instances, label.index(), n, top)) {
        fmt::print("  {:<40} {:.3f}\n", s.surface, s.score);
      }
    }
    return 0;
  }
};

void log_resolved_config(const CLI::App* sub) {
  fmt::print(stderr, "# resolved configuration\n[{}]\n{}# end of configuration\n",
             sub->get_name(), sub->config_to_str(true, false));
}

}  // namespace
}  // namespace relemb

int main(int argc, char** argv) {
  using namespace relemb;
  CLI::App app{"Noun-pair relation embeddings and SemEval-2010 Task 8 classification"};
  app.set_config("--config", "", "INI file with one [subcommand] section");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  BuildVocabCmd build_vocab;
  ExtractCmd extract;
  PretrainCmd pretrain;
  CbowCmd cbow;
  TrainCmd train;
  CvCmd cv;
  EvalCmd eval;
  WordSimCmd wordsim;
  NgramsCmd ngrams;

  std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    cmd.add_to(sub);
    commands.emplace_back(sub, [&cmd] { return cmd.run(); });
  };
  add("build-vocab", "Build word and noun inventories from a tagged corpus", build_vocab);
  add("extract", "Extract noun-pair contexts for pretraining", extract);
  add("pretrain", "Train noun-pair embeddings", pretrain);
  add("cbow", "Train CBOW word vectors (word2vec baseline)", cbow);
  add("train", "Train the relation classifier", train);
  add("cv", "Cross-validate classifier settings", cv);
  add("eval", "Score predictions with the official metric", eval);
  add("wordsim", "Spearman correlation on a word-similarity list", wordsim);
  add("ngrams", "List the n-grams each relation class weighs most", ngrams);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    log_resolved_config(sub);
    try {
      return run();
    } catch (const UsageError& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 2;
    } catch (const ConfigError& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 1;
    }
  }
  return 2;
}
