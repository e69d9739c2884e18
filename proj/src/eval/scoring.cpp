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


#include "relemb/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "relemb/common.hpp"

namespace relemb {
namespace {

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::size_t family_slot(RelationLabel label) {
  return static_cast<std::size_t>(label.family()) - 1;
}

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string short_label(int index) {
  const auto label = RelationLabel::from_index(index);
  std::string s(family_abbrev(label.family()));
  if (label.direction() == Direction::kE1E2) s += "1";
  if (label.direction() == Direction::kE2E1) s += "2";
  return s;
}

}  // namespace

EvalReport score_semeval(std::span<const RelationLabel> gold,
                         std::span<const RelationLabel> pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and predicted label counts differ (" +
                                std::to_string(gold.size()) + " vs " +
                                std::to_string(pred.size()) + ")");
  }
  EvalReport r;
  r.instances = gold.size();
  std::size_t correct = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const RelationLabel g = gold[k];
    const RelationLabel p = pred[k];
    ++r.confusion[g.index()][p.index()];
    if (g == p) {
      ++correct;
      if (!g.is_other()) ++r.families[family_slot(g)].true_positives;
    }
    if (!g.is_other()) ++r.families[family_slot(g)].gold;
    if (!p.is_other()) ++r.families[family_slot(p)].predicted;
  }
  double f1_sum = 0.0;
  for (auto& fs : r.families) {
    fs.precision = percent(fs.true_positives, fs.predicted);
    fs.recall = percent(fs.true_positives, fs.gold);
    fs.f1 = fs.precision + fs.recall > 0.0
                ? 2.0 * fs.precision * fs.recall / (fs.precision + fs.recall)
                : 0.0;
    if (fs.gold > 0 || fs.predicted > 0) {
      ++r.scored_families;
      f1_sum += fs.f1;
    }
  }
  r.macro_f1 = r.scored_families == 0 ? 0.0 : f1_sum / static_cast<double>(r.scored_families);
  r.accuracy = percent(correct, gold.size());
  return r;
}

BootstrapInterval bootstrap_ci(std::span<const RelationLabel> gold,
                               std::span<const RelationLabel> pred,
                               std::size_t iterations, double level,
                               std::uint64_t seed) {
  if (iterations < 100) throw std::invalid_argument("bootstrap needs >= 100 iterations");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  if (gold.size() != pred.size() || gold.empty()) {
    throw std::invalid_argument("bootstrap needs equal-length, non-empty label sets");
  }
  const std::size_t n = gold.size();
  std::vector<double> scores;
  scores.reserve(iterations);
  std::vector<RelationLabel> g(n), p(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(it)};
    Rng rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = pick(rng);
      g[k] = gold[j];
      p[k] = pred[j];
    }
    scores.push_back(score_semeval(g, p).macro_f1);
  }
  std::sort(scores.begin(), scores.end());
  const double tail = (1.0 - level) / 2.0;
  return {quantile(scores, tail), quantile(scores, 1.0 - tail), level};
}

void write_report_table(std::ostream& out, const EvalReport& r) {
  fmt::print(out, "Confusion matrix (rows: gold, columns: predicted)\n{:>6}", "");
  for (int j = 0; j < kNumLabels; ++j) fmt::print(out, " {:>5}", short_label(j));
  fmt::print(out, " {:>6}\n", "SUM");
  for (int i = 0; i < kNumLabels; ++i) {
    fmt::print(out, "{:>6}", short_label(i));
    std::size_t row = 0;
    for (int j = 0; j < kNumLabels; ++j) {
      fmt::print(out, " {:>5}", r.confusion[i][j]);
      row += r.confusion[i][j];
    }
    fmt::print(out, " {:>6}\n", row);
  }
  fmt::print(out, "\nPer-family scores (directed matching)\n");
  fmt::print(out, "{:<20} {:>9} {:>9} {:>9} {:>6} {:>6} {:>6}\n", "family", "P", "R",
             "F1", "TP", "pred", "gold");
  for (int f = 1; f <= kNumRelationFamilies; ++f) {
    const auto& fs = r.families[f - 1];
    fmt::print(out, "{:<20} {:>8.2f}% {:>8.2f}% {:>8.2f}% {:>6} {:>6} {:>6}\n",
               family_name(static_cast<RelationFamily>(f)), fs.precision, fs.recall,
               fs.f1, fs.true_positives, fs.predicted, fs.gold);
  }
  fmt::print(out, "\nInstances: {}\n", r.instances);
  fmt::print(out, "Macro-averaged F1 (excluding Other): {:.2f}%", r.macro_f1);
  if (r.scored_families != kNumRelationFamilies) {
    fmt::print(out, " over the {} families present", r.scored_families);
  }
  fmt::print(out, "\n");
  fmt::print(out, "Accuracy (19-way): {:.2f}%\n", r.accuracy);
  if (r.interval) {
    fmt::print(out, "Bootstrap {:.0f}% interval: ({:.1f}, {:.1f})\n",
               100.0 * r.interval->level, r.interval->lower, r.interval->upper);
  }
}

void write_report_keyvalue(std::ostream& out, const EvalReport& r) {
  fmt::print(out, "instances={}\nmacro_f1={:.4f}\naccuracy={:.4f}\nscored_families={}\n",
             r.instances, r.macro_f1, r.accuracy, r.scored_families);
  for (int f = 1; f <= kNumRelationFamilies; ++f) {
    const auto& fs = r.families[f - 1];
    const auto name = family_name(static_cast<RelationFamily>(f));
    fmt::print(out, "{0}.precision={1:.4f}\n{0}.recall={2:.4f}\n{0}.f1={3:.4f}\n", name,
               fs.precision, fs.recall, fs.f1);
  }
  if (r.interval) {
    fmt::print(out, "ci_level={:.4f}\nci_lower={:.4f}\nci_upper={:.4f}\n", r.interval->level,
               r.interval->lower, r.interval->upper);
  }
}

void write_predictions(std::ostream& out, std::span<const Prediction> preds) {
  for (const auto& p : preds) out << p.id << '\t' << p.label.to_string() << '\n';
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("prediction line " + std::to_string(line_no) + " has no tab");
    }
    Prediction p;
    try {
      p.id = std::stoi(line.substr(0, tab));
    } catch (const std::exception&) {
      throw FormatError("prediction line " + std::to_string(line_no) + " has a bad id");
    }
    p.label = RelationLabel::parse(line.substr(tab + 1));
    preds.push_back(p);
  }
  return preds;
}

}  // namespace relemb
