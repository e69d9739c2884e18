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


// Official SemEval-2010 Task 8 scoring: directed matching, per-family
// precision/recall aggregated over both directions, macro-F1 over the nine
// relation families (Other excluded from the average).

#ifndef RELEMB_SCORING_HPP_
#define RELEMB_SCORING_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relemb/labels.hpp"

namespace relemb {

struct FamilyScore {
  std::size_t true_positives = 0;
  std::size_t predicted = 0;  // predictions of this family, either direction
  std::size_t gold = 0;       // gold instances of this family
  double precision = 0.0;     // percent
  double recall = 0.0;
  double f1 = 0.0;
};

struct BootstrapInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

struct EvalReport {
  std::size_t instances = 0;
  // Index f-1 holds family f (Cause-Effect first); Other is not scored.
  std::array<FamilyScore, kNumRelationFamilies> families{};
  // Number of families that entered the macro average.
  std::size_t scored_families = 0;
  double macro_f1 = 0.0;  // percent
  double accuracy = 0.0;  // percent, exact 19-way match
  // confusion[gold][pred] over the 19 class indices.
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
  std::optional<BootstrapInterval> interval;
};

// Families with no gold and no predicted instances are left out of the macro
// average; with all nine present this is the official score. Throws
// std::invalid_argument on length mismatch.
EvalReport score_semeval(std::span<const RelationLabel> gold,
                         std::span<const RelationLabel> pred);

// Percentile interval of macro-F1 over `iterations` resamples (with
// replacement) of the instance set. Throws std::invalid_argument if
// iterations < 100 or level is outside (0, 1).
BootstrapInterval bootstrap_ci(std::span<const RelationLabel> gold,
                               std::span<const RelationLabel> pred,
                               std::size_t iterations, double level,
                               std::uint64_t seed);

// Aligned text tables: per-family P/R/F1, the 19x19 confusion matrix and the
// headline scores.
void write_report_table(std::ostream& out, const EvalReport& report);

// "key=value" lines for machine consumption.
void write_report_keyvalue(std::ostream& out, const EvalReport& report);

struct Prediction {
  int id = 0;
  RelationLabel label;
};

// "id<TAB>label" lines.
void write_predictions(std::ostream& out, std::span<const Prediction> preds);
std::vector<Prediction> read_predictions(std::istream& in);

}  // namespace relemb

#endif  // RELEMB_SCORING_HPP_
