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

#ifndef RELEMB_LABELS_HPP_
#define RELEMB_LABELS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace relemb {

// The nine directed relation families of SemEval-2010 Task 8 plus Other.
// Enumerator values are stable: they define class indices.
enum class RelationFamily : std::uint8_t {
  kOther = 0,
  kCauseEffect,
  kComponentWhole,
  kContentContainer,
  kEntityDestination,
  kEntityOrigin,
  kInstrumentAgency,
  kMemberCollection,
  kMessageTopic,
  kProductProducer,
};

enum class Direction : std::uint8_t { kNone = 0, kE1E2, kE2E1 };

inline constexpr int kNumRelationFamilies = 9;  // excluding Other
inline constexpr int kNumLabels = 2 * kNumRelationFamilies + 1;

// A 19-way SemEval label. Class index 0 is Other; family f (1-based) maps to
// 2f-1 for (e1,e2) and 2f for (e2,e1).
class RelationLabel {
 public:
  constexpr RelationLabel() = default;
  constexpr RelationLabel(RelationFamily family, Direction direction)
      : family_(family),
        direction_(family == RelationFamily::kOther ? Direction::kNone
                                                    : direction) {}

  static RelationLabel other() { return {}; }

  // Throws FormatError for out-of-range indices.
  static RelationLabel from_index(int index);

  // Parses surface forms such as "Cause-Effect(e2,e1)" or "Other".
  // Throws FormatError on anything else.
  static RelationLabel parse(std::string_view text);

  constexpr RelationFamily family() const { return family_; }
  constexpr Direction direction() const { return direction_; }
  constexpr bool is_other() const { return family_ == RelationFamily::kOther; }

  int index() const;
  std::string to_string() const;

  friend constexpr bool operator==(RelationLabel, RelationLabel) = default;

 private:
  RelationFamily family_ = RelationFamily::kOther;
  Direction direction_ = Direction::kNone;
};

// "Cause-Effect", "Component-Whole", ...; "Other" for kOther.
std::string_view family_name(RelationFamily family);

// Short names used in confusion-matrix headers ("C-E", "_O_").
std::string_view family_abbrev(RelationFamily family);

}  // namespace relemb

#endif  // RELEMB_LABELS_HPP_
