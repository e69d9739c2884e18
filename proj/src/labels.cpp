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


#include "relemb/labels.hpp"

#include <string>

#include "relemb/common.hpp"

namespace relemb {
namespace {

struct FamilyInfo {
  std::string_view name;
  std::string_view abbrev;
};

constexpr std::array<FamilyInfo, kNumRelationFamilies + 1> kFamilies = {{
    {"Other", "_O_"},
    {"Cause-Effect", "C-E"},
    {"Component-Whole", "C-W"},
    {"Content-Container", "C-C"},
    {"Entity-Destination", "E-D"},
    {"Entity-Origin", "E-O"},
    {"Instrument-Agency", "I-A"},
    {"Member-Collection", "M-C"},
    {"Message-Topic", "M-T"},
    {"Product-Producer", "P-P"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view family_name(RelationFamily family) {
  return kFamilies[static_cast<std::size_t>(family)].name;
}

std::string_view family_abbrev(RelationFamily family) {
  return kFamilies[static_cast<std::size_t>(family)].abbrev;
}

RelationLabel RelationLabel::from_index(int index) {
  if (index < 0 || index >= kNumLabels) {
    throw FormatError("label index out of range: " + std::to_string(index));
  }
  if (index == 0) return other();
  const auto family = static_cast<RelationFamily>((index + 1) / 2);
  return {family, index % 2 == 1 ? Direction::kE1E2 : Direction::kE2E1};
}

int RelationLabel::index() const {
  if (is_other()) return 0;
  const int f = static_cast<int>(family_);
  return direction_ == Direction::kE1E2 ? 2 * f - 1 : 2 * f;
}

std::string RelationLabel::to_string() const {
  std::string out(family_name(family_));
  if (direction_ == Direction::kE1E2) out += "(e1,e2)";
  if (direction_ == Direction::kE2E1) out += "(e2,e1)";
  return out;
}

RelationLabel RelationLabel::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "Other") return other();
  const auto paren = s.find('(');
  if (paren == std::string_view::npos) {
    throw FormatError("unknown relation label: '" + std::string(s) + "'");
  }
  const std::string_view name = s.substr(0, paren);
  const std::string_view args = s.substr(paren);
  Direction direction;
  if (args == "(e1,e2)") {
    direction = Direction::kE1E2;
  } else if (args == "(e2,e1)") {
    direction = Direction::kE2E1;
  } else {
    throw FormatError("unknown relation direction: '" + std::string(s) + "'");
  }
  for (std::size_t f = 1; f < kFamilies.size(); ++f) {
    if (kFamilies[f].name == name) {
      return {static_cast<RelationFamily>(f), direction};
    }
  }
  throw FormatError("unknown relation label: '" + std::string(s) + "'");
}

}  // namespace relemb
