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


#ifndef RELEMB_SAMPLING_HPP_
#define RELEMB_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relemb/common.hpp"

namespace relemb {

// Probability of discarding an occurrence of a form with relative frequency
// count/total: max(0, 1 - sqrt(t / p)). Zero counts are never discarded.
// Throws std::domain_error when total is zero or t is not positive.
double subsample_discard_prob(std::uint64_t count, std::uint64_t total,
                              double threshold);

// Per-id discard probabilities over one inventory.
class SubsamplingFilter {
 public:
  SubsamplingFilter() = default;
  SubsamplingFilter(std::span<const std::uint64_t> counts, std::uint64_t total,
                    double threshold);

  double discard_prob(std::uint32_t id) const { return discard_[id]; }
  // Draws one uniform number.
  bool discard(std::uint32_t id, Rng& rng) const {
    return discard_[id] > uniform01(rng);
  }
  std::size_t size() const { return discard_.size(); }

 private:
  std::vector<double> discard_;
};

// Discards a noun pair iff P_d(n1) > r1 or P_d(n2) > r2 with independent
// uniforms r1, r2. Both numbers are always drawn.
bool pair_discard(const SubsamplingFilter& nouns, std::uint32_t n1,
                  std::uint32_t n2, Rng& rng);

// Unigram noise distribution with weights count^0.75.
class NoiseSampler {
 public:
  static constexpr double kExponent = 0.75;

  NoiseSampler() = default;
  // Throws std::invalid_argument if all counts are zero.
  explicit NoiseSampler(std::span<const std::uint64_t> counts);

  std::uint32_t sample(Rng& rng) const;
  // One draw that is never `exclude`, unless `exclude` carries all the mass.
  std::uint32_t sample_excluding(std::uint32_t exclude, Rng& rng) const;
  // Fills `out` with independent draws excluding `target`.
  void sample_noise(std::uint32_t target, std::span<std::uint32_t> out,
                    Rng& rng) const;

  double probability(std::uint32_t id) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace relemb

#endif  // RELEMB_SAMPLING_HPP_
