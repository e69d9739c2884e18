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


#include "relemb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relemb {

double subsample_discard_prob(std::uint64_t count, std::uint64_t total,
                              double threshold) {
  if (total == 0) throw std::domain_error("subsampling with zero total count");
  if (!(threshold > 0.0)) throw std::domain_error("subsampling threshold must be > 0");
  if (count == 0) return 0.0;
  const double freq = static_cast<double>(count) / static_cast<double>(total);
  return std::max(0.0, 1.0 - std::sqrt(threshold / freq));
}

SubsamplingFilter::SubsamplingFilter(std::span<const std::uint64_t> counts,
                                     std::uint64_t total, double threshold) {
  discard_.reserve(counts.size());
  for (auto c : counts) discard_.push_back(subsample_discard_prob(c, total, threshold));
}

bool pair_discard(const SubsamplingFilter& nouns, std::uint32_t n1,
                  std::uint32_t n2, Rng& rng) {
  const double r1 = uniform01(rng);
  const double r2 = uniform01(rng);
  return nouns.discard_prob(n1) > r1 || nouns.discard_prob(n2) > r2;
}

NoiseSampler::NoiseSampler(std::span<const std::uint64_t> counts) {
  cumulative_.reserve(counts.size());
  double running = 0.0;
  for (auto c : counts) {
    running += std::pow(static_cast<double>(c), kExponent);
    cumulative_.push_back(running);
  }
  if (!(running > 0.0)) throw std::invalid_argument("noise distribution has no mass");
}

std::uint32_t NoiseSampler::sample(Rng& rng) const {
  double u = uniform01(rng) * cumulative_.back();
  while (u >= cumulative_.back()) u = uniform01(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  // u < back() always, so `it` is dereferenceable; zero-weight ids share a
  // cumulative value with their predecessor and are never returned.
  return static_cast<std::uint32_t>(it - cumulative_.begin());
}

double NoiseSampler::probability(std::uint32_t id) const {
  const double lo = id == 0 ? 0.0 : cumulative_[id - 1];
  return (cumulative_[id] - lo) / cumulative_.back();
}

std::uint32_t NoiseSampler::sample_excluding(std::uint32_t exclude, Rng& rng) const {
  if (exclude < size() && probability(exclude) >= 1.0 - 1e-12) return exclude;
  for (;;) {
    const auto id = sample(rng);
    if (id != exclude) return id;
  }
}

void NoiseSampler::sample_noise(std::uint32_t target, std::span<std::uint32_t> out,
                                Rng& rng) const {
  for (auto& id : out) id = sample_excluding(target, rng);
}

}  // namespace relemb
