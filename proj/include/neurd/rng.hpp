// Copyright 2026 The Neurd Authors.
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

#ifndef NEURD_RNG_HPP_
#define NEURD_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace neurd {

using Rng = std::mt19937_64;

// Uniform in [0, 1). Implemented directly from the generator output so that
// the stream does not depend on the standard library's distribution choices.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformIn(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

// Samples an index from a probability vector.
inline int SampleIndex(const std::vector<double>& probs, Rng& rng) {
  double r = Uniform01(rng);
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  // Guard against round-off when the entries sum to slightly less than 1:
  // fall back to the last index with positive mass.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0) return static_cast<int>(i);
  }
  throw std::runtime_error("SampleIndex: no positive mass");
}

// Derives an independent seed for a sub-task (worker, episode, ...).
inline std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 over the combined value.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace neurd

#endif  // NEURD_RNG_HPP_
