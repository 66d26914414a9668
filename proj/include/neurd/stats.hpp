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

#ifndef NEURD_STATS_HPP_
#define NEURD_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "neurd/rng.hpp"

namespace neurd::stats {

inline double Mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("Mean: empty sample");
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double Median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("Median: empty sample");
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Percentile of a sorted sample with linear interpolation.
inline double SortedPercentile(const std::vector<double>& sorted, double p) {
  double pos = p * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// Percentile bootstrap confidence interval for the mean. Deterministic given
// the seed; endpoints always lie within [min, max] of the sample.
inline std::pair<double, double> BootstrapCi(const std::vector<double>& xs,
                                             int resamples = 1000,
                                             double level = 0.95,
                                             std::uint64_t seed = 12345) {
  if (xs.size() < 2) {
    throw std::invalid_argument("BootstrapCi: need at least 2 samples");
  }
  if (resamples < 1 || level <= 0 || level >= 1) {
    throw std::invalid_argument("BootstrapCi: bad resamples or level");
  }
  Rng rng(seed);
  std::vector<double> means;
  means.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    double s = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s += xs[static_cast<std::size_t>(Uniform01(rng) *
                                       static_cast<double>(xs.size()))];
    }
    means.push_back(s / static_cast<double>(xs.size()));
  }
  std::sort(means.begin(), means.end());
  double alpha = (1.0 - level) / 2.0;
  return {SortedPercentile(means, alpha), SortedPercentile(means, 1 - alpha)};
}

// Fixed-format number rendering so CSV bytes are platform-stable.
inline std::string FormatNumber(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace neurd::stats

#endif  // NEURD_STATS_HPP_
