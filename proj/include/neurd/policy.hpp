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

#ifndef NEURD_POLICY_HPP_
#define NEURD_POLICY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "neurd/rng.hpp"

namespace neurd {

// A probability vector over actions. Plain std::vector<double> everywhere;
// helpers below maintain/check the simplex invariants.
using Policy = std::vector<double>;

// Unnormalized action preferences (accumulated utility).
using Logits = std::vector<double>;

inline double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Max-subtracted softmax; safe for large logits.
inline Policy Softmax(const Logits& y) {
  if (y.empty()) throw std::invalid_argument("Softmax: empty logits");
  double m = *std::max_element(y.begin(), y.end());
  Policy p(y.size());
  double z = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    p[i] = std::exp(y[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

inline bool OnSimplex(const Policy& p, double tol = 1e-10) {
  double s = 0;
  for (double v : p) {
    if (!(v >= 0)) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= tol;
}

inline void Renormalize(Policy& p) {
  double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (s <= 0) throw std::runtime_error("Renormalize: nonpositive mass");
  for (double& v : p) v /= s;
}

inline Policy UniformPolicy(int n) {
  return Policy(n, 1.0 / n);
}

// Uniform sample from the simplex via exponential spacings.
inline Policy SampleSimplex(int n, Rng& rng) {
  Policy p(n);
  double s = 0;
  for (int i = 0; i < n; ++i) {
    p[i] = -std::log(1.0 - Uniform01(rng));
    s += p[i];
  }
  for (double& v : p) v /= s;
  return p;
}

inline double NormL2(const std::vector<double>& v) {
  return std::sqrt(Dot(v, v));
}

inline int Argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace neurd

#endif  // NEURD_POLICY_HPP_
