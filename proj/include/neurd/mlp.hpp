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

#ifndef NEURD_MLP_HPP_
#define NEURD_MLP_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "neurd/policy.hpp"
#include "neurd/rng.hpp"

namespace neurd {

// Two-layer perceptron with a rectifier hidden layer and manually coded
// gradients. Weight layout is row-major: w1[j * in + i], w2[a * hidden + j].
struct Mlp {
  int in = 0, hidden = 0, out = 0;
  std::vector<double> w1, b1, w2, b2;

  Mlp() = default;
  Mlp(int in_dim, int hidden_dim, int out_dim)
      : in(in_dim),
        hidden(hidden_dim),
        out(out_dim),
        w1(static_cast<std::size_t>(hidden_dim) * in_dim, 0.0),
        b1(hidden_dim, 0.0),
        w2(static_cast<std::size_t>(out_dim) * hidden_dim, 0.0),
        b2(out_dim, 0.0) {}

  // Scaled-uniform fan-in initialization.
  void Init(Rng& rng) {
    double s1 = 1.0 / std::sqrt(static_cast<double>(in));
    double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (double& w : w1) w = UniformIn(rng, -s1, s1);
    for (double& w : w2) w = UniformIn(rng, -s2, s2);
    // Biases start at zero.
  }

  std::size_t NumParams() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
};

// Activations cached by a forward pass; reused by gradient and clipped-step
// computations on the same input.
struct MlpActivation {
  std::vector<double> x;       // input copy
  std::vector<double> h_pre;   // pre-activation
  std::vector<double> h;       // rectified
  std::vector<double> logits;  // full output (unmasked)
  double x_norm2_plus_1 = 0.0;
};

inline MlpActivation MlpForward(const Mlp& m, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.in) {
    throw std::invalid_argument("MlpForward: input dimension mismatch");
  }
  MlpActivation act;
  act.x = x;
  act.h_pre.resize(m.hidden);
  act.h.resize(m.hidden);
  act.logits.resize(m.out);
  act.x_norm2_plus_1 = 1.0 + Dot(x, x);
  for (int j = 0; j < m.hidden; ++j) {
    const double* row = &m.w1[static_cast<std::size_t>(j) * m.in];
    double z = m.b1[j];
    for (int i = 0; i < m.in; ++i) z += row[i] * x[i];
    act.h_pre[j] = z;
    act.h[j] = z > 0 ? z : 0.0;
  }
  for (int a = 0; a < m.out; ++a) {
    const double* row = &m.w2[static_cast<std::size_t>(a) * m.hidden];
    double z = m.b2[a];
    for (int j = 0; j < m.hidden; ++j) z += row[j] * act.h[j];
    act.logits[a] = z;
  }
  return act;
}

// Parameter-shaped gradient accumulator.
struct MlpGrad {
  std::vector<double> w1, b1, w2, b2;

  explicit MlpGrad(const Mlp& m)
      : w1(m.w1.size(), 0.0),
        b1(m.b1.size(), 0.0),
        w2(m.w2.size(), 0.0),
        b2(m.b2.size(), 0.0) {}
};

// Accumulates coeff * d logits[a] / d theta into `grad`.
inline void MlpAddLogitGradient(const Mlp& m, const MlpActivation& act, int a,
                                double coeff, MlpGrad& grad) {
  const double* w2row = &m.w2[static_cast<std::size_t>(a) * m.hidden];
  double* gw2row = &grad.w2[static_cast<std::size_t>(a) * m.hidden];
  grad.b2[a] += coeff;
  for (int j = 0; j < m.hidden; ++j) {
    gw2row[j] += coeff * act.h[j];
    if (act.h_pre[j] > 0) {
      double g = coeff * w2row[j];
      grad.b1[j] += g;
      double* gw1row = &grad.w1[static_cast<std::size_t>(j) * m.in];
      for (int i = 0; i < m.in; ++i) gw1row[i] += g * act.x[i];
    }
  }
}

// Exact logits[a] after the hypothetical step theta + coeff * d y(a)/d theta,
// evaluated on the same input. Exploits the gradient's rank structure so no
// parameter copy is needed:
//   h_pre'[j] = h_pre[j] + coeff * w2[a,j] * 1{h_pre[j] > 0} * (|x|^2 + 1)
//   y'       = sum_j (w2[a,j] + coeff * h[j]) * relu(h_pre'[j]) + b2[a] + coeff
inline double MlpPostStepLogit(const Mlp& m, const MlpActivation& act, int a,
                               double coeff) {
  const double* w2row = &m.w2[static_cast<std::size_t>(a) * m.hidden];
  double y = m.b2[a] + coeff;
  for (int j = 0; j < m.hidden; ++j) {
    double hp = act.h_pre[j];
    if (hp > 0) hp += coeff * w2row[j] * act.x_norm2_plus_1;
    if (hp > 0) y += (w2row[j] + coeff * act.h[j]) * hp;
  }
  return y;
}

inline void MlpApplyStep(Mlp& m, const MlpGrad& grad, double scale) {
  for (std::size_t i = 0; i < m.w1.size(); ++i) {
    m.w1[i] += scale * grad.w1[i];
    if (!std::isfinite(m.w1[i])) {
      throw std::runtime_error("MlpApplyStep: non-finite parameter");
    }
  }
  for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] += scale * grad.b1[i];
  for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] += scale * grad.w2[i];
  for (std::size_t i = 0; i < m.b2.size(); ++i) m.b2[i] += scale * grad.b2[i];
}

}  // namespace neurd

#endif  // NEURD_MLP_HPP_
