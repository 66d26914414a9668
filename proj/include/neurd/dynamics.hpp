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

#ifndef NEURD_DYNAMICS_HPP_
#define NEURD_DYNAMICS_HPP_

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "neurd/matrix_game.hpp"
#include "neurd/policy.hpp"

namespace neurd::dynamics {

// Replicator derivative: dpi(a) = pi(a) [u(a) - pi.u]. Tangent to the
// simplex (components sum to zero).
inline std::vector<double> RdDerivative(const Policy& pi,
                                        const std::vector<double>& u) {
  double mean = Dot(pi, u);
  std::vector<double> d(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) d[a] = pi[a] * (u[a] - mean);
  return d;
}

// Q-value policy gradient derivative:
// dpi(a) = pi(a) (pi(a) A(a) - sum_b pi(b)^2 A(b)).
inline std::vector<double> QpgDerivative(const Policy& pi,
                                         const std::vector<double>& adv) {
  double sq = 0;
  for (std::size_t b = 0; b < pi.size(); ++b) sq += pi[b] * pi[b] * adv[b];
  std::vector<double> d(pi.size());
  for (std::size_t a = 0; a < pi.size(); ++a) {
    d[a] = pi[a] * (pi[a] * adv[a] - sq);
  }
  return d;
}

using JointPolicy = std::array<Policy, 2>;

// Derivative field over a two-player joint policy; both players' tangents
// are evaluated at the same pre-step joint policy.
using Field = std::function<JointPolicy(const JointPolicy&)>;

// RD field for a zero-sum matrix game.
inline Field RdField(const MatrixGame& game) {
  return [game](const JointPolicy& pi) -> JointPolicy {
    return {RdDerivative(pi[0], game.RowActionValues(pi[1])),
            RdDerivative(pi[1], game.ColActionValues(pi[0]))};
  };
}

// QPG field: advantages are exact expected payoffs minus the current value.
inline Field QpgField(const MatrixGame& game) {
  return [game](const JointPolicy& pi) -> JointPolicy {
    std::vector<double> u0 = game.RowActionValues(pi[1]);
    std::vector<double> u1 = game.ColActionValues(pi[0]);
    double v0 = Dot(pi[0], u0), v1 = Dot(pi[1], u1);
    std::vector<double> a0(u0.size()), a1(u1.size());
    for (std::size_t a = 0; a < u0.size(); ++a) a0[a] = u0[a] - v0;
    for (std::size_t a = 0; a < u1.size(); ++a) a1[a] = u1[a] - v1;
    return {QpgDerivative(pi[0], a0), QpgDerivative(pi[1], a1)};
  };
}

struct Trajectory {
  double dt = 0.0;
  std::vector<JointPolicy> points;  // points[k] is the state at time k*dt
  bool clipped = false;             // any negative entry re-projected
};

// Forward Euler with clip-to-zero re-projection for entries pushed below
// zero by a large step. Every step renormalizes: near a vertex the largest
// entry rounds to 1 while the others are denormal, and once the sum exceeds
// 1 the off-simplex replicator field points away from the simplex, so the
// drift would otherwise compound exponentially.
inline Trajectory EulerIntegrate(const Field& field, const JointPolicy& pi0,
                                 double dt, int steps) {
  if (dt <= 0) throw std::invalid_argument("EulerIntegrate: dt must be > 0");
  for (const Policy& p : pi0) {
    if (!OnSimplex(p)) {
      throw std::invalid_argument("EulerIntegrate: pi0 not on simplex");
    }
  }
  Trajectory traj;
  traj.dt = dt;
  traj.points.reserve(steps + 1);
  traj.points.push_back(pi0);
  JointPolicy pi = pi0;
  for (int k = 0; k < steps; ++k) {
    JointPolicy d = field(pi);
    for (int p = 0; p < 2; ++p) {
      bool clip = false;
      for (std::size_t a = 0; a < pi[p].size(); ++a) {
        if (!std::isfinite(d[p][a])) {
          throw std::runtime_error("EulerIntegrate: non-finite derivative");
        }
        pi[p][a] += dt * d[p][a];
        if (pi[p][a] < 0) {
          pi[p][a] = 0;
          clip = true;
        }
      }
      if (clip) traj.clipped = true;
      Renormalize(pi[p]);
    }
    traj.points.push_back(pi);
  }
  return traj;
}

// Euler integration of the RD flow in logit coordinates: with
// pi = softmax(y), the linear flow dy = u(pi) dt reproduces the replicator
// derivative exactly, so stepping y instead of pi discretizes the same ODE
// while staying on the simplex. One step equals the standard discrete-time
// RD map (Hedge with eta = dt), which keeps the time average on the
// no-regret convergence path even at coarse dt where the policy-space Euler
// spiral visibly inflates the orbit.
inline Trajectory LogitEulerIntegrate(const MatrixGame& game,
                                      const JointPolicy& pi0, double dt,
                                      int steps) {
  if (dt <= 0) {
    throw std::invalid_argument("LogitEulerIntegrate: dt must be > 0");
  }
  std::array<Logits, 2> y;
  for (int p = 0; p < 2; ++p) {
    if (!OnSimplex(pi0[p])) {
      throw std::invalid_argument("LogitEulerIntegrate: pi0 not on simplex");
    }
    y[p].resize(pi0[p].size());
    for (std::size_t a = 0; a < pi0[p].size(); ++a) {
      if (pi0[p][a] <= 0) {
        throw std::invalid_argument("LogitEulerIntegrate: pi0 not interior");
      }
      y[p][a] = std::log(pi0[p][a]);
    }
  }
  Trajectory traj;
  traj.dt = dt;
  traj.points.reserve(steps + 1);
  traj.points.push_back(pi0);
  JointPolicy pi = pi0;
  for (int k = 0; k < steps; ++k) {
    std::vector<double> u0 = game.RowActionValues(pi[1]);
    std::vector<double> u1 = game.ColActionValues(pi[0]);
    for (std::size_t a = 0; a < y[0].size(); ++a) y[0][a] += dt * u0[a];
    for (std::size_t a = 0; a < y[1].size(); ++a) y[1][a] += dt * u1[a];
    pi[0] = Softmax(y[0]);
    pi[1] = Softmax(y[1]);
    traj.points.push_back(pi);
  }
  return traj;
}

// Prefix means of the trajectory points; each mean is again on the simplex.
inline std::vector<JointPolicy> TimeAverage(const Trajectory& traj) {
  if (traj.points.empty()) {
    throw std::invalid_argument("TimeAverage: empty trajectory");
  }
  std::vector<JointPolicy> out;
  out.reserve(traj.points.size());
  JointPolicy acc = traj.points[0];
  out.push_back(acc);
  for (std::size_t k = 1; k < traj.points.size(); ++k) {
    for (int p = 0; p < 2; ++p) {
      for (std::size_t a = 0; a < acc[p].size(); ++a) {
        acc[p][a] += traj.points[k][p][a];
      }
    }
    JointPolicy mean = acc;
    for (int p = 0; p < 2; ++p) {
      for (double& v : mean[p]) v /= static_cast<double>(k + 1);
    }
    out.push_back(std::move(mean));
  }
  return out;
}

}  // namespace neurd::dynamics

#endif  // NEURD_DYNAMICS_HPP_
