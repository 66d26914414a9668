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

#ifndef NEURD_LEARNERS_HPP_
#define NEURD_LEARNERS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "neurd/matrix_game.hpp"
#include "neurd/policy.hpp"

namespace neurd::learners {

enum class Kind { kHedge, kNeurd, kSpg, kRd };

inline Kind KindFromString(const std::string& s) {
  if (s == "hedge") return Kind::kHedge;
  if (s == "neurd") return Kind::kNeurd;
  if (s == "spg") return Kind::kSpg;
  if (s == "rd") return Kind::kRd;
  throw std::invalid_argument("unknown learner: " + s);
}

inline const char* ToString(Kind k) {
  switch (k) {
    case Kind::kHedge: return "hedge";
    case Kind::kNeurd: return "neurd";
    case Kind::kSpg: return "spg";
    case Kind::kRd: return "rd";
  }
  return "?";
}

// Hedge / FoReL-with-entropy logit update: y' = y + eta * u.
inline Logits HedgeUpdate(const Logits& y, const std::vector<double>& u,
                          double eta) {
  if (eta <= 0) throw std::invalid_argument("HedgeUpdate: eta must be > 0");
  Logits out = y;
  for (std::size_t a = 0; a < y.size(); ++a) out[a] += eta * u[a];
  return out;
}

// Single-state tabular update: y'(a) = y(a) + eta (u(a) - pi.u).
inline Logits NeurdTabularUpdate(const Logits& y, const std::vector<double>& u,
                                 const Policy& pi, double eta) {
  if (eta <= 0) {
    throw std::invalid_argument("NeurdTabularUpdate: eta must be > 0");
  }
  double mean = Dot(pi, u);
  Logits out = y;
  for (std::size_t a = 0; a < y.size(); ++a) out[a] += eta * (u[a] - mean);
  return out;
}

// Tabular all-actions softmax policy gradient:
// y'(a) = y(a) + eta pi(a) (u(a) - pi.u), i.e. the instantaneous regret
// scaled by the current policy.
inline Logits SpgTabularUpdate(const Logits& y, const std::vector<double>& u,
                               const Policy& pi, double eta) {
  if (eta <= 0) {
    throw std::invalid_argument("SpgTabularUpdate: eta must be > 0");
  }
  double mean = Dot(pi, u);
  Logits out = y;
  for (std::size_t a = 0; a < y.size(); ++a) {
    out[a] += eta * pi[a] * (u[a] - mean);
  }
  return out;
}

// Standard discrete-time replicator dynamic in logit form: y' = y + q, so
// softmax(y') = pi(a) e^{q(a)} / (pi . e^q).
inline Logits StandardDiscreteRdUpdate(const Logits& y,
                                       const std::vector<double>& q) {
  Logits out = y;
  for (std::size_t a = 0; a < y.size(); ++a) {
    if (!std::isfinite(q[a])) {
      throw std::invalid_argument("StandardDiscreteRdUpdate: q not finite");
    }
    out[a] += q[a];
  }
  return out;
}

// Cumulative regret accounting: R_T(a) = sum_t u_t(a) - sum_t pi_t . u_t.
struct RegretLedger {
  std::vector<double> cum_action_utility;
  double cum_expected_utility = 0.0;

  void Observe(const std::vector<double>& u, const Policy& pi) {
    if (cum_action_utility.empty()) cum_action_utility.resize(u.size(), 0.0);
    for (std::size_t a = 0; a < u.size(); ++a) cum_action_utility[a] += u[a];
    cum_expected_utility += Dot(pi, u);
  }

  double Regret(int a) const {
    return cum_action_utility[a] - cum_expected_utility;
  }

  double MaxRegret() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < cum_action_utility.size(); ++a) {
      m = std::max(m, Regret(static_cast<int>(a)));
    }
    return m;
  }
};

using EtaSchedule = std::function<double(int)>;  // round (1-based) -> eta

inline EtaSchedule ConstantEta(double eta) {
  return [eta](int) { return eta; };
}

// Horizon-tuned constant rate sqrt(2 ln|A| / T).
inline EtaSchedule HorizonEta(int num_actions, int horizon) {
  double eta = std::sqrt(2.0 * std::log(num_actions) / horizon);
  return ConstantEta(eta);
}

// Anytime rate proportional to 1/sqrt(t).
inline EtaSchedule AnytimeEta(double scale = 1.0) {
  return [scale](int t) { return scale / std::sqrt(static_cast<double>(t)); };
}

struct RepeatedGameResult {
  RegretLedger ledger;
  std::vector<int> round_trace;      // rounds at which snapshots were taken
  std::vector<Logits> logit_trace;
  std::vector<Policy> policy_trace;
  std::vector<double> regret_trace;  // max-action regret after each round
  std::vector<std::vector<double>> action_regret_trace;
};

// Plays the repeated matching-pennies environment of the motivating
// example: the scripted opponent plays heads for the first 40% of rounds,
// tails afterwards; with `forfeit` a third action always pays -1.
inline RepeatedGameResult RunRepeatedGame(Kind kind, int num_rounds,
                                          const EtaSchedule& eta,
                                          bool forfeit) {
  if (num_rounds < 1) {
    throw std::invalid_argument("RunRepeatedGame: T must be >= 1");
  }
  auto utils = MatchingPenniesUtilities(num_rounds, forfeit);
  int num_actions = forfeit ? 3 : 2;
  // Record every round for short runs, every 10th for long ones.
  int stride = num_rounds <= 1000 ? 1 : 10;

  RepeatedGameResult res;
  Logits y(num_actions, 0.0);
  for (int t = 1; t <= num_rounds; ++t) {
    Policy pi = Softmax(y);
    const std::vector<double>& u = utils[t - 1];
    res.ledger.Observe(u, pi);
    double e = eta(t);
    switch (kind) {
      case Kind::kHedge:
        y = HedgeUpdate(y, u, e);
        break;
      case Kind::kNeurd:
        y = NeurdTabularUpdate(y, u, pi, e);
        break;
      case Kind::kSpg:
        y = SpgTabularUpdate(y, u, pi, e);
        break;
      case Kind::kRd: {
        std::vector<double> q = u;
        for (double& v : q) v *= e;
        y = StandardDiscreteRdUpdate(y, q);
        break;
      }
    }
    if (t % stride == 0 || t == num_rounds) {
      res.round_trace.push_back(t);
      res.logit_trace.push_back(y);
      res.policy_trace.push_back(pi);
      res.regret_trace.push_back(res.ledger.MaxRegret());
      std::vector<double> ar(num_actions);
      for (int a = 0; a < num_actions; ++a) ar[a] = res.ledger.Regret(a);
      res.action_regret_trace.push_back(std::move(ar));
    }
  }
  return res;
}

// Final max-action regret of a full run.
inline double FinalRegret(Kind kind, int num_rounds, double eta,
                          bool forfeit) {
  return RunRepeatedGame(kind, num_rounds, ConstantEta(eta), forfeit)
      .ledger.MaxRegret();
}

// Argmin of final regret over a step-size grid; ties break to the smaller
// eta (grid is scanned in ascending order with a strict improvement test).
inline double SweepStepSize(Kind kind, int num_rounds,
                            std::vector<double> grid, bool forfeit) {
  if (grid.empty()) throw std::invalid_argument("SweepStepSize: empty grid");
  std::sort(grid.begin(), grid.end());
  double best_eta = grid[0];
  double best_regret = FinalRegret(kind, num_rounds, grid[0], forfeit);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double r = FinalRegret(kind, num_rounds, grid[i], forfeit);
    if (r < best_regret) {
      best_regret = r;
      best_eta = grid[i];
    }
  }
  return best_eta;
}

// The default sweep grid; spans two orders of magnitude around 1.
inline std::vector<double> DefaultEtaGrid() {
  return {0.01, 0.02, 0.05, 0.1, 0.21, 0.5, 1, 2, 5, 10};
}

}  // namespace neurd::learners

#endif  // NEURD_LEARNERS_HPP_
