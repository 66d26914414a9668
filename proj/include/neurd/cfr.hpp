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

#ifndef NEURD_CFR_HPP_
#define NEURD_CFR_HPP_

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "neurd/game_tree.hpp"
#include "neurd/learners.hpp"
#include "neurd/policy.hpp"

namespace neurd::cfr {

// Per-information-state accumulators for one CFR run.
struct InfoStateEntry {
  Logits logits;
  Policy policy;
  std::vector<double> avg_accum;   // sum_t rho_i(s) * pi_i(a|s)
  double reach_accum = 0.0;        // sum_t rho_i(s)
  std::vector<double> cum_regret;  // cumulative counterfactual regrets
  long visits = 0;
};

struct CfrState {
  std::vector<InfoStateEntry> entries;  // aligned with info_state_keys
  long iteration = 0;

  static CfrState Init(const GameTree& game) {
    CfrState s;
    s.entries.resize(game.NumInfoStates());
    for (int i = 0; i < game.NumInfoStates(); ++i) {
      int n = game.info_state_num_actions[i];
      s.entries[i].logits.assign(n, 0.0);
      s.entries[i].policy = UniformPolicy(n);
      s.entries[i].avg_accum.assign(n, 0.0);
      s.entries[i].cum_regret.assign(n, 0.0);
    }
    return s;
  }

  PolicyTable CurrentPolicy() const {
    PolicyTable t;
    t.probs.reserve(entries.size());
    for (const InfoStateEntry& e : entries) t.probs.push_back(e.policy);
    return t;
  }
};

// Per-history reach probabilities under a joint policy, split into each
// player's own contribution and the chance contribution.
struct ReachProbabilities {
  std::vector<std::array<double, 2>> own;  // rho_i per player i
  std::vector<double> chance;

  // Opponent-and-chance reach for `player` at a history.
  double External(int node, int player) const {
    return chance[node] * own[node][1 - player];
  }

  double Full(int node) const {
    return chance[node] * own[node][0] * own[node][1];
  }
};

inline ReachProbabilities ComputeReachProbabilities(const GameTree& game,
                                                    const PolicyTable& joint) {
  ReachProbabilities out;
  out.own.assign(game.nodes.size(), {1.0, 1.0});
  out.chance.assign(game.nodes.size(), 1.0);
  std::function<void(int, double, double, double)> walk =
      [&](int node, double r0, double r1, double rc) {
        out.own[node] = {r0, r1};
        out.chance[node] = rc;
        const GameNode& n = game.nodes[node];
        if (n.player == kTerminalPlayer) return;
        if (n.player == kChancePlayer) {
          for (std::size_t a = 0; a < n.children.size(); ++a) {
            walk(n.children[a], r0, r1, rc * n.chance_probs[a]);
          }
        } else {
          const Policy& p = joint.probs[n.info_state];
          for (std::size_t a = 0; a < n.children.size(); ++a) {
            walk(n.children[a], n.player == 0 ? r0 * p[a] : r0,
                 n.player == 1 ? r1 * p[a] : r1, rc);
          }
        }
      };
  walk(0, 1.0, 1.0, 1.0);
  return out;
}

// Counterfactual values for one player at every information state.
struct CounterfactualState {
  std::vector<std::vector<double>> q;  // q_i(s, a); zero where unreachable
  std::vector<double> v;               // v_i(s)
  std::vector<double> beta;            // opponent-and-chance reach mass
  std::vector<bool> reachable;         // beta > 0
};

// Single traversal accumulating opponent-and-chance-reach-weighted action
// values; q is normalized by beta afterwards.
inline CounterfactualState ComputeCounterfactualValues(
    const GameTree& game, const PolicyTable& joint, int player,
    double scale = 1.0) {
  int num_states = game.NumInfoStates();
  CounterfactualState cf;
  cf.q.resize(num_states);
  cf.v.assign(num_states, 0.0);
  cf.beta.assign(num_states, 0.0);
  cf.reachable.assign(num_states, false);
  for (int s = 0; s < num_states; ++s) {
    cf.q[s].assign(game.info_state_num_actions[s], 0.0);
  }

  // Returns the expected value for `player` of the subtree at `node`;
  // `ext` is the opponent-and-chance reach of the node.
  std::function<double(int, double)> walk = [&](int node,
                                                double ext) -> double {
    const GameNode& n = game.nodes[node];
    if (n.player == kTerminalPlayer) {
      return (player == 0 ? n.utility0 : -n.utility0) * scale;
    }
    if (n.player == kChancePlayer) {
      double v = 0;
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += n.chance_probs[a] * walk(n.children[a], ext * n.chance_probs[a]);
      }
      return v;
    }
    const Policy& p = joint.probs[n.info_state];
    if (n.player != player) {
      double v = 0;
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += p[a] * walk(n.children[a], ext * p[a]);
      }
      return v;
    }
    int s = n.info_state;
    cf.beta[s] += ext;
    double v = 0;
    for (std::size_t a = 0; a < n.children.size(); ++a) {
      double child = walk(n.children[a], ext);
      cf.q[s][a] += ext * child;
      v += p[a] * child;
    }
    return v;
  };
  walk(0, 1.0);

  for (int s = 0; s < num_states; ++s) {
    if (game.info_state_player[s] != player) continue;
    if (cf.beta[s] > 0) {
      cf.reachable[s] = true;
      for (double& q : cf.q[s]) q /= cf.beta[s];
      cf.v[s] = Dot(joint.probs[s], cf.q[s]);
    }
  }
  return cf;
}

// Local logit update on counterfactual regrets. NeuRD and Hedge share the
// update; SPG additionally scales each component by the current policy.
inline void CfrLocalUpdate(InfoStateEntry& entry, const std::vector<double>& q,
                           double v, double beta, learners::Kind kind,
                           double eta) {
  for (std::size_t a = 0; a < entry.logits.size(); ++a) {
    double increment = eta * beta * (q[a] - v);
    if (kind == learners::Kind::kSpg) increment *= entry.policy[a];
    entry.logits[a] += increment;
  }
  entry.policy = Softmax(entry.logits);
  entry.visits += 1;
}

using EtaSchedule = std::function<double(int state, long iteration)>;

inline EtaSchedule ConstantEta(double eta) {
  return [eta](int, long) { return eta; };
}

// The Hedge-style horizon-tuned rate sqrt(2 ln |A(s)| / T).
inline EtaSchedule HorizonEta(const GameTree& game, long horizon) {
  std::vector<double> per_state(game.NumInfoStates());
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    per_state[s] = std::sqrt(2.0 * std::log(game.info_state_num_actions[s]) /
                             static_cast<double>(horizon));
  }
  return [per_state](int s, long) { return per_state[s]; };
}

namespace internal {

// Accumulates the sequence-weighted average policy for `player` under the
// current joint policy. Each info state of the player is credited its own
// reach rho_i(s) once per update (identical across member histories by
// perfect recall, and counted once regardless of membership size).
inline void AccumulateAverage(const GameTree& game, CfrState& state,
                              int player) {
  std::vector<bool> credited(game.NumInfoStates(), false);
  std::function<void(int, double)> walk = [&](int node, double own) {
    const GameNode& n = game.nodes[node];
    if (n.player == kTerminalPlayer) return;
    if (n.player == kChancePlayer) {
      for (int c : n.children) walk(c, own);
      return;
    }
    const Policy& p = state.entries[n.info_state].policy;
    if (n.player == player) {
      int s = n.info_state;
      if (!credited[s]) {
        credited[s] = true;
        InfoStateEntry& e = state.entries[s];
        e.reach_accum += own;
        for (std::size_t a = 0; a < p.size(); ++a) {
          e.avg_accum[a] += own * p[a];
        }
      }
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        walk(n.children[a], own * p[a]);
      }
    } else {
      for (int c : n.children) walk(c, own);
    }
  };
  walk(0, 1.0);
}

}  // namespace internal

// One alternating CFR iteration: player 0's states are updated from
// counterfactual values under the pre-iteration joint policy, then player
// 1's are computed fresh against player 0's new policy. The average policy
// accumulates after each player's own update.
inline void CfrIteration(const GameTree& game, CfrState& state,
                         learners::Kind kind, const EtaSchedule& eta,
                         double scale = 1.0) {
  state.iteration += 1;
  for (int player = 0; player < 2; ++player) {
    PolicyTable joint = state.CurrentPolicy();
    CounterfactualState cf =
        ComputeCounterfactualValues(game, joint, player, scale);
    for (int s = 0; s < game.NumInfoStates(); ++s) {
      if (game.info_state_player[s] != player || !cf.reachable[s]) continue;
      InfoStateEntry& e = state.entries[s];
      for (std::size_t a = 0; a < e.cum_regret.size(); ++a) {
        e.cum_regret[a] += cf.beta[s] * (cf.q[s][a] - cf.v[s]);
      }
      CfrLocalUpdate(e, cf.q[s], cf.v[s], cf.beta[s], kind,
                     eta(s, state.iteration));
    }
    internal::AccumulateAverage(game, state, player);
  }
}

// Normalized sequence-weighted average policy; zero-mass states fall back
// to uniform.
inline PolicyTable AveragePolicy(const GameTree& game, const CfrState& state) {
  if (state.iteration < 1) {
    throw std::logic_error("AveragePolicy: no iterations accumulated");
  }
  PolicyTable t;
  t.probs.resize(game.NumInfoStates());
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    const InfoStateEntry& e = state.entries[s];
    double mass = 0;
    for (double x : e.avg_accum) mass += x;
    if (mass > 0) {
      Policy p = e.avg_accum;
      for (double& x : p) x /= mass;
      t.probs[s] = std::move(p);
    } else {
      t.probs[s] = UniformPolicy(game.info_state_num_actions[s]);
    }
  }
  return t;
}

// Measured regret surrogate: sum over the player's states of the clamped
// maximum cumulative counterfactual regret. Upper-bounds external regret.
inline double MeasuredRegret(const GameTree& game, const CfrState& state,
                             int player) {
  double total = 0;
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    if (game.info_state_player[s] != player) continue;
    double m = 0;
    for (double r : state.entries[s].cum_regret) m = std::max(m, r);
    total += m;
  }
  return total;
}

// Corollary-style regret bound |S_i| * Delta_u * sqrt(2 ln|A| T).
inline double RegretBound(const GameTree& game, int player, long iterations) {
  if (iterations < 1) throw std::invalid_argument("RegretBound: T must be >= 1");
  double num_states = game.NumInfoStates(player);
  double spread = game.UtilitySpread();
  double max_actions = game.MaxActions(player);
  return num_states * spread *
         std::sqrt(2.0 * std::log(max_actions) *
                   static_cast<double>(iterations));
}

}  // namespace neurd::cfr

#endif  // NEURD_CFR_HPP_
