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

#ifndef NEURD_EVAL_HPP_
#define NEURD_EVAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "neurd/game_tree.hpp"
#include "neurd/matrix_game.hpp"

namespace neurd::eval {

struct EvalReport {
  std::array<double, 2> br_value{};        // best-response value per player
  std::array<double, 2> expected_value{};  // value under the joint policy
  double nashconv = 0.0;
};

// Exact expected values via full tree traversal. `scale` applies reward
// nonstationarity (both players' utilities scaled; zero-sum preserved).
inline std::array<double, 2> ExpectedValue(const GameTree& game,
                                           const PolicyTable& joint,
                                           double scale = 1.0) {
  std::function<double(int)> walk = [&](int node) -> double {
    const GameNode& n = game.nodes[node];
    if (n.player == kTerminalPlayer) return n.utility0 * scale;
    double v = 0;
    if (n.player == kChancePlayer) {
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += n.chance_probs[a] * walk(n.children[a]);
      }
    } else {
      const Policy& p = joint.probs[n.info_state];
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += p[a] * walk(n.children[a]);
      }
    }
    return v;
  };
  double v0 = walk(0);
  return {v0, -v0};
}

struct BestResponse {
  double value = 0.0;
  PolicyTable policy;  // pure; total over all of the responder's states
};

// Exact best response for `player` against `opponent`'s policy, by
// opponent-and-chance-reach-weighted backward induction over information
// states. Ties break to the lowest action index; states the opponent makes
// unreachable get zero weight, so the tie-break decides there too.
inline BestResponse ComputeBestResponse(const GameTree& game,
                                        const PolicyTable& opponent,
                                        int player, double scale = 1.0) {
  int num_states = game.NumInfoStates();
  // Opponent-and-chance reach plus member histories per responder state.
  std::vector<std::vector<std::pair<int, double>>> members(num_states);
  std::function<void(int, double)> collect = [&](int node, double reach) {
    const GameNode& n = game.nodes[node];
    if (n.player == kTerminalPlayer) return;
    if (n.player == kChancePlayer) {
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        collect(n.children[a], reach * n.chance_probs[a]);
      }
    } else if (n.player == player) {
      members[n.info_state].push_back({node, reach});
      for (int c : n.children) collect(c, reach);
    } else {
      const Policy& p = opponent.probs[n.info_state];
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        collect(n.children[a], reach * p[a]);
      }
    }
  };
  collect(0, 1.0);

  std::vector<int> br_action(num_states, -1);
  std::vector<double> memo(game.nodes.size(),
                           std::numeric_limits<double>::quiet_NaN());
  std::function<double(int)> value;
  std::function<void(int)> resolve;
  // value of a history for `player`, with deeper best-response choices
  // resolved on demand (children are strictly deeper, so this terminates).
  std::function<double(int)> value_impl = [&](int node) -> double {
    const GameNode& n = game.nodes[node];
    if (n.player == kTerminalPlayer) {
      return (player == 0 ? n.utility0 : -n.utility0) * scale;
    }
    if (n.player == kChancePlayer) {
      double v = 0;
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += n.chance_probs[a] * value(n.children[a]);
      }
      return v;
    }
    if (n.player != player) {
      const Policy& p = opponent.probs[n.info_state];
      double v = 0;
      for (std::size_t a = 0; a < n.children.size(); ++a) {
        v += p[a] * value(n.children[a]);
      }
      return v;
    }
    int s = n.info_state;
    if (br_action[s] < 0) resolve(s);
    return value(n.children[br_action[s]]);
  };
  value = [&](int node) -> double {
    if (std::isnan(memo[node])) memo[node] = value_impl(node);
    return memo[node];
  };
  resolve = [&](int s) {
    int num_actions = game.info_state_num_actions[s];
    double best = 0;
    int best_a = 0;
    for (int a = 0; a < num_actions; ++a) {
      double q = 0;
      for (const auto& [h, reach] : members[s]) {
        q += reach * value(game.nodes[h].children[a]);
      }
      if (a == 0 || q > best) {
        best = q;
        best_a = a;
      }
    }
    br_action[s] = best_a;
  };

  double br_value = value(0);
  // Resolve every remaining state with collected histories (zero-weight or
  // off the best-response path) so the returned policy is total and argmax
  // everywhere it is well defined.
  for (int s = 0; s < num_states; ++s) {
    if (game.info_state_player[s] == player && br_action[s] < 0 &&
        !members[s].empty()) {
      resolve(s);
    }
  }
  BestResponse out;
  out.value = br_value;
  out.policy.probs.resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    if (game.info_state_player[s] != player) continue;
    int num_actions = game.info_state_num_actions[s];
    // States never queried during induction (no histories collected, e.g.
    // below the responder's own zero-probability branches) keep the
    // tie-break default so the returned policy is total.
    if (br_action[s] < 0) br_action[s] = 0;
    Policy p(num_actions, 0.0);
    p[br_action[s]] = 1.0;
    out.policy.probs[s] = std::move(p);
  }
  return out;
}

// NashConv per the sum-of-best-response-gains definition.
inline EvalReport NashConv(const GameTree& game, const PolicyTable& joint,
                           double scale = 1.0) {
  EvalReport r;
  r.expected_value = ExpectedValue(game, joint, scale);
  for (int k = 0; k < 2; ++k) {
    r.br_value[k] = ComputeBestResponse(game, joint, k, scale).value;
    r.nashconv += r.br_value[k] - r.expected_value[k];
  }
  return r;
}

// ----- Matrix-game counterparts -----

inline EvalReport NashConv(const MatrixGame& game, const Policy& row,
                           const Policy& col) {
  EvalReport r;
  double v = game.RowValue(row, col);
  r.expected_value = {v, -v};
  std::vector<double> row_values = game.RowActionValues(col);
  std::vector<double> col_values = game.ColActionValues(row);
  r.br_value[0] = *std::max_element(row_values.begin(), row_values.end());
  r.br_value[1] = *std::max_element(col_values.begin(), col_values.end());
  r.nashconv = (r.br_value[0] - v) + (r.br_value[1] + v);
  return r;
}

// ----- Policy table text format: one line per info state -----
//   <key> <p(a0)> <p(a1)> ...

inline void WritePolicyTable(const GameTree& game, const PolicyTable& table,
                             std::ostream& os) {
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    os << game.info_state_keys[s];
    for (double p : table.probs[s]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.17g", p);
      os << buf;
    }
    os << "\n";
  }
}

inline PolicyTable ReadPolicyTable(const GameTree& game, std::istream& is) {
  std::map<std::string, Policy> parsed;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    Policy p;
    double x;
    while (ls >> x) p.push_back(x);
    parsed[key] = std::move(p);
  }
  PolicyTable table;
  table.probs.resize(game.NumInfoStates());
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    auto it = parsed.find(game.info_state_keys[s]);
    if (it == parsed.end()) {
      throw std::invalid_argument("policy table missing key: " +
                                  game.info_state_keys[s]);
    }
    if (static_cast<int>(it->second.size()) !=
        game.info_state_num_actions[s]) {
      throw std::invalid_argument("wrong action count for key: " +
                                  game.info_state_keys[s]);
    }
    table.probs[s] = it->second;
  }
  return table;
}

}  // namespace neurd::eval

#endif  // NEURD_EVAL_HPP_
