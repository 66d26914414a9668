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

#ifndef NEURD_GAME_TREE_HPP_
#define NEURD_GAME_TREE_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "neurd/policy.hpp"

namespace neurd {

inline constexpr int kChancePlayer = -1;
inline constexpr int kTerminalPlayer = -2;

// One node of a fully expanded two-player zero-sum extensive-form game.
// Actions are indices into `children`; chance nodes carry outcome
// probabilities; terminals carry the first player's utility (the second
// player receives the negation).
struct GameNode {
  int player = kTerminalPlayer;
  int info_state = -1;             // index into GameTree::info_state_keys
  std::vector<int> children;
  std::vector<double> chance_probs;  // chance nodes only
  double utility0 = 0.0;             // terminal nodes only
};

// Immutable after construction; safe to share across threads.
struct GameTree {
  std::string name;
  std::vector<GameNode> nodes;  // nodes[0] is the root
  std::vector<std::string> info_state_keys;
  std::vector<int> info_state_player;             // acting player per key
  std::vector<int> info_state_num_actions;        // action count per key
  std::vector<std::vector<double>> info_state_features;  // fixed-length encoding
  int max_episode_decisions = 0;  // max decision nodes on any root-terminal path

  int NumInfoStates() const { return static_cast<int>(info_state_keys.size()); }

  int NumInfoStates(int player) const {
    int n = 0;
    for (int p : info_state_player) n += (p == player);
    return n;
  }

  int MaxActions(int player) const {
    int m = 0;
    for (int s = 0; s < NumInfoStates(); ++s) {
      if (info_state_player[s] == player) {
        m = std::max(m, info_state_num_actions[s]);
      }
    }
    return m;
  }

  // Max terminal-utility spread for either player (zero-sum, so shared).
  double UtilitySpread() const {
    double lo = 0, hi = 0;
    bool first = true;
    for (const GameNode& n : nodes) {
      if (n.player == kTerminalPlayer) {
        if (first) {
          lo = hi = n.utility0;
          first = false;
        } else {
          lo = std::min(lo, n.utility0);
          hi = std::max(hi, n.utility0);
        }
      }
    }
    return hi - lo;
  }

  int FeatureDim() const {
    return info_state_features.empty()
               ? 0
               : static_cast<int>(info_state_features[0].size());
  }

  int InfoStateIndex(const std::string& key) const {
    for (int s = 0; s < NumInfoStates(); ++s) {
      if (info_state_keys[s] == key) return s;
    }
    throw std::invalid_argument("unknown info state key: " + key);
  }
};

// Behavioral policy for a GameTree: one probability vector per info state,
// aligned with GameTree::info_state_keys.
struct PolicyTable {
  std::vector<Policy> probs;

  static PolicyTable Uniform(const GameTree& game) {
    PolicyTable t;
    t.probs.reserve(game.NumInfoStates());
    for (int s = 0; s < game.NumInfoStates(); ++s) {
      t.probs.push_back(UniformPolicy(game.info_state_num_actions[s]));
    }
    return t;
  }
};

// Incremental builder used by the concrete game constructors.
class GameTreeBuilder {
 public:
  explicit GameTreeBuilder(std::string name) { tree_.name = std::move(name); }

  int AddPlayerNode(int player, const std::string& info_key,
                    int num_actions, const std::vector<double>& features) {
    int id = NewNode();
    tree_.nodes[id].player = player;
    auto [it, inserted] = key_index_.try_emplace(
        info_key, static_cast<int>(tree_.info_state_keys.size()));
    if (inserted) {
      tree_.info_state_keys.push_back(info_key);
      tree_.info_state_player.push_back(player);
      tree_.info_state_num_actions.push_back(num_actions);
      tree_.info_state_features.push_back(features);
    } else {
      int s = it->second;
      if (tree_.info_state_player[s] != player ||
          tree_.info_state_num_actions[s] != num_actions) {
        throw std::logic_error("inconsistent info state: " + info_key);
      }
    }
    tree_.nodes[id].info_state = it->second;
    tree_.nodes[id].children.assign(num_actions, -1);
    return id;
  }

  int AddChanceNode(const std::vector<double>& probs) {
    double s = 0;
    for (double p : probs) s += p;
    if (std::abs(s - 1.0) > 1e-12) {
      throw std::logic_error("chance probabilities must sum to 1");
    }
    int id = NewNode();
    tree_.nodes[id].player = kChancePlayer;
    tree_.nodes[id].chance_probs = probs;
    tree_.nodes[id].children.assign(probs.size(), -1);
    return id;
  }

  int AddTerminal(double utility0) {
    int id = NewNode();
    tree_.nodes[id].player = kTerminalPlayer;
    tree_.nodes[id].utility0 = utility0;
    return id;
  }

  void Link(int parent, int action, int child) {
    tree_.nodes[parent].children[action] = child;
  }

  GameTree Finish() {
    for (const GameNode& n : tree_.nodes) {
      for (int c : n.children) {
        if (c < 0) throw std::logic_error("unlinked child in game tree");
      }
    }
    tree_.max_episode_decisions = MaxDecisions(0);
    return std::move(tree_);
  }

 private:
  int NewNode() {
    tree_.nodes.emplace_back();
    return static_cast<int>(tree_.nodes.size()) - 1;
  }

  int MaxDecisions(int node) const {
    const GameNode& n = tree_.nodes[node];
    if (n.player == kTerminalPlayer) return 0;
    int m = 0;
    for (int c : n.children) m = std::max(m, MaxDecisions(c));
    return m + (n.player >= 0 ? 1 : 0);
  }

  GameTree tree_;
  std::map<std::string, int> key_index_;
};

}  // namespace neurd

#endif  // NEURD_GAME_TREE_HPP_
