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

#include <set>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "neurd/games.hpp"
#include "neurd/matrix_game.hpp"
#include "neurd/schedule.hpp"

namespace neurd {
namespace {

TEST_CASE("RpsGame payoff matrices") {
  MatrixGame nu0 = RpsGame(0);
  CHECK(nu0.row_payoffs == std::vector<std::vector<double>>{
                               {0, -1, 0}, {1, 0, -1}, {0, 1, 0}});
  MatrixGame nu1 = RpsGame(1);
  CHECK(nu1.row_payoffs == std::vector<std::vector<double>>{
                               {0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
  MatrixGame nu3 = RpsGame(3);
  CHECK(nu3.row_payoffs[0][2] == 3.0);
  CHECK(nu3.row_payoffs[2][0] == -3.0);
}

TEST_CASE("MatchingPenniesUtilities schedule and forfeit") {
  auto utils = MatchingPenniesUtilities(10, false);
  REQUIRE(utils.size() == 10);
  // Rounds are 1-based: t=3 is within the first 40%, t=5 is beyond.
  CHECK(utils[2] == std::vector<double>{1, -1});
  CHECK(utils[4] == std::vector<double>{-1, 1});

  auto with_forfeit = MatchingPenniesUtilities(10, true);
  for (const auto& u : with_forfeit) {
    REQUIRE(u.size() == 3);
    CHECK(u[2] == -1.0);
  }
  CHECK_THROWS_AS(MatchingPenniesUtilities(0, false), std::invalid_argument);
}

// Independent structural checks shared by the tree games.
void CheckTreeInvariants(const GameTree& game) {
  for (const GameNode& n : game.nodes) {
    if (n.player == kChancePlayer) {
      double s = 0;
      for (double p : n.chance_probs) s += p;
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
    if (n.player >= 0) {
      CHECK(!n.children.empty());
      // Legal-action count is identical across histories sharing a key.
      CHECK(static_cast<int>(n.children.size()) ==
            game.info_state_num_actions[n.info_state]);
      CHECK(game.info_state_player[n.info_state] == n.player);
    }
  }
}

TEST_CASE("KuhnGame structure") {
  GameTree game = games::KuhnGame();
  CHECK(game.NumInfoStates() == 12);
  CHECK(game.NumInfoStates(0) == 6);
  CHECK(game.NumInfoStates(1) == 6);
  CheckTreeInvariants(game);
  CHECK(game.UtilitySpread() == 4.0);
  CHECK(game.max_episode_decisions == 3);
}

TEST_CASE("LeducGame structure") {
  GameTree game = games::LeducGame();
  CHECK(game.NumInfoStates() == 936);
  CheckTreeInvariants(game);
  // Root chance node deals one of 6 private cards to player 0.
  CHECK(game.nodes[0].player == kChancePlayer);
  CHECK(game.nodes[0].children.size() == 6);
}

TEST_CASE("Goofspiel5Game structure") {
  GameTree game = games::Goofspiel5Game();
  CHECK(game.NumInfoStates() == 2124);
  CheckTreeInvariants(game);
  // With a fixed point-card order each player has exactly one first-turn
  // information state.
  int first_p0 = 0, first_p1 = 0;
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    if (game.info_state_keys[s] == "p0:b:o") ++first_p0;
    if (game.info_state_keys[s] == "p1:b:o") ++first_p1;
  }
  CHECK(first_p0 == 1);
  CHECK(first_p1 == 1);
}

TEST_CASE("Perfect recall by key construction") {
  // Keys embed the acting player's full observation/action sequence, so two
  // histories with equal keys have equal observed sequences by construction.
  // Check that distinct sequences never collide: keys parse back to the
  // sequence fields they were built from.
  GameTree game = games::KuhnGame();
  std::set<std::string> keys(game.info_state_keys.begin(),
                             game.info_state_keys.end());
  CHECK(keys.size() == game.info_state_keys.size());
}

TEST_CASE("Schedules") {
  RewardSchedule neg = NegationSchedule(100, 300);
  CHECK(neg.ValueAt(0) == 1.0);
  CHECK(neg.ValueAt(99) == 1.0);   // before the first boundary: identity
  CHECK(neg.ValueAt(100) == -1.0);  // phase 2: utilities negated
  CHECK(neg.ValueAt(250) == 1.0);

  RewardSchedule nus = RpsNuSchedule(10);
  CHECK(ApplySchedule(nus, 5).row_payoffs[0][2] == 20.0);
  CHECK(ApplySchedule(nus, 15).row_payoffs ==
        RpsGame(0).row_payoffs);  // middle phase
  CHECK(ApplySchedule(nus, 25).row_payoffs[0][2] == 20.0);

  CHECK_THROWS_AS(RewardSchedule({5, 5}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("Game name resolution") {
  CHECK(games::TreeGameByName("kuhn").NumInfoStates() == 12);
  CHECK(games::TreeGameByName("rps:3").NumInfoStates() == 2);
  CHECK_THROWS_AS(games::TreeGameByName("chess"), std::invalid_argument);
}

TEST_CASE("RpsTree matches the matrix game") {
  GameTree tree = games::RpsTree(3);
  // Terminal utilities along (a0, a1) equal the payoff matrix.
  MatrixGame m = RpsGame(3);
  for (int a0 = 0; a0 < 3; ++a0) {
    int n1 = tree.nodes[0].children[a0];
    for (int a1 = 0; a1 < 3; ++a1) {
      CHECK(tree.nodes[tree.nodes[n1].children[a1]].utility0 ==
            m.row_payoffs[a0][a1]);
    }
  }
}

}  // namespace
}  // namespace neurd
