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

#include <cmath>
#include <sstream>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "neurd/eval.hpp"
#include "neurd/games.hpp"
#include "neurd/rng.hpp"

namespace neurd::eval {
namespace {

// Independent expected-value oracle: recursive expectation over the tree.
double BruteForceValue(const GameTree& game, const PolicyTable& joint,
                       int node_id) {
  const GameNode& n = game.nodes[node_id];
  if (n.player == kTerminalPlayer) return n.utility0;
  double v = 0;
  for (std::size_t c = 0; c < n.children.size(); ++c) {
    double p = n.player == kChancePlayer
                   ? n.chance_probs[c]
                   : joint.probs[n.info_state][c];
    v += p * BruteForceValue(game, joint, n.children[c]);
  }
  return v;
}

PolicyTable RandomPolicy(const GameTree& game, Rng& rng) {
  PolicyTable t = PolicyTable::Uniform(game);
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    t.probs[s] = SampleSimplex(game.info_state_num_actions[s], rng);
  }
  return t;
}

TEST_CASE("ExpectedValue on RPS and Kuhn") {
  GameTree rps = games::RpsTree(3);
  PolicyTable uniform = PolicyTable::Uniform(rps);
  auto [v0, v1] = ExpectedValue(rps, uniform);
  CHECK(v0 == Catch::Approx(0.0).margin(1e-15));
  CHECK(v1 == Catch::Approx(0.0).margin(1e-15));

  GameTree kuhn = games::KuhnGame();
  PolicyTable ku = PolicyTable::Uniform(kuhn);
  auto [k0, k1] = ExpectedValue(kuhn, ku);
  CHECK(k0 == Catch::Approx(0.125).margin(1e-12));
  CHECK(k0 + k1 == Catch::Approx(0.0).margin(1e-15));
  CHECK(k0 == Catch::Approx(BruteForceValue(kuhn, ku, 0)).margin(1e-12));

  // Agreement with the brute-force oracle on random joints.
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    PolicyTable t = RandomPolicy(kuhn, rng);
    auto [e0, e1] = ExpectedValue(kuhn, t);
    CHECK(e0 == Catch::Approx(BruteForceValue(kuhn, t, 0)).margin(1e-12));
    CHECK(e1 == Catch::Approx(-e0).margin(1e-15));
  }
}

TEST_CASE("ComputeBestResponse on the RPS tree") {
  GameTree rps = games::RpsTree(1);
  PolicyTable rock = PolicyTable::Uniform(rps);
  rock.probs[0] = {1, 0, 0};  // player 0 plays rock
  BestResponse br = ComputeBestResponse(rps, rock, 1);
  CHECK(br.value == Catch::Approx(1.0));
  CHECK(rps.info_state_player[1] == 1);
  CHECK(br.policy.probs[1] == std::vector<double>{0, 1, 0});  // paper

  // Against uniform every action ties at 0; ties break to action 0.
  PolicyTable uniform = PolicyTable::Uniform(rps);
  BestResponse tie = ComputeBestResponse(rps, uniform, 1);
  CHECK(tie.value == Catch::Approx(0.0).margin(1e-15));
  CHECK(tie.policy.probs[1] == std::vector<double>{1, 0, 0});
}

TEST_CASE("Best response dominates arbitrary responses") {
  GameTree kuhn = games::KuhnGame();
  PolicyTable uniform = PolicyTable::Uniform(kuhn);
  Rng rng(17);
  for (int player = 0; player < 2; ++player) {
    BestResponse br = ComputeBestResponse(kuhn, uniform, player);
    double sign = player == 0 ? 1.0 : -1.0;
    auto [v0, v1] = ExpectedValue(kuhn, uniform);
    CHECK(br.value >= sign * v0 - 1e-12);
    for (int trial = 0; trial < 50; ++trial) {
      // Replace the player's rows with a random policy: the best response
      // value must weakly dominate it.
      PolicyTable challenger = RandomPolicy(kuhn, rng);
      for (int s = 0; s < kuhn.NumInfoStates(); ++s) {
        if (kuhn.info_state_player[s] != player) {
          challenger.probs[s] = uniform.probs[s];
        }
      }
      auto [c0, c1] = ExpectedValue(kuhn, challenger);
      CHECK(br.value >= sign * c0 - 1e-10);
    }
  }
}

TEST_CASE("NashConv values") {
  // Uniform joint is the equilibrium of standard RPS.
  GameTree rps = games::RpsTree(1);
  EvalReport at_eq = NashConv(rps, PolicyTable::Uniform(rps));
  CHECK(at_eq.nashconv == Catch::Approx(0.0).margin(1e-12));

  // Biased RPS nu=3: uniform joint has NashConv 4/3 (both players' best
  // responses pick paper for 2/3 each).
  GameTree biased = games::RpsTree(3);
  EvalReport rep = NashConv(biased, PolicyTable::Uniform(biased));
  CHECK(rep.nashconv == Catch::Approx(4.0 / 3).margin(1e-12));

  // Tree computation agrees with the matrix-game formula.
  MatrixGame m = RpsGame(3);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Policy row = SampleSimplex(3, rng), col = SampleSimplex(3, rng);
    PolicyTable t = PolicyTable::Uniform(biased);
    t.probs[0] = row;
    t.probs[1] = col;
    EvalReport tree_rep = NashConv(biased, t);
    EvalReport mat_rep = NashConv(m, row, col);
    CHECK(tree_rep.nashconv ==
          Catch::Approx(mat_rep.nashconv).margin(1e-12));
    // Each player's summand br - ev is nonnegative.
    for (int p = 0; p < 2; ++p) {
      CHECK(tree_rep.br_value[p] - tree_rep.expected_value[p] >= -1e-10);
    }
  }

  // Kuhn uniform: NashConv = 11/12.
  GameTree kuhn = games::KuhnGame();
  EvalReport krep = NashConv(kuhn, PolicyTable::Uniform(kuhn));
  CHECK(krep.nashconv == Catch::Approx(11.0 / 12).margin(1e-12));
  CHECK(krep.expected_value[0] == Catch::Approx(0.125).margin(1e-12));
}

TEST_CASE("Policy table round trip") {
  GameTree kuhn = games::KuhnGame();
  Rng rng(2);
  PolicyTable t = RandomPolicy(kuhn, rng);
  std::stringstream ss;
  WritePolicyTable(kuhn, t, ss);
  PolicyTable back = ReadPolicyTable(kuhn, ss);
  for (int s = 0; s < kuhn.NumInfoStates(); ++s) {
    REQUIRE(back.probs[s].size() == t.probs[s].size());
    for (std::size_t a = 0; a < t.probs[s].size(); ++a) {
      CHECK(back.probs[s][a] == t.probs[s][a]);  // %.17g is lossless
    }
  }

  std::stringstream missing("0:- 0.5 0.5\n");
  CHECK_THROWS_AS(ReadPolicyTable(kuhn, missing), std::invalid_argument);

  std::stringstream wrong_arity;
  WritePolicyTable(kuhn, t, wrong_arity);
  std::string content = wrong_arity.str();
  content = content.substr(0, content.rfind(' '));  // drop one probability
  std::stringstream truncated(content);
  CHECK_THROWS_AS(ReadPolicyTable(kuhn, truncated), std::invalid_argument);
}

}  // namespace
}  // namespace neurd::eval
