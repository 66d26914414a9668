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

#ifndef NEURD_GAMES_HPP_
#define NEURD_GAMES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "neurd/game_tree.hpp"

namespace neurd::games {

namespace internal {

inline void SetOneHot(std::vector<double>& f, int offset, int index) {
  f[offset + index] = 1.0;
}

}  // namespace internal

// -------------------------------------------------------------------------
// Kuhn poker: 3 cards, 1-chip ante, one betting round with a 1-chip bet.
// Actions at every decision: 0 = pass (check/fold), 1 = bet (bet/call).
// -------------------------------------------------------------------------
inline GameTree KuhnGame() {
  GameTreeBuilder b("kuhn");
  constexpr int kNumCards = 3;
  // player(2) + card(3) + two sequence slots, one-hot over {pass, bet}.
  constexpr int kFeatDim = 2 + kNumCards + 2 * 2;

  auto features = [&](int player, int card, const std::string& seq) {
    std::vector<double> f(kFeatDim, 0.0);
    internal::SetOneHot(f, 0, player);
    internal::SetOneHot(f, 2, card);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      internal::SetOneHot(f, 2 + kNumCards + 2 * static_cast<int>(i),
                          seq[i] == 'b' ? 1 : 0);
    }
    return f;
  };
  auto key = [](int player, int card, const std::string& seq) {
    return "p" + std::to_string(player) + ":c" + std::to_string(card) +
           ":" + seq;
  };

  // Showdown utility with the given pot contribution per player.
  auto showdown = [](int c0, int c1, int stake) {
    return c0 > c1 ? static_cast<double>(stake) : -static_cast<double>(stake);
  };

  // Betting subtree after cards (c0, c1) are dealt.
  auto betting = [&](int c0, int c1) {
    int n_root = b.AddPlayerNode(0, key(0, c0, ""), 2, features(0, c0, ""));
    // p0 passes.
    int n_p = b.AddPlayerNode(1, key(1, c1, "p"), 2, features(1, c1, "p"));
    b.Link(n_root, 0, n_p);
    b.Link(n_p, 0, b.AddTerminal(showdown(c0, c1, 1)));
    int n_pb = b.AddPlayerNode(0, key(0, c0, "pb"), 2, features(0, c0, "pb"));
    b.Link(n_p, 1, n_pb);
    b.Link(n_pb, 0, b.AddTerminal(-1.0));  // p0 folds
    b.Link(n_pb, 1, b.AddTerminal(showdown(c0, c1, 2)));
    // p0 bets.
    int n_b = b.AddPlayerNode(1, key(1, c1, "b"), 2, features(1, c1, "b"));
    b.Link(n_root, 1, n_b);
    b.Link(n_b, 0, b.AddTerminal(1.0));  // p1 folds
    b.Link(n_b, 1, b.AddTerminal(showdown(c0, c1, 2)));
    return n_root;
  };

  int root = b.AddChanceNode(std::vector<double>(kNumCards, 1.0 / kNumCards));
  for (int c0 = 0; c0 < kNumCards; ++c0) {
    int deal1 = b.AddChanceNode(std::vector<double>(kNumCards - 1,
                                                    1.0 / (kNumCards - 1)));
    b.Link(root, c0, deal1);
    int slot = 0;
    for (int c1 = 0; c1 < kNumCards; ++c1) {
      if (c1 == c0) continue;
      b.Link(deal1, slot++, betting(c0, c1));
    }
  }
  return b.Finish();
}

// -------------------------------------------------------------------------
// Leduc poker: 6-card deck (3 ranks x 2 suits), 1-chip ante, two betting
// rounds with raise sizes 2 then 4 and at most two raises per round; one
// public card before the second round. Pairing the public card wins,
// otherwise the higher rank; equal ranks split.
// Actions: 0 = fold (only when facing a raise), 1 = call/check, 2 = raise.
// -------------------------------------------------------------------------
inline GameTree LeducGame() {
  GameTreeBuilder b("leduc");
  constexpr int kNumCards = 6;
  auto rank = [](int card) { return card / 2; };
  // player(2) + private(6) + public(7: none + 6) + round-1 sequence
  // (4 slots x {call, raise}) + round-2 sequence (3 slots x {call, raise}).
  constexpr int kFeatDim = 2 + 6 + 7 + 4 * 2 + 3 * 2;

  auto features = [&](int player, int priv, int pub, const std::string& seq1,
                      const std::string& seq2) {
    std::vector<double> f(kFeatDim, 0.0);
    internal::SetOneHot(f, 0, player);
    internal::SetOneHot(f, 2, priv);
    internal::SetOneHot(f, 8, pub < 0 ? 0 : pub + 1);
    for (std::size_t i = 0; i < seq1.size(); ++i) {
      internal::SetOneHot(f, 15 + 2 * static_cast<int>(i),
                          seq1[i] == 'r' ? 1 : 0);
    }
    for (std::size_t i = 0; i < seq2.size(); ++i) {
      internal::SetOneHot(f, 23 + 2 * static_cast<int>(i),
                          seq2[i] == 'r' ? 1 : 0);
    }
    return f;
  };
  auto key = [](int player, int priv, int pub, const std::string& seq1,
                const std::string& seq2) {
    return "p" + std::to_string(player) + ":c" + std::to_string(priv) +
           ":pub" + (pub < 0 ? std::string("-") : std::to_string(pub)) + ":" +
           seq1 + "/" + seq2;
  };

  struct Cards {
    int c0, c1, pub;  // pub < 0 before the public card is dealt
  };

  // Terminal utility to p0 at showdown with equal contributions `stake`.
  auto showdown = [&](const Cards& cards, int stake) -> double {
    int r0 = rank(cards.c0), r1 = rank(cards.c1), rp = rank(cards.pub);
    if (r0 == rp) return stake;
    if (r1 == rp) return -stake;
    if (r0 == r1) return 0.0;
    return r0 > r1 ? stake : -stake;
  };

  // Forward declaration for the two-round recursion.
  std::function<int(const Cards&, int, std::array<int, 2>, int,
                    const std::string&, const std::string&)>
      betting;
  // Builds the node where `to_act` moves in betting round `round` (0 or 1).
  // `contrib` holds chips committed per player; the acting player faces a
  // raise iff contributions differ. Returns the node id.
  betting = [&](const Cards& cards, int round, std::array<int, 2> contrib,
                int to_act, const std::string& seq1,
                const std::string& seq2) -> int {
    const int raise_size = round == 0 ? 2 : 4;
    const std::string& cur = round == 0 ? seq1 : seq2;
    int other = 1 - to_act;
    bool facing_raise = contrib[other] > contrib[to_act];
    int num_raises = static_cast<int>(
        std::count(cur.begin(), cur.end(), 'r'));
    bool can_raise = num_raises < 2;
    int num_actions = 1 + (facing_raise ? 1 : 0) + (can_raise ? 1 : 0);
    int priv = to_act == 0 ? cards.c0 : cards.c1;
    int node = b.AddPlayerNode(
        to_act, key(to_act, priv, cards.pub, seq1, seq2), num_actions,
        features(to_act, priv, cards.pub, seq1, seq2));

    auto next_round_or_showdown = [&](std::array<int, 2> pot) -> int {
      if (round == 0) {
        // Deal the public card uniformly from the four remaining.
        std::vector<int> remaining;
        for (int c = 0; c < kNumCards; ++c) {
          if (c != cards.c0 && c != cards.c1) remaining.push_back(c);
        }
        int chance = b.AddChanceNode(
            std::vector<double>(remaining.size(), 1.0 / remaining.size()));
        for (std::size_t i = 0; i < remaining.size(); ++i) {
          Cards next = cards;
          next.pub = remaining[i];
          b.Link(chance, static_cast<int>(i),
                 betting(next, 1, pot, 0, seq1, ""));
        }
        return chance;
      }
      return b.AddTerminal(showdown(cards, pot[0]));
    };

    auto advance = [&](char move, std::array<int, 2> pot) -> int {
      std::string ns1 = seq1, ns2 = seq2;
      (round == 0 ? ns1 : ns2) += move;
      // A call closes the round unless it is the opening check.
      bool round_over = move == 'c' && (facing_raise || !cur.empty());
      if (round_over) return next_round_or_showdown(pot);
      return betting(cards, round, pot, other, ns1, ns2);
    };

    int slot = 0;
    if (facing_raise) {
      // Fold: the folder surrenders their contribution so far.
      double u0 = to_act == 0 ? -contrib[0] : contrib[1];
      b.Link(node, slot++, b.AddTerminal(u0));
    }
    {  // call / check
      std::array<int, 2> pot = contrib;
      pot[to_act] = pot[other];
      b.Link(node, slot++, advance('c', pot));
    }
    if (can_raise) {
      std::array<int, 2> pot = contrib;
      pot[to_act] = pot[other] + raise_size;
      b.Link(node, slot++, advance('r', pot));
    }
    return node;
  };

  int root = b.AddChanceNode(std::vector<double>(kNumCards, 1.0 / kNumCards));
  for (int c0 = 0; c0 < kNumCards; ++c0) {
    int deal1 = b.AddChanceNode(
        std::vector<double>(kNumCards - 1, 1.0 / (kNumCards - 1)));
    b.Link(root, c0, deal1);
    int slot = 0;
    for (int c1 = 0; c1 < kNumCards; ++c1) {
      if (c1 == c0) continue;
      b.Link(deal1, slot++,
             betting(Cards{c0, c1, -1}, 0, {1, 1}, 0, "", ""));
    }
  }
  return b.Finish();
}

// -------------------------------------------------------------------------
// 5-card imperfect-information Goofspiel. Point cards come out in a fixed
// descending order (5,4,3,2,1). Each round both players secretly bid one
// card from their hand; the higher bid wins the point card, ties discard
// it. Bids stay hidden; players observe only win/loss/tie per round.
// Simultaneous bids are serialized (p0 then p1, with p1 not seeing p0's
// bid). A round with a single card left in hand is played automatically
// and creates no decision node.
// -------------------------------------------------------------------------
inline GameTree Goofspiel5Game() {
  GameTreeBuilder b("goofspiel5");
  constexpr int kNumCards = 5;
  // player(2) + 4 past rounds x (own bid one-hot(5) + outcome one-hot(3)).
  constexpr int kFeatDim = 2 + 4 * (kNumCards + 3);

  struct Obs {
    std::string plays;     // own bids so far, as digits
    std::string outcomes;  // 'w' / 'l' / 't' from own perspective
  };
  auto key = [](int player, const Obs& o) {
    return "p" + std::to_string(player) + ":b" + o.plays + ":o" + o.outcomes;
  };
  auto features = [&](int player, const Obs& o) {
    std::vector<double> f(kFeatDim, 0.0);
    internal::SetOneHot(f, 0, player);
    for (std::size_t i = 0; i < o.plays.size(); ++i) {
      int base = 2 + static_cast<int>(i) * (kNumCards + 3);
      internal::SetOneHot(f, base, o.plays[i] - '1');
      int out = o.outcomes[i] == 'w' ? 0 : o.outcomes[i] == 'l' ? 1 : 2;
      internal::SetOneHot(f, base + kNumCards, out);
    }
    return f;
  };

  // Point cards in play order.
  const std::array<int, kNumCards> point_cards = {5, 4, 3, 2, 1};

  struct Hands {
    std::vector<int> h0, h1;
  };

  std::function<int(const Hands&, int, double, const Obs&, const Obs&)> round;
  std::function<int(const Hands&, int, double, const Obs&, const Obs&, int)>
      p1_turn;

  p1_turn = [&](const Hands& hands, int rnd, double score0, const Obs& o0,
                const Obs& o1, int bid0) -> int {
    auto resolve = [&](int bid1) -> int {
      char r0, r1;
      double delta = 0;
      if (bid0 > bid1) {
        r0 = 'w';
        r1 = 'l';
        delta = point_cards[rnd];
      } else if (bid0 < bid1) {
        r0 = 'l';
        r1 = 'w';
        delta = -point_cards[rnd];
      } else {
        r0 = r1 = 't';
      }
      Hands next;
      for (int c : hands.h0) {
        if (c != bid0) next.h0.push_back(c);
      }
      for (int c : hands.h1) {
        if (c != bid1) next.h1.push_back(c);
      }
      Obs n0{o0.plays + static_cast<char>('0' + bid0), o0.outcomes + r0};
      Obs n1{o1.plays + static_cast<char>('0' + bid1), o1.outcomes + r1};
      return round(next, rnd + 1, score0 + delta, n0, n1);
    };

    if (hands.h1.size() == 1) return resolve(hands.h1[0]);
    int node = b.AddPlayerNode(1, key(1, o1),
                               static_cast<int>(hands.h1.size()),
                               features(1, o1));
    for (std::size_t i = 0; i < hands.h1.size(); ++i) {
      b.Link(node, static_cast<int>(i), resolve(hands.h1[i]));
    }
    return node;
  };

  round = [&](const Hands& hands, int rnd, double score0, const Obs& o0,
              const Obs& o1) -> int {
    if (rnd == kNumCards) return b.AddTerminal(score0);
    if (hands.h0.size() == 1) {
      return p1_turn(hands, rnd, score0, o0, o1, hands.h0[0]);
    }
    int node = b.AddPlayerNode(0, key(0, o0),
                               static_cast<int>(hands.h0.size()),
                               features(0, o0));
    for (std::size_t i = 0; i < hands.h0.size(); ++i) {
      b.Link(node, static_cast<int>(i),
             p1_turn(hands, rnd, score0, o0, o1, hands.h0[i]));
    }
    return node;
  };

  Hands start;
  for (int c = 1; c <= kNumCards; ++c) {
    start.h0.push_back(c);
    start.h1.push_back(c);
  }
  int root = round(start, 0, 0.0, Obs{}, Obs{});
  if (root != 0) throw std::logic_error("goofspiel root must be node 0");
  return b.Finish();
}

// -------------------------------------------------------------------------
// Biased rock-paper-scissors as a two-node tree: p0 commits first, p1 moves
// without observing the commitment (both have a single information state).
// Payoff matrix to p0: [[0,-1,nu],[1,0,-1],[-nu,1,0]].
// -------------------------------------------------------------------------
inline GameTree RpsTree(double nu) {
  GameTreeBuilder b("rps");
  const std::vector<std::vector<double>> payoff = {
      {0, -1, nu}, {1, 0, -1}, {-nu, 1, 0}};
  int n0 = b.AddPlayerNode(0, "p0:", 3, {1, 0});
  for (int a0 = 0; a0 < 3; ++a0) {
    int n1 = b.AddPlayerNode(1, "p1:", 3, {0, 1});
    b.Link(n0, a0, n1);
    for (int a1 = 0; a1 < 3; ++a1) {
      b.Link(n1, a1, b.AddTerminal(payoff[a0][a1]));
    }
  }
  return b.Finish();
}

// Resolves a CLI game name: `kuhn`, `leduc`, `goofspiel5`, or `rps:<nu>`.
inline GameTree TreeGameByName(const std::string& name) {
  if (name == "kuhn") return KuhnGame();
  if (name == "leduc") return LeducGame();
  if (name == "goofspiel5") return Goofspiel5Game();
  if (name.rfind("rps:", 0) == 0) {
    return RpsTree(std::stod(name.substr(4)));
  }
  throw std::invalid_argument("unknown game: " + name);
}

}  // namespace neurd::games

#endif  // NEURD_GAMES_HPP_
