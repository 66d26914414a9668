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

#ifndef NEURD_MATRIX_GAME_HPP_
#define NEURD_MATRIX_GAME_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "neurd/policy.hpp"

namespace neurd {

// Two-player zero-sum normal-form game. Entries are the row player's
// utilities; the column player receives the negation.
struct MatrixGame {
  std::vector<std::vector<double>> row_payoffs;

  int NumRowActions() const { return static_cast<int>(row_payoffs.size()); }
  int NumColActions() const {
    return row_payoffs.empty() ? 0 : static_cast<int>(row_payoffs[0].size());
  }

  // Per-action expected payoff for the row player against `col`.
  std::vector<double> RowActionValues(const Policy& col) const {
    std::vector<double> u(NumRowActions(), 0.0);
    for (int i = 0; i < NumRowActions(); ++i) u[i] = Dot(row_payoffs[i], col);
    return u;
  }

  // Per-action expected payoff for the column player against `row`.
  std::vector<double> ColActionValues(const Policy& row) const {
    std::vector<double> u(NumColActions(), 0.0);
    for (int j = 0; j < NumColActions(); ++j) {
      for (int i = 0; i < NumRowActions(); ++i) {
        u[j] -= row[i] * row_payoffs[i][j];
      }
    }
    return u;
  }

  double RowValue(const Policy& row, const Policy& col) const {
    double v = 0;
    for (int i = 0; i < NumRowActions(); ++i) {
      v += row[i] * Dot(row_payoffs[i], col);
    }
    return v;
  }
};

// Rock-paper-scissors with a tunable rock-vs-scissors stake.
//   [[0, -1, nu], [1, 0, -1], [-nu, 1, 0]]
inline MatrixGame RpsGame(double nu) {
  if (!std::isfinite(nu)) throw std::invalid_argument("RpsGame: nu not finite");
  return MatrixGame{{{0, -1, nu}, {1, 0, -1}, {-nu, 1, 0}}};
}

// Per-round utility vectors for the "even" player in repeated matching
// pennies against a scripted opponent: heads for the first 40% of rounds,
// tails afterwards. With `forfeit`, a third action always pays -1.
// Rounds are 1-based; round t <= floor(0.4 T) is the heads phase.
inline std::vector<std::vector<double>> MatchingPenniesUtilities(
    int num_rounds, bool forfeit) {
  if (num_rounds < 1) {
    throw std::invalid_argument("MatchingPenniesUtilities: T must be >= 1");
  }
  int switch_round = static_cast<int>(0.4 * num_rounds);
  std::vector<std::vector<double>> out;
  out.reserve(num_rounds);
  for (int t = 1; t <= num_rounds; ++t) {
    std::vector<double> u =
        (t <= switch_round) ? std::vector<double>{1, -1}
                            : std::vector<double>{-1, 1};
    if (forfeit) u.push_back(-1);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace neurd

#endif  // NEURD_MATRIX_GAME_HPP_
