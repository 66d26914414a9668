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

#ifndef NEURD_SCHEDULE_HPP_
#define NEURD_SCHEDULE_HPP_

#include <stdexcept>
#include <vector>

#include "neurd/matrix_game.hpp"

namespace neurd {

// Piecewise-constant reward nonstationarity. Phase p covers iterations
// [boundaries[p-1], boundaries[p]) with an implicit start at 0. The
// per-phase value is interpreted by the consumer: a utility scale for tree
// games (reward negation), or a nu parameter for RPS phases.
struct RewardSchedule {
  std::vector<long> boundaries;     // strictly increasing phase starts (> 0)
  std::vector<double> phase_values;  // size boundaries.size() + 1

  RewardSchedule() : phase_values{1.0} {}
  RewardSchedule(std::vector<long> bounds, std::vector<double> values)
      : boundaries(std::move(bounds)), phase_values(std::move(values)) {
    if (phase_values.size() != boundaries.size() + 1) {
      throw std::invalid_argument("RewardSchedule: need one value per phase");
    }
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      if (boundaries[i] <= 0 ||
          (i > 0 && boundaries[i] <= boundaries[i - 1])) {
        throw std::invalid_argument(
            "RewardSchedule: boundaries must be strictly increasing");
      }
    }
  }

  int PhaseIndex(long t) const {
    if (t < 0) throw std::invalid_argument("RewardSchedule: t must be >= 0");
    int p = 0;
    while (p < static_cast<int>(boundaries.size()) && t >= boundaries[p]) ++p;
    return p;
  }

  double ValueAt(long t) const { return phase_values[PhaseIndex(t)]; }
};

// Alternating +1/-1 utility scales switching every `switch_every`
// iterations over a horizon of `total` iterations.
inline RewardSchedule NegationSchedule(long switch_every, long total) {
  if (switch_every <= 0) {
    throw std::invalid_argument("NegationSchedule: switch_every must be > 0");
  }
  std::vector<long> bounds;
  std::vector<double> values{1.0};
  for (long b = switch_every; b < total; b += switch_every) {
    bounds.push_back(b);
    values.push_back(values.back() * -1.0);
  }
  return RewardSchedule(std::move(bounds), std::move(values));
}

// The three-phase nu schedule used for nonstationary RPS.
inline RewardSchedule RpsNuSchedule(long switch_every,
                                    std::vector<double> nus = {20, 0, 20}) {
  std::vector<long> bounds;
  for (std::size_t i = 1; i < nus.size(); ++i) {
    bounds.push_back(switch_every * static_cast<long>(i));
  }
  return RewardSchedule(std::move(bounds), std::move(nus));
}

// Matrix-game view of an RPS nu schedule at iteration t.
inline MatrixGame ApplySchedule(const RewardSchedule& schedule, long t) {
  return RpsGame(schedule.ValueAt(t));
}

// Tree games are immutable; nonstationarity is a utility scale applied by
// the evaluators and learners.
inline double UtilityScaleAt(const RewardSchedule& schedule, long t) {
  return schedule.ValueAt(t);
}

}  // namespace neurd

#endif  // NEURD_SCHEDULE_HPP_
