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

#ifndef NEURD_NEURAL_HPP_
#define NEURD_NEURAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <string>
#include <vector>

#include "neurd/eval.hpp"
#include "neurd/game_tree.hpp"
#include "neurd/mlp.hpp"
#include "neurd/policy.hpp"
#include "neurd/rng.hpp"
#include "neurd/schedule.hpp"

namespace neurd::neural {

// Fixed-length binary encoding of an information state, looked up by key.
inline const std::vector<double>& Featurize(const GameTree& game,
                                            const std::string& key) {
  return game.info_state_features[game.InfoStateIndex(key)];
}

// ---------------------------------------------------------------------
// Logit models. Both expose the same surface so the update rules below
// are written once: an Activation produced by Evaluate(), per-action
// logit-gradient accumulation, the exact post-step logit used by the
// clipping rule, and a summed parameter step.
// ---------------------------------------------------------------------

// Query for one information state of a given game.
struct StateQuery {
  int info_state = -1;
  const std::vector<double>* features = nullptr;
  int num_actions = 0;
};

inline StateQuery QueryFor(const GameTree& game, int info_state) {
  return {info_state, &game.info_state_features[info_state],
          game.info_state_num_actions[info_state]};
}

// MLP-backed logits shared across all information states (the features
// disambiguate acting player and observations). Logits are masked to the
// first `num_actions` outputs of the head.
struct MlpLogitModel {
  Mlp net;

  struct Activation {
    MlpActivation act;
    int num_actions = 0;
  };
  using Grad = MlpGrad;

  MlpLogitModel(int feature_dim, int hidden, int max_actions)
      : net(feature_dim, hidden, max_actions) {}

  Grad ZeroGrad() const { return Grad(net); }

  Activation Evaluate(const StateQuery& q) const {
    return {MlpForward(net, *q.features), q.num_actions};
  }

  Logits LegalLogits(const Activation& a) const {
    return Logits(a.act.logits.begin(), a.act.logits.begin() + a.num_actions);
  }

  void AddLogitGradient(const Activation& a, int action, double coeff,
                        Grad& g) const {
    MlpAddLogitGradient(net, a.act, action, coeff, g);
  }

  double PostStepLogit(const Activation& a, int action, double coeff) const {
    return MlpPostStepLogit(net, a.act, action, coeff);
  }

  void ApplyStep(const Grad& g, double scale) { MlpApplyStep(net, g, scale); }
};

// One logit per (state, action); makes the parameterized updates reduce
// exactly to their tabular counterparts.
struct TabularLogitModel {
  std::vector<Logits> rows;

  struct Activation {
    int info_state = -1;
    Logits logits;
    int num_actions = 0;
  };
  using Grad = std::vector<std::pair<std::pair<int, int>, double>>;

  explicit TabularLogitModel(const GameTree& game) {
    rows.reserve(game.NumInfoStates());
    for (int s = 0; s < game.NumInfoStates(); ++s) {
      rows.emplace_back(game.info_state_num_actions[s], 0.0);
    }
  }

  Grad ZeroGrad() const { return {}; }

  Activation Evaluate(const StateQuery& q) const {
    return {q.info_state, rows[q.info_state], q.num_actions};
  }

  Logits LegalLogits(const Activation& a) const { return a.logits; }

  void AddLogitGradient(const Activation& a, int action, double coeff,
                        Grad& g) const {
    g.push_back({{a.info_state, action}, coeff});
  }

  double PostStepLogit(const Activation& a, int action, double coeff) const {
    return a.logits[action] + coeff;
  }

  void ApplyStep(const Grad& g, double scale) {
    for (const auto& [sa, coeff] : g) {
      rows[sa.first][sa.second] += scale * coeff;
    }
  }
};

// Masked policy head: logits restricted to legal actions, then softmax.
template <typename Model>
std::pair<Logits, Policy> PolicyForward(const Model& model,
                                        const StateQuery& q) {
  Logits y = model.LegalLogits(model.Evaluate(q));
  return {y, Softmax(y)};
}

// ---------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------

struct Step {
  int info_state = -1;
  int action = -1;
  int player = -1;
};

struct Episode {
  std::vector<Step> steps;  // decision steps only
  double utility0 = 0.0;    // unscaled terminal utility to player 0
};

using TrajectoryBatch = std::vector<Episode>;

using PolicyFn = std::function<Policy(const StateQuery&)>;

// Samples n independent episodes; chance and action draws come from the
// seeded generator only, so a seed fully determines the batch.
inline TrajectoryBatch SampleTrajectories(const GameTree& game,
                                          const PolicyFn& policy, int n,
                                          Rng& rng) {
  if (n < 1) throw std::invalid_argument("SampleTrajectories: n must be >= 1");
  TrajectoryBatch batch;
  batch.reserve(n);
  for (int e = 0; e < n; ++e) {
    Episode ep;
    int node = 0;
    while (game.nodes[node].player != kTerminalPlayer) {
      const GameNode& gn = game.nodes[node];
      int a;
      if (gn.player == kChancePlayer) {
        a = SampleIndex(gn.chance_probs, rng);
      } else {
        Policy pi = policy(QueryFor(game, gn.info_state));
        a = SampleIndex(pi, rng);
        ep.steps.push_back({gn.info_state, a, gn.player});
      }
      node = gn.children[a];
    }
    ep.utility0 = game.nodes[node].utility0;
    batch.push_back(std::move(ep));
  }
  return batch;
}

// ---------------------------------------------------------------------
// Critic
// ---------------------------------------------------------------------

// Monte-Carlo return to the acting player of step i (terminal-only rewards).
inline double Return(const Episode& ep, std::size_t i, double gamma,
                     double scale) {
  double r = (ep.steps[i].player == 0 ? ep.utility0 : -ep.utility0) * scale;
  return r * std::pow(gamma, static_cast<double>(ep.steps.size() - 1 - i));
}

// One squared-error gradient step per visited (s, a) toward the sampled
// return.
inline void UpdateCritic(MlpLogitModel& critic, const GameTree& game,
                         const TrajectoryBatch& batch, double gamma, double lr,
                         double scale = 1.0) {
  if (gamma < 0 || gamma > 1) {
    throw std::invalid_argument("UpdateCritic: gamma must be in [0,1]");
  }
  if (lr < 0) throw std::invalid_argument("UpdateCritic: lr must be >= 0");
  if (lr == 0) return;
  for (const Episode& ep : batch) {
    for (std::size_t i = 0; i < ep.steps.size(); ++i) {
      const Step& st = ep.steps[i];
      double target = Return(ep, i, gamma, scale);
      auto act = critic.Evaluate(QueryFor(game, st.info_state));
      double err = act.act.logits[st.action] - target;
      auto g = critic.ZeroGrad();
      critic.AddLogitGradient(act, st.action, err, g);
      critic.ApplyStep(g, -lr);
    }
  }
}

// q'(a) = q(a) - tau * log pi(a); the FoReL-style entropy cost on
// action values.
inline std::vector<double> EntropyRegularizedQ(const std::vector<double>& q,
                                               const Policy& pi, double tau) {
  if (tau < 0) throw std::invalid_argument("EntropyRegularizedQ: tau < 0");
  std::vector<double> out = q;
  if (tau == 0) return out;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (pi[a] <= 0) {
      throw std::domain_error(
          "EntropyRegularizedQ: zero probability on a legal action");
    }
    out[a] -= tau * std::log(pi[a]);
  }
  return out;
}

// ---------------------------------------------------------------------
// Parameter updates
// ---------------------------------------------------------------------

// One (state, q-estimate) pair of a policy-update batch. `weight` carries
// the state's empirical visit frequency when a sampled batch is aggregated
// per distinct state.
struct StateSample {
  StateQuery query;
  std::vector<double> q_hat;  // per legal action
  double v_hat = 0.0;         // sum_a pi(a) q_hat(a)
  double weight = 1.0;
};

inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

// Logit-space update summed over states and all legal actions:
//   theta += eta * sum_{s,a} grad_theta y(s,a) (q(s,a) - v(s)),
// with each (s,a) contribution zeroed when its own hypothetical step would
// push the logit outside [-beta, beta].
template <typename Model>
void NeurdParamUpdate(Model& model, const std::vector<StateSample>& batch,
                      double eta, double beta) {
  if (eta <= 0) throw std::invalid_argument("NeurdParamUpdate: eta must be > 0");
  if (!(beta > 0)) {
    throw std::invalid_argument("NeurdParamUpdate: beta must be > 0");
  }
  auto grad = model.ZeroGrad();
  for (const StateSample& s : batch) {
    auto act = model.Evaluate(s.query);
    for (int a = 0; a < s.query.num_actions; ++a) {
      double adv = s.weight * (s.q_hat[a] - s.v_hat);
      if (adv == 0) continue;
      if (beta != kNoClip) {
        double post = model.PostStepLogit(act, a, eta * adv);
        if (post < -beta || post > beta) continue;
      }
      model.AddLogitGradient(act, a, adv, grad);
    }
  }
  model.ApplyStep(grad, eta);
}

// All-actions softmax policy gradient on the same batch:
//   theta += eta * sum_{s,a} grad_theta pi(a|s) (q(s,a) - v(s)),
// which in logit space scales each NeuRD contribution by pi(a|s).
template <typename Model>
void SpgParamUpdate(Model& model, const std::vector<StateSample>& batch,
                    double eta) {
  if (eta <= 0) throw std::invalid_argument("SpgParamUpdate: eta must be > 0");
  auto grad = model.ZeroGrad();
  for (const StateSample& s : batch) {
    auto act = model.Evaluate(s.query);
    Policy pi = Softmax(model.LegalLogits(act));
    // grad_theta pi(a) . adv = grad_theta y . (J^T adv); with v = pi . q the
    // Jacobian-transposed coefficients reduce to pi(a) (q(a) - v).
    for (int a = 0; a < s.query.num_actions; ++a) {
      double coeff = s.weight * pi[a] * (s.q_hat[a] - s.v_hat);
      if (coeff != 0) model.AddLogitGradient(act, a, coeff, grad);
    }
  }
  model.ApplyStep(grad, eta);
}

// ---------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------

enum class Algo { kNeurd, kSpg };

inline Algo AlgoFromString(const std::string& s) {
  if (s == "neurd") return Algo::kNeurd;
  if (s == "spg") return Algo::kSpg;
  throw std::invalid_argument("unknown algo: " + s);
}

struct TrainConfig {
  Algo algo = Algo::kNeurd;
  double tau = 0.0;
  double beta = 2.0;
  double policy_lr = 0.002;
  double critic_lr = 0.01;
  double gamma = 1.0;
  int hidden = 128;
  int policy_batch = 256;
  int critic_batch = 4;
  int critic_updates_per_policy_update = 4;
  long policy_updates = 20000;
  long eval_every = 500;
  long switch_every = 0;  // reward negation interval; 0 disables
  std::uint64_t seed = 1;
};

struct TrainRecord {
  long update = 0;
  int phase = 0;
  double nashconv = 0.0;
};

// Extracts the network's behavioral policy over every information state.
inline PolicyTable ExtractPolicy(const GameTree& game,
                                 const MlpLogitModel& model) {
  PolicyTable t;
  t.probs.reserve(game.NumInfoStates());
  for (int s = 0; s < game.NumInfoStates(); ++s) {
    t.probs.push_back(PolicyForward(model, QueryFor(game, s)).second);
  }
  return t;
}

struct TrainResult {
  std::vector<TrainRecord> records;
  MlpLogitModel policy;
  MlpLogitModel critic;
};

// Actor-critic self-play: `critic_updates_per_policy_update` critic steps
// per policy step, all-actions policy updates over sampled visitation,
// last-iterate evaluation, and optional reward negation between phases
// (parameters are never reset at a phase switch).
inline TrainResult Train(const GameTree& game, const TrainConfig& cfg) {
  int max_actions = std::max(game.MaxActions(0), game.MaxActions(1));
  TrainResult res{
      {},
      MlpLogitModel(game.FeatureDim(), cfg.hidden, max_actions),
      MlpLogitModel(game.FeatureDim(), cfg.hidden, max_actions)};
  Rng rng(cfg.seed);
  res.policy.net.Init(rng);
  res.critic.net.Init(rng);

  RewardSchedule schedule =
      cfg.switch_every > 0
          ? NegationSchedule(cfg.switch_every, cfg.policy_updates)
          : RewardSchedule();

  // Per-update lazy cache of the acting policy; the policy network only
  // changes once per outer iteration, so each visited state needs a single
  // forward pass per update.
  std::vector<Policy> cached(game.NumInfoStates());
  std::vector<long> cache_stamp(game.NumInfoStates(), -1);
  long stamp = 0;
  PolicyFn act = [&](const StateQuery& q) -> Policy {
    if (cache_stamp[q.info_state] != stamp) {
      cached[q.info_state] = PolicyForward(res.policy, q).second;
      cache_stamp[q.info_state] = stamp;
    }
    return cached[q.info_state];
  };

  std::vector<double> visits(game.NumInfoStates(), 0.0);
  std::vector<StateSample> batch;
  for (long t = 1; t <= cfg.policy_updates; ++t) {
    stamp = t;
    int phase = schedule.PhaseIndex(t - 1);
    double scale = schedule.phase_values[phase];

    for (int k = 0; k < cfg.critic_updates_per_policy_update; ++k) {
      TrajectoryBatch critic_batch =
          SampleTrajectories(game, act, cfg.critic_batch, rng);
      UpdateCritic(res.critic, game, critic_batch, cfg.gamma, cfg.critic_lr,
                   scale);
    }

    // Aggregate the sampled visitation per distinct state so that one
    // clipped contribution per (s, a) carries the state's empirical visit
    // frequency, matching the applied batch-mean step.
    TrajectoryBatch policy_batch =
        SampleTrajectories(game, act, cfg.policy_batch, rng);
    std::fill(visits.begin(), visits.end(), 0.0);
    for (const Episode& ep : policy_batch) {
      for (const Step& st : ep.steps) visits[st.info_state] += 1.0;
    }
    batch.clear();
    for (int s = 0; s < game.NumInfoStates(); ++s) {
      if (visits[s] == 0) continue;
      StateQuery q = QueryFor(game, s);
      Policy pi = act(q);
      auto critic_act = res.critic.Evaluate(q);
      std::vector<double> q_hat(critic_act.act.logits.begin(),
                                critic_act.act.logits.begin() + q.num_actions);
      q_hat = EntropyRegularizedQ(q_hat, pi, cfg.tau);
      double v_hat = Dot(pi, q_hat);
      batch.push_back({q, std::move(q_hat), v_hat,
                       visits[s] / static_cast<double>(cfg.policy_batch)});
    }
    if (cfg.algo == Algo::kNeurd) {
      NeurdParamUpdate(res.policy, batch, cfg.policy_lr, cfg.beta);
    } else {
      SpgParamUpdate(res.policy, batch, cfg.policy_lr);
    }

    if (t % cfg.eval_every == 0 || t == cfg.policy_updates) {
      PolicyTable current = ExtractPolicy(game, res.policy);
      res.records.push_back(
          {t, phase, eval::NashConv(game, current, scale).nashconv});
    }
  }
  return res;
}

}  // namespace neurd::neural

#endif  // NEURD_NEURAL_HPP_
