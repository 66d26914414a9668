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

// Acceptance gate: ten numbered criteria, one PASS/FAIL line each, with
// tolerances pinned in code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "neurd/cfr.hpp"
#include "neurd/dynamics.hpp"
#include "neurd/eval.hpp"
#include "neurd/experiment.hpp"
#include "neurd/games.hpp"
#include "neurd/learners.hpp"
#include "neurd/neural.hpp"
#include "neurd/stats.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void Report(int criterion, bool pass, double seconds,
            const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("CRITERION %2d: %s (%.1fs) %s\n", criterion,
              pass ? "PASS" : "FAIL", seconds, detail.c_str());
  std::fflush(stdout);
}

struct Timer {
  Clock::time_point start = Clock::now();
  double Seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::string Fmt(double x) { return neurd::stats::FormatNumber(x); }

// ---------------------------------------------------------------------
// 1. Game fixtures: info-state counts 12 / 936 / 2124.
// ---------------------------------------------------------------------
void Criterion1() {
  Timer t;
  int kuhn = neurd::games::KuhnGame().NumInfoStates();
  int leduc = neurd::games::LeducGame().NumInfoStates();
  int goof = neurd::games::Goofspiel5Game().NumInfoStates();
  bool pass = kuhn == 12 && leduc == 936 && goof == 2124;
  Report(1, pass, t.Seconds(),
         "info-state counts kuhn=" + std::to_string(kuhn) +
             " leduc=" + std::to_string(leduc) +
             " goofspiel5=" + std::to_string(goof) + " (want 12/936/2124)");
}

// ---------------------------------------------------------------------
// 2. Equivalence: Hedge, tabular NeuRD, and discrete-time RD produce
//    identical per-round policies over 1000 random-utility rounds (<=1e-9).
// ---------------------------------------------------------------------
void Criterion2() {
  Timer t;
  neurd::Rng rng(2024);
  neurd::Logits yh(3, 0.0), yn(3, 0.0), yr(3, 0.0);
  const double eta = 0.5;
  double max_diff = 0;
  for (int round = 0; round < 1000; ++round) {
    std::vector<double> u(3);
    for (double& v : u) v = neurd::UniformIn(rng, -1, 1);
    neurd::Policy ph = neurd::Softmax(yh);
    neurd::Policy pn = neurd::Softmax(yn);
    neurd::Policy pr = neurd::Softmax(yr);
    for (int a = 0; a < 3; ++a) {
      max_diff = std::max(max_diff, std::abs(ph[a] - pn[a]));
      max_diff = std::max(max_diff, std::abs(ph[a] - pr[a]));
    }
    yh = neurd::learners::HedgeUpdate(yh, u, eta);
    yn = neurd::learners::NeurdTabularUpdate(yn, u, ph, eta);
    std::vector<double> q = u;
    for (double& v : q) v *= eta;
    yr = neurd::learners::StandardDiscreteRdUpdate(yr, q);
  }
  Report(2, max_diff <= 1e-9, t.Seconds(),
         "hedge/neurd/rd policy max-diff over 1000 rounds = " + Fmt(max_diff) +
             " (tol 1e-9)");
}

// ---------------------------------------------------------------------
// 3. Matching pennies. Hedge eta=10, T=100, forfeit: final regret <= 1.
//    SPG with per-T tuned eta: forfeit ratio r(800)/r(100) >= 4; without
//    forfeit the ratio <= 4.
// ---------------------------------------------------------------------
void Criterion3() {
  Timer t;
  namespace nl = neurd::learners;
  double hedge = nl::FinalRegret(nl::Kind::kHedge, 100, 10.0, true);
  double hedge800 = nl::FinalRegret(nl::Kind::kHedge, 800, 10.0, true);
  bool hedge_ok = hedge <= 1.0;

  auto tuned = [](int rounds, bool forfeit) {
    double eta = nl::SweepStepSize(nl::Kind::kSpg, rounds,
                                   nl::DefaultEtaGrid(), forfeit);
    return nl::FinalRegret(nl::Kind::kSpg, rounds, eta, forfeit);
  };
  double rf = tuned(800, true) / tuned(100, true);
  double rn = tuned(800, false) / tuned(100, false);
  bool spg_ok = rf >= 4.0 && rn <= 4.0;

  std::string detail =
      "hedge final regret = " + Fmt(hedge) + " (threshold 1; also r(T=800)=" +
      Fmt(hedge800) +
      ", constant in T); spg tuned-eta ratios forfeit=" + Fmt(rf) +
      " (>=4) no-forfeit=" + Fmt(rn) + " (<=4)";
  if (!hedge_ok) {
    detail +=
        ". NOTE: with zero-logit initialization the measured value is exactly "
        "7/3 for every large eta and is the minimum over the whole eta grid: "
        "4/3 comes from the single uniform-policy opening round and 1 from "
        "re-adapting to the scripted mid-run switch, so the <=1 threshold is "
        "unattainable under the pinned conventions; the constant-in-T "
        "property it targets does hold (see regret(800) above)";
  }
  Report(3, hedge_ok && spg_ok, t.Seconds(), detail);
}

// ---------------------------------------------------------------------
// 4. CFR(NeuRD) == CFR(Hedge) on Kuhn, 200 iterations, <=1e-9.
// ---------------------------------------------------------------------
void Criterion4() {
  Timer t;
  neurd::GameTree kuhn = neurd::games::KuhnGame();
  neurd::cfr::CfrState sn = neurd::cfr::CfrState::Init(kuhn);
  neurd::cfr::CfrState sh = neurd::cfr::CfrState::Init(kuhn);
  neurd::cfr::EtaSchedule eta = neurd::cfr::ConstantEta(1.0);
  double max_diff = 0;
  for (int it = 0; it < 200; ++it) {
    neurd::cfr::CfrIteration(kuhn, sn, neurd::learners::Kind::kNeurd, eta);
    neurd::cfr::CfrIteration(kuhn, sh, neurd::learners::Kind::kHedge, eta);
    for (int s = 0; s < kuhn.NumInfoStates(); ++s) {
      for (std::size_t a = 0; a < sn.entries[s].policy.size(); ++a) {
        max_diff = std::max(
            max_diff,
            std::abs(sn.entries[s].policy[a] - sh.entries[s].policy[a]));
      }
    }
  }
  Report(4, max_diff <= 1e-9, t.Seconds(),
         "per-iteration policy max-diff over 200 iters = " + Fmt(max_diff) +
             " (tol 1e-9)");
}

// ---------------------------------------------------------------------
// 5. CFR(NeuRD) convergence. Kuhn eta=1, 1000 iters: NashConv < 0.05 and
//    first-mover average-policy root value within 0.005 of -1/18. Leduc,
//    best eta from the pinned grid, 1000 iters: NashConv < 0.5 and below
//    CFR(SPG) at its own best eta.
// ---------------------------------------------------------------------
double CfrFinalNashConv(const neurd::GameTree& game, neurd::learners::Kind kind,
                        double eta, int iters,
                        neurd::eval::EvalReport* report = nullptr) {
  neurd::cfr::CfrState state = neurd::cfr::CfrState::Init(game);
  neurd::cfr::EtaSchedule sched = neurd::cfr::ConstantEta(eta);
  for (int it = 0; it < iters; ++it) {
    neurd::cfr::CfrIteration(game, state, kind, sched);
  }
  neurd::eval::EvalReport rep =
      neurd::eval::NashConv(game, neurd::cfr::AveragePolicy(game, state));
  if (report != nullptr) *report = rep;
  return rep.nashconv;
}

void Criterion5() {
  Timer t;
  neurd::GameTree kuhn = neurd::games::KuhnGame();
  neurd::eval::EvalReport kuhn_rep;
  double kuhn_nc = CfrFinalNashConv(kuhn, neurd::learners::Kind::kNeurd, 1.0,
                                    1000, &kuhn_rep);
  double value_err = std::abs(kuhn_rep.expected_value[0] - (-1.0 / 18));
  bool kuhn_ok = kuhn_nc < 0.05 && value_err <= 0.005;

  const std::vector<double> grid = {0.5, 0.9, 1, 1.5, 2, 2.5, 3, 3.5, 4};
  neurd::GameTree leduc = neurd::games::LeducGame();
  auto best = [&](neurd::learners::Kind kind) {
    double best_nc = std::numeric_limits<double>::infinity();
    for (double eta : grid) {
      best_nc = std::min(best_nc, CfrFinalNashConv(leduc, kind, eta, 1000));
    }
    return best_nc;
  };
  double leduc_neurd = best(neurd::learners::Kind::kNeurd);
  double leduc_spg = best(neurd::learners::Kind::kSpg);
  bool leduc_ok = leduc_neurd < 0.5 && leduc_neurd < leduc_spg;

  Report(5, kuhn_ok && leduc_ok, t.Seconds(),
         "kuhn nashconv=" + Fmt(kuhn_nc) + " (<0.05), first-mover value=" +
             Fmt(kuhn_rep.expected_value[0]) + " (within 0.005 of " +
             Fmt(-1.0 / 18) + "); leduc best-eta nashconv neurd=" +
             Fmt(leduc_neurd) + " (<0.5) spg=" + Fmt(leduc_spg) +
             " (neurd < spg)");
}

// ---------------------------------------------------------------------
// 6. Regret bound: horizon-tuned rates keep measured counterfactual regret
//    under |S_i| * Delta_u * sqrt(2 ln|A| T) for every T <= 1000 on Kuhn.
// ---------------------------------------------------------------------
void Criterion6() {
  Timer t;
  neurd::GameTree kuhn = neurd::games::KuhnGame();
  int violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int horizon = 1; horizon <= 1000; ++horizon) {
    neurd::cfr::CfrState state = neurd::cfr::CfrState::Init(kuhn);
    neurd::cfr::EtaSchedule eta = neurd::cfr::HorizonEta(kuhn, horizon);
    for (int it = 0; it < horizon; ++it) {
      neurd::cfr::CfrIteration(kuhn, state, neurd::learners::Kind::kNeurd,
                               eta);
    }
    for (int player = 0; player < 2; ++player) {
      double measured = neurd::cfr::MeasuredRegret(kuhn, state, player);
      double bound = neurd::cfr::RegretBound(kuhn, player, horizon);
      worst_margin = std::min(worst_margin, bound - measured);
      if (measured > bound) ++violations;
    }
  }
  Report(6, violations == 0, t.Seconds(),
         "bound violations over T=1..1000: " + std::to_string(violations) +
             ", smallest bound-measured margin = " + Fmt(worst_margin));
}

// ---------------------------------------------------------------------
// 7. Dynamics at dt=0.1 on biased RPS nu=3, 20 random starts, 1e4 steps:
//    RD time-average NashConv < 0.05 at the final step for every start;
//    QPG's mean time-average NashConv exceeds twice RD's.
// ---------------------------------------------------------------------
void Criterion7() {
  Timer t;
  neurd::MatrixGame game = neurd::RpsGame(3);
  const double dt = 0.1;
  const int steps = 10000;
  double rd_max = 0, rd_sum = 0, qpg_sum = 0;
  for (int traj = 0; traj < 20; ++traj) {
    neurd::Rng rng(neurd::DeriveSeed(1, static_cast<std::uint64_t>(traj)));
    neurd::dynamics::JointPolicy start{neurd::SampleSimplex(3, rng),
                                       neurd::SampleSimplex(3, rng)};
    auto final_nc = [&](const neurd::dynamics::Trajectory& tr) {
      std::vector<neurd::dynamics::JointPolicy> avg =
          neurd::dynamics::TimeAverage(tr);
      return neurd::eval::NashConv(game, avg.back()[0], avg.back()[1])
          .nashconv;
    };
    double rd = final_nc(
        neurd::dynamics::LogitEulerIntegrate(game, start, dt, steps));
    double qpg = final_nc(neurd::dynamics::EulerIntegrate(
        neurd::dynamics::QpgField(game), start, dt, steps));
    rd_max = std::max(rd_max, rd);
    rd_sum += rd;
    qpg_sum += qpg;
  }
  double rd_mean = rd_sum / 20, qpg_mean = qpg_sum / 20;
  bool pass = rd_max < 0.05 && qpg_mean > 2 * rd_mean;
  Report(7, pass, t.Seconds(),
         "rd time-avg nashconv max=" + Fmt(rd_max) + " (<0.05) mean=" +
             Fmt(rd_mean) + "; qpg mean=" + Fmt(qpg_mean) + " (>2x rd)");
}

// ---------------------------------------------------------------------
// 8. Gradient/identity suite.
// ---------------------------------------------------------------------
void Criterion8() {
  Timer t;
  neurd::GameTree kuhn = neurd::games::KuhnGame();
  neurd::Rng rng(808);

  // (a) MLP logit and critic squared-error gradients vs central
  // differences, 100 random draws, relative tolerance 1e-5.
  double grad_worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    neurd::Mlp net(kuhn.FeatureDim(), 6, 2);
    net.Init(rng);
    const std::vector<double>& x =
        kuhn.info_state_features[rng() % kuhn.NumInfoStates()];
    int action = static_cast<int>(rng() % 2);
    double target = neurd::UniformIn(rng, -2, 2);

    neurd::MlpActivation act = neurd::MlpForward(net, x);
    double err = act.logits[action] - target;
    neurd::MlpGrad glogit(net), gcritic(net);
    neurd::MlpAddLogitGradient(net, act, action, 1.0, glogit);
    neurd::MlpAddLogitGradient(net, act, action, err, gcritic);

    const double h = 1e-6;
    auto fd_pair = [&](std::vector<double>& param, std::size_t i) {
      double orig = param[i];
      param[i] = orig + h;
      double yp = neurd::MlpForward(net, x).logits[action];
      param[i] = orig - h;
      double ym = neurd::MlpForward(net, x).logits[action];
      param[i] = orig;
      double fd_logit = (yp - ym) / (2 * h);
      double fd_critic = (0.5 * (yp - target) * (yp - target) -
                          0.5 * (ym - target) * (ym - target)) /
                         (2 * h);
      return std::make_pair(fd_logit, fd_critic);
    };
    auto check = [&](std::vector<double>& param, const std::vector<double>& gl,
                     const std::vector<double>& gc) {
      for (std::size_t i = 0; i < param.size(); ++i) {
        auto [fl, fc] = fd_pair(param, i);
        grad_worst = std::max(
            grad_worst, std::abs(gl[i] - fl) / std::max(1.0, std::abs(fl)));
        grad_worst = std::max(
            grad_worst, std::abs(gc[i] - fc) / std::max(1.0, std::abs(fc)));
      }
    };
    check(net.w1, glogit.w1, gcritic.w1);
    check(net.b1, glogit.b1, gcritic.b1);
    check(net.w2, glogit.w2, gcritic.w2);
    check(net.b2, glogit.b2, gcritic.b2);
  }
  bool grads_ok = grad_worst <= 1e-5;

  // (b) Fisher matrix of the softmax policy equals its Jacobian (<=1e-12),
  // and applying it to the NeuRD direction reproduces the policy-gradient
  // direction exactly (the naturalized-update identity).
  double fisher_worst = 0, natural_worst = 0, kl_worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    neurd::Logits y(3);
    std::vector<double> q(3);
    for (double& v : y) v = neurd::UniformIn(rng, -2, 2);
    for (double& v : q) v = neurd::UniformIn(rng, -2, 2);
    neurd::Policy pi = neurd::Softmax(y);
    double v_mean = neurd::Dot(pi, q);
    for (int a = 0; a < 3; ++a) {
      double fx = 0;
      for (int b = 0; b < 3; ++b) {
        double fisher = pi[a] * ((a == b ? 1.0 : 0.0) - pi[b]);
        double jac = pi[b] * ((a == b ? 1.0 : 0.0) - pi[a]);
        fisher_worst = std::max(fisher_worst, std::abs(fisher - jac));
        fx += fisher * (q[b] - v_mean);
      }
      natural_worst =
          std::max(natural_worst, std::abs(fx - pi[a] * (q[a] - v_mean)));
    }

    // (c) KL/cross-entropy-target identity: with the fixed target
    // t(a) = pi(a)(1 + q(a) - v), descending the cross-entropy to t moves
    // the logits by exactly the policy-gradient step (<=1e-8 vs central
    // differences).
    std::vector<double> target(3);
    for (int a = 0; a < 3; ++a) target[a] = pi[a] * (1.0 + q[a] - v_mean);
    const double h = 1e-5;
    for (int a = 0; a < 3; ++a) {
      auto ce = [&](double shift) {
        neurd::Logits yy = y;
        yy[a] += shift;
        neurd::Policy pp = neurd::Softmax(yy);
        double loss = 0;
        for (int b = 0; b < 3; ++b) loss -= target[b] * std::log(pp[b]);
        return loss;
      };
      double fd = (ce(h) - ce(-h)) / (2 * h);
      kl_worst =
          std::max(kl_worst, std::abs(-fd - pi[a] * (q[a] - v_mean)));
    }
  }
  bool identities_ok =
      fisher_worst <= 1e-12 && natural_worst <= 1e-12 && kl_worst <= 1e-8;

  Report(8, grads_ok && identities_ok, t.Seconds(),
         "fd-gradient rel err=" + Fmt(grad_worst) +
             " (<=1e-5); fisher-vs-jacobian=" + Fmt(fisher_worst) +
             " naturalized=" + Fmt(natural_worst) +
             " (<=1e-12); kl-target-vs-pg=" + Fmt(kl_worst) + " (<=1e-8)");
}

// ---------------------------------------------------------------------
// 9. Neural desk scale. Kuhn, 5 seeds, 2e4 updates, best tau per algorithm
//    from {0, 0.05, 0.1}: median final NashConv of NeuRD < SPG. With a
//    reward negation at update 1e4 (12e3 updates total), NeuRD's NashConv
//    re-descends within the second phase and SPG ends the run above NeuRD.
// ---------------------------------------------------------------------
void Criterion9() {
  Timer t;
  neurd::GameTree kuhn = neurd::games::KuhnGame();
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  const std::vector<double> taus = {0.0, 0.05, 0.1};

  auto median_final = [&](neurd::neural::Algo algo, double tau, long updates,
                          long switch_every, long eval_every,
                          std::vector<std::vector<neurd::neural::TrainRecord>>*
                              records_out) {
    std::vector<double> finals;
    for (std::uint64_t seed : seeds) {
      neurd::neural::TrainConfig cfg;
      cfg.algo = algo;
      cfg.tau = tau;
      cfg.policy_updates = updates;
      cfg.switch_every = switch_every;
      cfg.eval_every = eval_every;
      cfg.seed = seed;
      neurd::neural::TrainResult res = neurd::neural::Train(kuhn, cfg);
      finals.push_back(res.records.back().nashconv);
      if (records_out != nullptr) records_out->push_back(res.records);
    }
    return neurd::stats::Median(finals);
  };

  auto best_tau_median = [&](neurd::neural::Algo algo) {
    double best = std::numeric_limits<double>::infinity();
    for (double tau : taus) {
      best = std::min(best,
                      median_final(algo, tau, 20000, 0, 500, nullptr));
    }
    return best;
  };
  double neurd_main = best_tau_median(neurd::neural::Algo::kNeurd);
  double spg_main = best_tau_median(neurd::neural::Algo::kSpg);
  bool main_ok = neurd_main < spg_main;

  // Negation phase: tau=0.1, switch at update 10000, run to 12000.
  auto median_at = [](const std::vector<std::vector<neurd::neural::TrainRecord>>&
                          per_seed,
                      long update) {
    std::vector<double> vals;
    for (const auto& records : per_seed) {
      for (const auto& r : records) {
        if (r.update == update) vals.push_back(r.nashconv);
      }
    }
    return neurd::stats::Median(vals);
  };
  std::vector<std::vector<neurd::neural::TrainRecord>> neurd_neg, spg_neg;
  double neurd_neg_final = median_final(neurd::neural::Algo::kNeurd, 0.1,
                                        12000, 10000, 100, &neurd_neg);
  double spg_neg_final = median_final(neurd::neural::Algo::kSpg, 0.1, 12000,
                                      10000, 100, &spg_neg);
  double neurd_spike = median_at(neurd_neg, 10100);
  bool neg_ok = neurd_neg_final < neurd_spike && spg_neg_final > neurd_neg_final;

  Report(9, main_ok && neg_ok, t.Seconds(),
         "median final nashconv: neurd=" + Fmt(neurd_main) + " spg=" +
             Fmt(spg_main) + " (neurd < spg); negation: neurd spike@10100=" +
             Fmt(neurd_spike) + " -> final=" + Fmt(neurd_neg_final) +
             " (re-descent), spg final=" + Fmt(spg_neg_final) +
             " (> neurd final)");
}

// ---------------------------------------------------------------------
// 10. Determinism: every preset rerun with the same seed writes
//     byte-identical CSVs.
// ---------------------------------------------------------------------
std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Criterion10() {
  Timer t;
  namespace fs = std::filesystem;
  const std::vector<std::string> presets = {
      "pennies",       "rps-dynamics", "biased-rps-average",
      "nonstationary-rps", "cfr-kuhn",     "cfr-leduc",
      "train-kuhn",    "train-leduc",  "train-goofspiel"};
  fs::path base = fs::temp_directory_path() / "neurd_acceptance10";
  fs::remove_all(base);
  std::vector<std::string> mismatched;
  for (const std::string& preset : presets) {
    neurd::experiment::Config cfg = neurd::experiment::Preset(preset);
    fs::path d1 = base / (preset + "_a"), d2 = base / (preset + "_b");
    std::vector<std::string> w1 =
        neurd::experiment::RunExperiment(cfg, d1.string(), 1, true, 1);
    std::vector<std::string> w2 =
        neurd::experiment::RunExperiment(cfg, d2.string(), 1, true, 1);
    bool same = w1.size() == w2.size();
    for (std::size_t i = 0; same && i < w1.size(); ++i) {
      same = ReadAll(w1[i]) == ReadAll(w2[i]);
    }
    if (!same) mismatched.push_back(preset);
  }
  fs::remove_all(base);
  std::string detail = "all 9 presets rerun byte-identically";
  if (!mismatched.empty()) {
    detail = "non-identical reruns:";
    for (const std::string& p : mismatched) detail += " " + p;
  }
  Report(10, mismatched.empty(), t.Seconds(), detail);
}

}  // namespace

int main() {
  Criterion1();
  Criterion2();
  Criterion3();
  Criterion4();
  Criterion5();
  Criterion6();
  Criterion7();
  Criterion8();
  Criterion9();
  Criterion10();
  std::printf("acceptance: %d of 10 criteria failed\n", g_failures);
  return g_failures;
}
