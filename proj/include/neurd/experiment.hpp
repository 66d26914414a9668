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

#ifndef NEURD_EXPERIMENT_HPP_
#define NEURD_EXPERIMENT_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "neurd/cfr.hpp"
#include "neurd/dynamics.hpp"
#include "neurd/eval.hpp"
#include "neurd/games.hpp"
#include "neurd/learners.hpp"
#include "neurd/neural.hpp"
#include "neurd/schedule.hpp"
#include "neurd/stats.hpp"

namespace neurd::experiment {

// ---------------------------------------------------------------------
// Flat key=value configuration with CLI-flag overrides.
// ---------------------------------------------------------------------
struct Config {
  std::map<std::string, std::string> kv;

  bool Has(const std::string& key) const { return kv.count(key) > 0; }

  void Set(const std::string& key, const std::string& value) {
    kv[key] = value;
  }

  // Applies a "key=value" override string.
  void Override(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("override must be key=value: " + assignment);
    }
    Set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }

  std::string GetString(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
  }

  std::string Require(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::invalid_argument("missing config key: " + key);
    }
    return it->second;
  }

  double GetDouble(const std::string& key, double def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stod(it->second);
  }

  long GetLong(const std::string& key, long def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stol(it->second);
  }

  bool GetBool(const std::string& key, bool def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("bad boolean for " + key + ": " + it->second);
  }

  std::vector<std::string> GetList(const std::string& key,
                                   const std::string& def) const {
    std::string raw = GetString(key, def);
    std::vector<std::string> out;
    std::istringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static Config FromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    Config c;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      auto end = line.find_last_not_of(" \t\r");
      c.Override(line.substr(start, end - start + 1));
    }
    return c;
  }
};

// The named presets. Each resolves to a full config; flags may override.
inline Config Preset(const std::string& name) {
  Config c;
  c.Set("experiment", name);
  if (name == "pennies") {
    c.Set("type", "pennies");
    c.Set("learner", "hedge,spg");
    c.Set("eta", "10,sweep");
    c.Set("rounds", "100");
    c.Set("forfeit", "true");
  } else if (name == "rps-dynamics") {
    c.Set("type", "dynamics");
    c.Set("game", "rps:0");
    c.Set("field", "rd,qpg");
    c.Set("dt", "0.1");
    c.Set("steps", "2000");
    c.Set("trajectories", "3");
    c.Set("record_every", "20");
  } else if (name == "biased-rps-average") {
    c.Set("type", "dynamics");
    c.Set("game", "rps:3");
    c.Set("field", "rd,qpg");
    c.Set("dt", "0.1");
    c.Set("steps", "10000");
    c.Set("trajectories", "20");
    c.Set("record_every", "100");
  } else if (name == "nonstationary-rps") {
    c.Set("type", "cfr");
    c.Set("game", "rps:20");
    c.Set("learner", "neurd");
    c.Set("eta", "0.1");
    c.Set("iters", "3000");
    c.Set("eval_every", "10");
    c.Set("schedule", "nus:20,0,20:1000");
  } else if (name == "cfr-kuhn") {
    c.Set("type", "cfr");
    c.Set("game", "kuhn");
    c.Set("learner", "neurd,hedge,spg");
    c.Set("eta", "1");
    c.Set("iters", "1000");
    c.Set("eval_every", "10");
  } else if (name == "cfr-leduc") {
    c.Set("type", "cfr");
    c.Set("game", "leduc");
    c.Set("learner", "neurd,spg");
    c.Set("eta", "2");
    c.Set("iters", "1000");
    c.Set("eval_every", "20");
  } else if (name == "train-kuhn") {
    c.Set("type", "train");
    c.Set("game", "kuhn");
    c.Set("algo", "neurd,spg");
    c.Set("tau", "0.1");
    c.Set("seeds", "1,2,3");
    c.Set("policy_updates", "5000");
    c.Set("eval_every", "250");
  } else if (name == "train-leduc") {
    c.Set("type", "train");
    c.Set("game", "leduc");
    c.Set("algo", "neurd");
    c.Set("tau", "0.1");
    c.Set("seeds", "1,2");
    c.Set("policy_updates", "1000");
    c.Set("eval_every", "100");
  } else if (name == "train-goofspiel") {
    c.Set("type", "train");
    c.Set("game", "goofspiel5");
    c.Set("algo", "neurd");
    c.Set("tau", "0.1");
    c.Set("seeds", "1,2");
    c.Set("policy_updates", "1000");
    c.Set("eval_every", "100");
  } else {
    throw std::invalid_argument(
        "unknown preset: " + name +
        " (valid: pennies, rps-dynamics, biased-rps-average, "
        "nonstationary-rps, cfr-kuhn, cfr-leduc, train-kuhn, train-leduc, "
        "train-goofspiel)");
  }
  return c;
}

// ---------------------------------------------------------------------
// Jobs and CSV assembly. Jobs compute rows in memory; the coordinator
// writes every file after all jobs finish, so output is all-or-nothing
// and independent of the worker count.
// ---------------------------------------------------------------------
struct JobOutput {
  std::string filename;
  std::string header;
  std::vector<std::string> rows;
  std::string summary_label;
  std::string summary_metric;
  std::vector<double> summary_samples;
};

using Job = std::function<JobOutput()>;

inline std::vector<JobOutput> RunJobs(const std::vector<Job>& jobs,
                                      int workers) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  std::vector<JobOutput> outputs(jobs.size());
  if (workers == 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) outputs[i] = jobs[i]();
    return outputs;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        outputs[i] = jobs[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(workers, static_cast<int>(jobs.size()));
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

namespace internal {

inline std::string Fmt(double x) { return stats::FormatNumber(x); }

inline void AppendField(std::string& row, const std::string& field) {
  if (!row.empty()) row += ',';
  row += field;
}

// Builds a CSV row from pre-rendered fields.
inline std::string Row(const std::vector<std::string>& fields) {
  std::string row;
  for (const std::string& f : fields) AppendField(row, f);
  return row;
}

}  // namespace internal

// ---------------------------------------------------------------------
// Experiment job builders
// ---------------------------------------------------------------------

inline std::vector<Job> PenniesJobs(const Config& cfg) {
  std::vector<std::string> learners = cfg.GetList("learner", "hedge");
  std::vector<std::string> etas = cfg.GetList("eta", "10");
  if (etas.size() == 1) etas.assign(learners.size(), etas[0]);
  if (etas.size() != learners.size()) {
    throw std::invalid_argument("pennies: eta list must match learner list");
  }
  int rounds = static_cast<int>(cfg.GetLong("rounds", 100));
  bool forfeit = cfg.GetBool("forfeit", true);

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < learners.size(); ++i) {
    std::string learner = learners[i];
    std::string eta_spec = etas[i];
    jobs.push_back([learner, eta_spec, rounds, forfeit]() {
      learners::Kind kind = learners::KindFromString(learner);
      double eta = eta_spec == "sweep"
                       ? learners::SweepStepSize(kind, rounds,
                                                 learners::DefaultEtaGrid(),
                                                 forfeit)
                       : std::stod(eta_spec);
      learners::RepeatedGameResult res = learners::RunRepeatedGame(
          kind, rounds, learners::ConstantEta(eta), forfeit);
      JobOutput out;
      out.filename = "pennies_" + learner + ".csv";
      out.header = "round,action,logit,prob,regret,learner,eta,forfeit";
      for (std::size_t k = 0; k < res.round_trace.size(); ++k) {
        for (std::size_t a = 0; a < res.policy_trace[k].size(); ++a) {
          out.rows.push_back(internal::Row(
              {std::to_string(res.round_trace[k]), std::to_string(a),
               internal::Fmt(res.logit_trace[k][a]),
               internal::Fmt(res.policy_trace[k][a]),
               internal::Fmt(res.action_regret_trace[k][a]), learner,
               internal::Fmt(eta), forfeit ? "1" : "0"}));
        }
      }
      out.summary_label = learner;
      out.summary_metric = "final_max_regret";
      out.summary_samples = {res.regret_trace.back()};
      return out;
    });
  }
  return jobs;
}

inline std::vector<Job> DynamicsJobs(const Config& cfg,
                                     std::uint64_t base_seed) {
  std::string game_name = cfg.GetString("game", "rps:3");
  if (game_name.rfind("rps:", 0) != 0) {
    throw std::invalid_argument("dynamics: game must be rps:<nu>");
  }
  double nu = std::stod(game_name.substr(4));
  double dt = cfg.GetDouble("dt", 0.1);
  int steps = static_cast<int>(cfg.GetLong("steps", 10000));
  int trajectories = static_cast<int>(cfg.GetLong("trajectories", 20));
  int record_every = static_cast<int>(cfg.GetLong("record_every", 100));
  std::vector<std::string> fields = cfg.GetList("field", "rd,qpg");

  std::vector<Job> jobs;
  for (const std::string& field_name : fields) {
    jobs.push_back([field_name, nu, dt, steps, trajectories, record_every,
                    base_seed]() {
      if (field_name != "rd" && field_name != "qpg") {
        throw std::invalid_argument("dynamics: field must be rd or qpg");
      }
      MatrixGame game = RpsGame(nu);
      JobOutput out;
      out.filename = "dynamics_" + field_name + ".csv";
      out.header =
          "trajectory_id,step,time,player,action,prob,avg_prob,nashconv_avg";
      out.summary_label = field_name;
      out.summary_metric = "final_nashconv_avg";
      for (int traj = 0; traj < trajectories; ++traj) {
        Rng rng(DeriveSeed(base_seed, static_cast<std::uint64_t>(traj)));
        dynamics::JointPolicy start{SampleSimplex(3, rng),
                                    SampleSimplex(3, rng)};
        // RD is stepped in logit coordinates (the discretization the
        // time-average convergence claim relies on); QPG has no such
        // coordinate change and uses the policy-space Euler step.
        dynamics::Trajectory t =
            field_name == "rd"
                ? dynamics::LogitEulerIntegrate(game, start, dt, steps)
                : dynamics::EulerIntegrate(dynamics::QpgField(game), start,
                                           dt, steps);
        std::vector<dynamics::JointPolicy> avg = dynamics::TimeAverage(t);
        for (std::size_t k = 0; k < t.points.size(); ++k) {
          bool last = k + 1 == t.points.size();
          if (!(k % record_every == 0 || last)) continue;
          double nc = eval::NashConv(game, avg[k][0], avg[k][1]).nashconv;
          for (int p = 0; p < 2; ++p) {
            for (int a = 0; a < 3; ++a) {
              out.rows.push_back(internal::Row(
                  {std::to_string(traj), std::to_string(k),
                   internal::Fmt(static_cast<double>(k) * dt),
                   std::to_string(p), std::to_string(a),
                   internal::Fmt(t.points[k][p][a]),
                   internal::Fmt(avg[k][p][a]), internal::Fmt(nc)}));
            }
          }
          if (last) out.summary_samples.push_back(nc);
        }
      }
      return out;
    });
  }
  return jobs;
}

// Phase schedule for CFR runs: `none`, `negate:<K>` (flip utility sign every
// K iterations), or `nus:<v1,v2,...>:<K>` (RPS payoff parameter phases).
struct CfrSchedule {
  RewardSchedule reward;      // scale phases (negate) or nu phases
  bool nu_phases = false;
};

inline CfrSchedule ParseCfrSchedule(const std::string& spec, long iters) {
  CfrSchedule s;
  if (spec == "none" || spec.empty()) return s;
  if (spec.rfind("negate:", 0) == 0) {
    s.reward = NegationSchedule(std::stol(spec.substr(7)), iters);
    return s;
  }
  if (spec.rfind("nus:", 0) == 0) {
    auto second = spec.find(':', 4);
    if (second == std::string::npos) {
      throw std::invalid_argument("schedule nus:<v,...>:<K> expected");
    }
    std::vector<double> nus;
    std::istringstream ss(spec.substr(4, second - 4));
    std::string item;
    while (std::getline(ss, item, ',')) nus.push_back(std::stod(item));
    s.reward = RpsNuSchedule(std::stol(spec.substr(second + 1)), nus);
    s.nu_phases = true;
    return s;
  }
  throw std::invalid_argument("unknown schedule: " + spec);
}

inline std::vector<Job> CfrJobs(const Config& cfg) {
  std::string game_name = cfg.GetString("game", "kuhn");
  std::vector<std::string> learner_names = cfg.GetList("learner", "neurd");
  long iters = cfg.GetLong("iters", 1000);
  long eval_every = cfg.GetLong("eval_every", 10);
  std::string eta_spec = cfg.GetString("eta", "1");
  std::string eta_schedule = cfg.GetString("eta_schedule", "constant");
  std::string schedule_spec = cfg.GetString("schedule", "none");

  std::vector<Job> jobs;
  for (const std::string& learner_name : learner_names) {
    jobs.push_back([game_name, learner_name, iters, eval_every, eta_spec,
                    eta_schedule, schedule_spec]() {
      CfrSchedule sched = ParseCfrSchedule(schedule_spec, iters);
      // With nu phases the tree's terminal payoffs change per phase; the
      // info-state layout is identical, so CFR state carries across.
      std::vector<GameTree> phase_games;
      if (sched.nu_phases) {
        if (game_name.rfind("rps:", 0) != 0) {
          throw std::invalid_argument("nus schedule requires an rps game");
        }
        for (double nu : sched.reward.phase_values) {
          phase_games.push_back(games::RpsTree(nu));
        }
      } else {
        phase_games.push_back(games::TreeGameByName(game_name));
      }
      const GameTree& base = phase_games[0];

      learners::Kind kind = learners::KindFromString(learner_name);
      cfr::EtaSchedule eta =
          eta_schedule == "horizon"
              ? cfr::HorizonEta(base, iters)
              : cfr::ConstantEta(std::stod(eta_spec));
      cfr::CfrState state = cfr::CfrState::Init(base);

      JobOutput out;
      out.filename = "cfr_" + game_name + "_" + learner_name + ".csv";
      out.header =
          "iter,phase,learner,eta,nashconv,regret_p0,regret_p1,bound_p0,"
          "bound_p1";
      out.summary_label = learner_name;
      out.summary_metric = "final_nashconv";
      for (long t = 1; t <= iters; ++t) {
        int phase = sched.reward.PhaseIndex(t - 1);
        const GameTree& game =
            sched.nu_phases ? phase_games[phase] : phase_games[0];
        double scale =
            sched.nu_phases ? 1.0 : sched.reward.phase_values[phase];
        cfr::CfrIteration(game, state, kind, eta, scale);
        if (t % eval_every == 0 || t == iters) {
          PolicyTable avg = cfr::AveragePolicy(game, state);
          double nc = eval::NashConv(game, avg, scale).nashconv;
          out.rows.push_back(internal::Row(
              {std::to_string(t), std::to_string(phase), learner_name,
               internal::Fmt(eta(0, t)), internal::Fmt(nc),
               internal::Fmt(cfr::MeasuredRegret(game, state, 0)),
               internal::Fmt(cfr::MeasuredRegret(game, state, 1)),
               internal::Fmt(cfr::RegretBound(game, 0, t)),
               internal::Fmt(cfr::RegretBound(game, 1, t))}));
          if (t == iters) out.summary_samples.push_back(nc);
        }
      }
      return out;
    });
  }
  return jobs;
}

inline std::vector<Job> TrainJobs(const Config& cfg, std::uint64_t seed_override,
                                  bool has_seed_override) {
  std::string game_name = cfg.GetString("game", "kuhn");
  std::vector<std::string> algos = cfg.GetList("algo", "neurd");
  std::vector<std::string> seeds = cfg.GetList("seeds", "1");
  if (has_seed_override) seeds = {std::to_string(seed_override)};
  double tau = cfg.GetDouble("tau", 0.0);

  neural::TrainConfig base;
  base.tau = tau;
  base.beta = cfg.GetDouble("beta", base.beta);
  base.policy_lr = cfg.GetDouble("policy_lr", base.policy_lr);
  base.critic_lr = cfg.GetDouble("critic_lr", base.critic_lr);
  base.hidden = static_cast<int>(cfg.GetLong("hidden", base.hidden));
  base.policy_batch =
      static_cast<int>(cfg.GetLong("policy_batch", base.policy_batch));
  base.critic_batch =
      static_cast<int>(cfg.GetLong("critic_batch", base.critic_batch));
  base.policy_updates = cfg.GetLong("policy_updates", base.policy_updates);
  base.eval_every = cfg.GetLong("eval_every", base.eval_every);
  base.switch_every = cfg.GetLong("switch_every", 0);

  std::vector<Job> jobs;
  for (const std::string& algo_name : algos) {
    for (const std::string& seed_str : seeds) {
      jobs.push_back([game_name, algo_name, seed_str, base, tau]() {
        neural::TrainConfig cfg2 = base;
        cfg2.algo = neural::AlgoFromString(algo_name);
        cfg2.seed = std::stoull(seed_str);
        GameTree game = games::TreeGameByName(game_name);
        neural::TrainResult res = neural::Train(game, cfg2);
        JobOutput out;
        out.filename =
            "train_" + game_name + "_" + algo_name + "_seed" + seed_str +
            ".csv";
        out.header = "seed,update,phase,tau,nashconv";
        for (const auto& r : res.records) {
          out.rows.push_back(internal::Row(
              {seed_str, std::to_string(r.update), std::to_string(r.phase),
               internal::Fmt(tau), internal::Fmt(r.nashconv)}));
        }
        out.summary_label = algo_name + "_seed" + seed_str;
        out.summary_metric = "final_nashconv";
        out.summary_samples = {res.records.back().nashconv};
        return out;
      });
    }
  }
  return jobs;
}

// ---------------------------------------------------------------------
// Coordinator
// ---------------------------------------------------------------------

// Runs the configured experiment and writes per-job CSVs plus a summary CSV
// into `out_dir`. Returns the written file paths. On any failure no partial
// files are left behind.
inline std::vector<std::string> RunExperiment(const Config& cfg,
                                              const std::string& out_dir,
                                              std::uint64_t seed,
                                              bool has_seed, int workers) {
  std::string type = cfg.GetString("type", cfg.GetString("experiment", ""));
  std::string name = cfg.GetString("experiment", type);

  std::vector<Job> jobs;
  if (type == "pennies") {
    jobs = PenniesJobs(cfg);
  } else if (type == "dynamics") {
    jobs = DynamicsJobs(cfg, has_seed ? seed : 1);
  } else if (type == "cfr") {
    jobs = CfrJobs(cfg);
  } else if (type == "train") {
    jobs = TrainJobs(cfg, seed, has_seed);
  } else {
    throw std::invalid_argument(
        "unknown experiment type: " + type +
        " (valid: pennies, dynamics, cfr, train)");
  }

  std::vector<JobOutput> outputs = RunJobs(jobs, workers);

  // Summary: one row per job, mean and percentile-bootstrap 95% CI of the
  // job's final metric samples.
  JobOutput summary;
  summary.filename = name + "_summary.csv";
  summary.header = "experiment,job,metric,n,mean,ci_low,ci_high";
  for (const JobOutput& o : outputs) {
    double mean = stats::Mean(o.summary_samples);
    double lo = mean, hi = mean;
    if (o.summary_samples.size() >= 2) {
      std::tie(lo, hi) = stats::BootstrapCi(o.summary_samples);
    }
    summary.rows.push_back(internal::Row(
        {name, o.summary_label, o.summary_metric,
         std::to_string(o.summary_samples.size()), internal::Fmt(mean),
         internal::Fmt(lo), internal::Fmt(hi)}));
  }
  outputs.push_back(std::move(summary));

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  try {
    for (const JobOutput& o : outputs) {
      fs::path path = fs::path(out_dir) / o.filename;
      std::ofstream f(path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      f << o.header << "\n";
      for (const std::string& row : o.rows) f << row << "\n";
      f.flush();
      if (!f) throw std::runtime_error("write failed: " + path.string());
      written.push_back(path.string());
    }
  } catch (...) {
    for (const std::string& p : written) fs::remove(p);
    throw;
  }
  return written;
}

}  // namespace neurd::experiment

#endif  // NEURD_EXPERIMENT_HPP_
