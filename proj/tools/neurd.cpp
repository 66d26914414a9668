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

// Experiment runner. Subcommands: pennies, dynamics, cfr, train, eval.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neurd/eval.hpp"
#include "neurd/experiment.hpp"
#include "neurd/games.hpp"

namespace {

using neurd::experiment::Config;

// Flag values staged as strings; only flags the user passed override the
// config (which in turn overrides the preset).
struct StagedFlags {
  std::map<std::string, std::string> values;

  void AddOption(CLI::App* cmd, const std::string& flag,
                 const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

int RunExperimentCommand(const std::string& type, const Config& base,
                         const StagedFlags& flags, const std::string& out_dir,
                         std::uint64_t seed, bool has_seed, int workers) {
  Config cfg = base;
  if (!cfg.Has("type")) cfg.Set("type", type);
  if (!cfg.Has("experiment")) cfg.Set("experiment", type);
  for (const auto& [k, v] : flags.values) cfg.Set(k, v);
  std::vector<std::string> written =
      neurd::experiment::RunExperiment(cfg, out_dir, seed, has_seed, workers);
  for (const std::string& p : written) std::printf("wrote %s\n", p.c_str());
  return 0;
}

int RunEval(const std::string& game_name, const std::string& policy_path) {
  neurd::GameTree game = neurd::games::TreeGameByName(game_name);
  std::ifstream in(policy_path);
  if (!in) {
    std::fprintf(stderr, "cannot open policy file: %s\n", policy_path.c_str());
    return 1;
  }
  neurd::PolicyTable table = neurd::eval::ReadPolicyTable(game, in);
  neurd::eval::EvalReport report = neurd::eval::NashConv(game, table);
  std::printf("game,%s\n", game_name.c_str());
  std::printf("expected_value_p0,%s\n",
              neurd::stats::FormatNumber(report.expected_value[0]).c_str());
  std::printf("expected_value_p1,%s\n",
              neurd::stats::FormatNumber(report.expected_value[1]).c_str());
  std::printf("br_value_p0,%s\n",
              neurd::stats::FormatNumber(report.br_value[0]).c_str());
  std::printf("br_value_p1,%s\n",
              neurd::stats::FormatNumber(report.br_value[1]).c_str());
  std::printf("nashconv,%s\n",
              neurd::stats::FormatNumber(report.nashconv).c_str());
  return 0;
}

}  // namespace

namespace {
// Subcommands accept global flags positioned after them.
CLI::App* AddSub(CLI::App& app, const std::string& name,
                 const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->fallthrough();
  return sub;
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NeuRD experiment runner"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  bool has_seed = false;
  int workers = 1;
  std::string out_dir = "out";
  std::string config_path;
  std::string preset_name;
  app.add_option("--seed", seed, "base RNG seed")
      ->each([&](const std::string&) { has_seed = true; });
  app.add_option("--workers", workers, "max parallel jobs");
  app.add_option("--out-dir", out_dir, "output directory for CSV files");
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--preset", preset_name,
                 "named preset (pennies, rps-dynamics, biased-rps-average, "
                 "nonstationary-rps, cfr-kuhn, cfr-leduc, train-kuhn, "
                 "train-leduc, train-goofspiel)");

  StagedFlags pennies_flags;
  CLI::App* pennies = AddSub(app, "pennies", "repeated matching pennies");
  pennies_flags.AddOption(pennies, "--learner", "learner",
                          "comma list: hedge,neurd,spg,rd");
  pennies_flags.AddOption(pennies, "--eta", "eta",
                          "step size per learner, or 'sweep'");
  pennies_flags.AddOption(pennies, "--rounds", "rounds", "number of rounds");
  pennies_flags.AddOption(pennies, "--forfeit", "forfeit",
                          "include the forfeit action (true/false)");

  StagedFlags dynamics_flags;
  CLI::App* dyn = AddSub(app, "dynamics", "replicator/QPG ODE fields");
  dynamics_flags.AddOption(dyn, "--game", "game", "rps:<nu>");
  dynamics_flags.AddOption(dyn, "--field", "field", "comma list: rd,qpg");
  dynamics_flags.AddOption(dyn, "--dt", "dt", "Euler step size");
  dynamics_flags.AddOption(dyn, "--steps", "steps", "integration steps");
  dynamics_flags.AddOption(dyn, "--trajectories", "trajectories",
                           "random starting points");
  dynamics_flags.AddOption(dyn, "--record-every", "record_every",
                           "CSV row cadence in steps");

  StagedFlags cfr_flags;
  CLI::App* cfr_cmd = AddSub(app, "cfr", "counterfactual regret runs");
  cfr_flags.AddOption(cfr_cmd, "--game", "game",
                      "kuhn, leduc, goofspiel5, or rps:<nu>");
  cfr_flags.AddOption(cfr_cmd, "--learner", "learner",
                      "comma list: neurd,hedge,spg");
  cfr_flags.AddOption(cfr_cmd, "--eta", "eta", "constant step size");
  cfr_flags.AddOption(cfr_cmd, "--eta-schedule", "eta_schedule",
                      "constant or horizon");
  cfr_flags.AddOption(cfr_cmd, "--iters", "iters", "iterations");
  cfr_flags.AddOption(cfr_cmd, "--eval-every", "eval_every", "eval cadence");
  cfr_flags.AddOption(cfr_cmd, "--schedule", "schedule",
                      "none, negate:<K>, or nus:<v1,v2,...>:<K>");

  StagedFlags train_flags;
  CLI::App* train = AddSub(app, "train", "neural NeuRD/SPG training");
  train_flags.AddOption(train, "--game", "game",
                        "kuhn, leduc, goofspiel5, or rps:<nu>");
  train_flags.AddOption(train, "--algo", "algo", "comma list: neurd,spg");
  train_flags.AddOption(train, "--tau", "tau", "entropy regularization level");
  train_flags.AddOption(train, "--beta", "beta", "logit clipping threshold");
  train_flags.AddOption(train, "--seeds", "seeds", "comma list of seeds");
  train_flags.AddOption(train, "--policy-updates", "policy_updates",
                        "policy update count");
  train_flags.AddOption(train, "--switch-every", "switch_every",
                        "reward negation interval (0 disables)");
  train_flags.AddOption(train, "--eval-every", "eval_every", "eval cadence");

  std::string eval_game = "kuhn";
  std::string eval_policy;
  CLI::App* eval_cmd = AddSub(app, "eval", "evaluate a policy table");
  eval_cmd->add_option("--game", eval_game, "game name");
  eval_cmd->add_option("--policy", eval_policy, "policy table file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Config base;
    if (!preset_name.empty()) base = neurd::experiment::Preset(preset_name);
    if (!config_path.empty()) {
      Config file_cfg = Config::FromFile(config_path);
      for (const auto& [k, v] : file_cfg.kv) base.Set(k, v);
    }
    if (pennies->parsed()) {
      return RunExperimentCommand("pennies", base, pennies_flags, out_dir,
                                  seed, has_seed, workers);
    }
    if (dyn->parsed()) {
      return RunExperimentCommand("dynamics", base, dynamics_flags, out_dir,
                                  seed, has_seed, workers);
    }
    if (cfr_cmd->parsed()) {
      return RunExperimentCommand("cfr", base, cfr_flags, out_dir, seed,
                                  has_seed, workers);
    }
    if (train->parsed()) {
      return RunExperimentCommand("train", base, train_flags, out_dir, seed,
                                  has_seed, workers);
    }
    if (eval_cmd->parsed()) return RunEval(eval_game, eval_policy);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
