// Copyright 2026 The nashmg Authors
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

#ifndef NASHMG_HARNESS_HPP_
#define NASHMG_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nashmg/evaluation.hpp"
#include "nashmg/learner.hpp"
#include "nashmg/serialization.hpp"

namespace nashmg {

struct InstanceSpec {
  std::string kind;  // tabular-random | linear-random | dummy-mdp |
                     // turn-based-random | file
  std::string path;  // kind == file
  int num_states = 0;
  int actions_max = 0;
  int actions_min = 0;
  int horizon = 0;
  int dim = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  InstanceSpec instance;
  std::string algo = "simultaneous";  // or "turn-based"
  long episodes = 0;                  // K
  double delta = 0.05;
  std::optional<double> lambda;   // default 1/B^2 of the built instance
  std::optional<double> epsilon;  // default sqrt(H/K)
  std::uint64_t master_seed = 0;
  int num_seeds = 1;
  bool monitor = false;
  long eval_every = 0;  // 0 = every episode for K <= 5000, else every 10th
  std::string out_dir = "out";
  std::string variance_floor = "main";   // or "quartered"
  std::string beta_constants = "lemma";  // or "proof"
  int initial_state = 0;
  int workers = 0;  // 0 = hardware concurrency
};

// Parses a config document, applying defaults and rejecting unknown keys with
// the JSON path of the offender. `overrides` is an optional flat object whose
// entries replace top-level config keys before parsing.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& overrides_json = "");

// Canonical JSON echo of a fully defaulted config; byte-deterministic.
std::string config_to_json(const ExperimentConfig& config);

// Builds the instance named by the spec (generators are seeded by the
// instance seed, shared by all runs).
Instance build_instance(const InstanceSpec& spec);

struct RunSummary {
  int run_index = 0;
  std::uint64_t seed = 0;
  std::vector<long> episodes;  // evaluated episode indices
  std::vector<double> gap;
  std::vector<double> cum_regret;
  std::vector<double> v_up_s1, v_lo_s1;
  std::vector<int> conf_member;
  std::vector<double> e1_margin, e2_margin;  // nan when monitoring is off
  bool membership_all = true;
  bool e1_hold = false;
  bool e2_hold = false;
  long variance_checks = 0;
  long variance_violations = 0;
  Certificate certificate;
  double final_regret = 0.0;
  double wall_seconds = 0.0;  // console diagnostics only, never serialized
};

struct ExperimentResult {
  ExperimentConfig config;
  double resolved_lambda = 0.0;
  double resolved_epsilon = 0.0;
  double param_bound = 0.0;
  long eval_cadence = 1;
  std::vector<RunSummary> runs;
  std::vector<long> eval_episodes;
  std::vector<double> mean_regret, min_regret, max_regret;
  double freq_membership = 0.0;
  double freq_e1 = 0.0;
  double freq_e2 = 0.0;
};

// Runs every seed (concurrently, one run per worker) and aggregates.
// Deterministic: (config, master_seed) fixes every output byte.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes run_<index>.csv per seed plus summary.json under out_dir and
// returns the summary JSON text.
std::string emit_outputs(const ExperimentResult& result, const std::string& out_dir);

extern const char kVersion[];

}  // namespace nashmg

#endif  // NASHMG_HARNESS_HPP_
