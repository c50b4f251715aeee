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

#ifndef NASHMG_EVALUATION_HPP_
#define NASHMG_EVALUATION_HPP_

#include <span>
#include <vector>

#include "nashmg/game_model.hpp"
#include "nashmg/learner.hpp"

namespace nashmg {

// Value tables are (H+1) x S row-major with the terminal row identically 0.
struct ValueTable {
  int horizon = 0;
  int num_states = 0;
  std::vector<double> v;

  double at(int h, int s) const {
    return v[static_cast<std::size_t>(h) * num_states + s];
  }
  double& at(int h, int s) { return v[static_cast<std::size_t>(h) * num_states + s]; }
  const double* row(int h) const {
    return v.data() + static_cast<std::size_t>(h) * num_states;
  }
};

// Markov policy tables [h][s][action].
struct PolicyTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> p;

  double at(int h, int s, int a) const {
    return p[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  double& at(int h, int s, int a) {
    return p[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
};

struct BestResponseValues {
  ValueTable v;
  // Q [h][s][a][b]
  std::vector<double> q;
};

struct NashValues {
  ValueTable v;
  PolicyTable row_strategy;
  PolicyTable col_strategy;
};

// Best response of the max player against a fixed min policy nu:
// V(h,s) = max_a sum_b nu(b|s) Q(h,s,a,b), exact dense backward induction on
// the true kernel.
BestResponseValues best_response_value_max(const LinearMixtureGame& game,
                                           const PolicyTable& nu);

// Mirror image: min over b of the pi-average of Q.
BestResponseValues best_response_value_min(const LinearMixtureGame& game,
                                           const PolicyTable& pi);

// Nash value by backward induction with an exact matrix-game solve per state.
NashValues nash_value(const LinearMixtureGame& game);

// Value of a joint (possibly correlated) policy mu given as [h][s][a][b]
// tables.
ValueTable joint_policy_value(const LinearMixtureGame& game,
                              std::span<const double> mu);

// Duality gap V_1^{*,nu}(s1) - V_1^{pi,*}(s1) of a policy pair.
double episode_gap(const LinearMixtureGame& game, const PolicyTable& pi,
                   const PolicyTable& nu, int s1);

// [V_h V](s,a,b) = P_h V^2 - (P_h V)^2 from the true kernel; `values` is V at
// step h+1.
double true_variance(const LinearMixtureGame& game, int h, int s, int a, int b,
                     std::span<const double> values);

struct Certificate {
  long episode = 0;
  double gap = 0.0;
};

// Online-to-batch certificate: the episode with the smallest exact gap.
Certificate policy_certificate(std::span<const long> episodes,
                               std::span<const double> gaps);

// ---------------------------------------------------------------------------
// Event monitors over a learner run. The monitor sees the true parameters;
// the learner never does. All sums are maintained online from per-episode
// records:
//   membership: theta*_h inside both (0)-system confidence ellipsoids,
//   E1: suffix-sum martingale bound on P_h(V_up - V_lo) minus realized values,
//   E2: total variance of the joint-policy value along the trajectory.
class RunMonitor {
 public:
  // events_enabled gates the E1/E2/variance-offset accounting; membership is
  // always tracked (it is a cheap quadratic form per step).
  RunMonitor(const LinearMixtureGame* game, const LearnerConfig* config,
             bool events_enabled = true);

  void observe(const EpisodeRecord& rec);

  long episodes_seen() const { return episodes_; }
  bool membership_all() const { return membership_all_; }
  bool last_membership() const { return last_membership_; }

  // Margins of the event bounds at the current prefix (T = kH); nonnegative
  // margin means the event holds.
  double e1_margin() const;
  double e2_margin() const;
  bool e1_holds() const { return e1_margin() >= 0.0; }
  bool e2_holds() const { return e2_margin() >= 0.0; }

  // Variance-offset check |var_est - true variance| <= offset, counted over
  // both sides of every visited step.
  long variance_checks() const { return var_checked_; }
  long variance_violations() const { return var_violations_; }

 private:
  const LinearMixtureGame* game_;
  const LearnerConfig* config_;
  bool events_enabled_ = true;
  long episodes_ = 0;
  bool membership_all_ = true;
  bool last_membership_ = true;
  std::vector<double> e1_suffix_sums_;  // indexed by h'
  double e2_sum_ = 0.0;
  long var_checked_ = 0;
  long var_violations_ = 0;
};

}  // namespace nashmg

#endif  // NASHMG_EVALUATION_HPP_
