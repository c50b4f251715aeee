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

#ifndef NASHMG_LEARNER_HPP_
#define NASHMG_LEARNER_HPP_

#include <vector>

#include "nashmg/equilibrium.hpp"
#include "nashmg/game_model.hpp"
#include "nashmg/linalg.hpp"
#include "nashmg/rng.hpp"

namespace nashmg {

// Floor inside the variance surrogate sigma-bar. MainText uses H^2/d,
// Quartered uses H^2/(4d).
enum class VarianceFloor { MainText, Quartered };

// Log arguments in the confidence radii: Lemma uses log(4k^2 H / delta),
// Proof the 8k^2 variant (and drops the extra 1/d inside beta1's first log).
enum class BetaConstants { Lemma, Proof };

struct LearnerConfig {
  double lambda = 1.0;
  double delta = 0.05;
  double cce_epsilon = 0.0;
  double param_bound = 1.0;
  long episodes = 1;  // K, entering beta1's log term
  int initial_state = 0;
  VarianceFloor floor = VarianceFloor::MainText;
  BetaConstants constants = BetaConstants::Lemma;
};

struct BetaTriple {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

// Confidence radii at episode k (1-based). Natural logarithms throughout;
// beta0 <= beta2 for every d >= 1.
BetaTriple beta_schedule(long k, int dim, int horizon, double lambda, double delta,
                         double param_bound, long total_episodes,
                         BetaConstants constants = BetaConstants::Lemma);

// Default CCE tolerance sqrt(H/K).
double cce_epsilon_default(int horizon, long episodes);

// sigma-bar = sqrt(max{floor, var_est + offset}); floor is H^2/d or H^2/(4d).
double sigma_bar(double var_est, double offset, int horizon, int dim,
                 VarianceFloor floor = VarianceFloor::MainText);

// Regression statistics of one player side at one step: the (0) system is
// the weighted value regression, the (1) system the unweighted regression on
// squared values feeding the variance estimate.
struct StepRegression {
  WeightedCovariance cov0;
  CorrelationVector b0;
  Eigen::VectorXd theta0;
  WeightedCovariance cov1;
  CorrelationVector b1;
  Eigen::VectorXd theta1;

  StepRegression(int dim, double lambda)
      : cov0(dim, lambda),
        b0(dim),
        theta0(Eigen::VectorXd::Zero(dim)),
        cov1(dim, lambda),
        b1(dim),
        theta1(Eigen::VectorXd::Zero(dim)) {}
};

struct SideRegression {
  std::vector<StepRegression> steps;  // one per h
};

struct RegressionState {
  int dim = 0;
  int horizon = 0;
  double lambda = 0.0;
  SideRegression up;  // max player
  SideRegression lo;  // min player

  RegressionState(int dim, int horizon, double lambda);
};

// One weighted sample into a side/step: cov0 += phi0 phi0^T / sigma^2,
// b0 += phi0 y0 / sigma^2, cov1 += phi1 phi1^T, b1 += phi1 y1, then both
// estimates are refreshed from fresh factorizations.
void apply_weighted_sample(StepRegression& reg, const Eigen::VectorXd& phi0, double y0,
                           double sigma, const Eigen::VectorXd& phi1, double y1);

// Clipped two-moment variance estimate
// [<phi1, theta1>]_[0,H^2] - ([<phi0, theta0>]_[-H,H])^2; may be negative.
double variance_estimate(const StepRegression& reg, const Eigen::VectorXd& phi0,
                         const Eigen::VectorXd& phi1, int horizon);

// Offset min{H^2, beta1 |phi1|_{cov1^-1}} + min{H^2, 2 H beta2 |phi0|_{cov0^-1}}.
double offset_bound(const StepRegression& reg, const Eigen::VectorXd& phi0,
                    const Eigen::VectorXd& phi1, double beta1, double beta2, int horizon);

// How the per-state policy is extracted during planning. Cce runs the
// epsilon-CCE program on (Q_up, Q_lo); OwnerGreedy is the turn-based
// specialization on embedded games: a point mass on the owning side's greedy
// action, the dummy side pinned to action 0.
enum class PolicyMode { Cce, OwnerGreedy };

struct PlanningTables {
  int horizon = 0;
  int num_states = 0;
  int actions_max = 0;
  int actions_min = 0;
  std::vector<double> q_up, q_lo;  // [h][s][a][b]
  std::vector<double> v_up, v_lo;  // [h][s] with h in [0,H], row H zero
  std::vector<double> joint;       // [h][s][a][b]
  std::vector<double> pi;          // [h][s][a]
  std::vector<double> nu;          // [h][s][b]

  std::size_t q_index(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states + s) * actions_max + a) * actions_min +
           b;
  }
  std::size_t v_index(int h, int s) const {
    return static_cast<std::size_t>(h) * num_states + s;
  }
  const double* v_up_row(int h) const { return v_up.data() + v_index(h, 0); }
  const double* v_lo_row(int h) const { return v_lo.data() + v_index(h, 0); }
};

// Backward planning pass: optimistic/pessimistic Q tables with confidence
// bonuses, per-state policy extraction, value tables from the policy.
PlanningTables plan_episode(const LinearMixtureGame& game, const RegressionState& reg,
                            double beta0, double cce_epsilon, PolicyMode mode,
                            const std::vector<Owner>* owners);

// Per-step trace of the statistics that fed one side's update.
struct SideStepStats {
  double var_est = 0.0;
  double offset = 0.0;
  double sigma = 0.0;
  double bonus = 0.0;  // beta0 * |phi0|_{cov0^{-1}} at the visited triple
  double target0 = 0.0;
  double target1 = 0.0;
  Eigen::VectorXd phi0, phi1;
};

struct StepStats {
  int s = 0, a = 0, b = 0, s_next = 0;
  SideStepStats up, lo;
};

// Snapshot of the (0)-system confidence data used for planning at one step,
// taken before the episode's updates; consumed by monitors.
struct StepConfidence {
  Eigen::MatrixXd cov_up, cov_lo;
  Eigen::VectorXd theta_up, theta_lo;
};

struct EpisodeRecord {
  long episode = 0;
  int initial_state = 0;
  double v_up_s1 = 0.0;
  double v_lo_s1 = 0.0;
  double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0;
  std::vector<StepStats> steps;            // H entries
  std::vector<StepConfidence> confidence;  // H entries
  PlanningTables tables;
};

// One episode of the simultaneous-move algorithm: plan, roll out sampling the
// joint action from the CCE table with a single uniform draw per step, update
// both regression sides after every transition. Deterministic given the rng.
EpisodeRecord run_episode(const LinearMixtureGame& game, RegressionState& reg,
                          const LearnerConfig& config, long k, Rng& rng,
                          PolicyMode mode = PolicyMode::Cce,
                          const std::vector<Owner>* owners = nullptr);

// One episode of the turn-based variant, operating on single-action features:
// greedy policies replace the CCE step, the non-owning side's value at a
// state is read off the opposite table at the owner's greedy action.
EpisodeRecord run_turn_based_episode(const TurnBasedGame& game, RegressionState& reg,
                                     const LearnerConfig& config, long k, Rng& rng);

}  // namespace nashmg

#endif  // NASHMG_LEARNER_HPP_
