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

#ifndef NASHMG_GAME_MODEL_HPP_
#define NASHMG_GAME_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nashmg/rng.hpp"

namespace nashmg {

// Episodic two-player zero-sum linear mixture Markov game with simultaneous
// moves. The transition kernel at step h is P_h(s'|s,a,b) = <phi(s'|s,a,b),
// theta[h]> for a known feature tensor phi and unknown (to the learner)
// per-step parameters theta. Features are stored densely, laid out so the
// next-state axis is contiguous per (s,a,b).
struct LinearMixtureGame {
  int num_states = 0;
  int num_actions_max = 0;
  int num_actions_min = 0;
  int horizon = 0;
  int dim = 0;
  // [s][a][b][s'][i]
  std::vector<double> features;
  // theta[h], h = 0..horizon-1
  std::vector<Eigen::VectorXd> theta;
  // [h][s][a][b], values in [-1, 1]
  std::vector<double> rewards;
  double param_bound = 0.0;

  std::size_t feature_offset(int s, int a, int b, int sp) const {
    return ((((static_cast<std::size_t>(s) * num_actions_max + a) * num_actions_min + b) *
                 num_states +
             sp) *
            dim);
  }
  Eigen::Map<const Eigen::VectorXd> feature(int s, int a, int b, int sp) const {
    return {features.data() + feature_offset(s, a, b, sp), dim};
  }
  double reward(int h, int s, int a, int b) const {
    return rewards[((static_cast<std::size_t>(h) * num_states + s) * num_actions_max + a) *
                       num_actions_min +
                   b];
  }
};

enum class Owner : std::uint8_t { Max, Min };

// Turn-based game: the state space is partitioned by owner and a single
// shared action axis drives both features and rewards.
struct TurnBasedGame {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  int dim = 0;
  std::vector<Owner> owner;  // per state
  // [s][a][s'][i]
  std::vector<double> features;
  std::vector<Eigen::VectorXd> theta;
  // [h][s][a]
  std::vector<double> rewards;
  double param_bound = 0.0;

  std::size_t feature_offset(int s, int a, int sp) const {
    return ((static_cast<std::size_t>(s) * num_actions + a) * num_states + sp) * dim;
  }
  Eigen::Map<const Eigen::VectorXd> feature(int s, int a, int sp) const {
    return {features.data() + feature_offset(s, a, sp), dim};
  }
  double reward(int h, int s, int a) const {
    return rewards[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
};

// Single-agent linear mixture MDP, used as the input of the dummy-opponent
// embedding.
struct LinearMixtureMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  int dim = 0;
  // [s][a][s'][i]
  std::vector<double> features;
  std::vector<Eigen::VectorXd> theta;
  // [h][s][a]
  std::vector<double> rewards;
  double param_bound = 0.0;

  std::size_t feature_offset(int s, int a, int sp) const {
    return ((static_cast<std::size_t>(s) * num_actions + a) * num_states + sp) * dim;
  }
  double reward(int h, int s, int a) const {
    return rewards[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
};

// phi_V(s,a,b) = sum_{s'} phi(s'|s,a,b) V(s'), the value-integrated feature.
Eigen::VectorXd phi_v(const LinearMixtureGame& game, std::span<const double> values,
                      int s, int a, int b);
Eigen::VectorXd phi_v(const TurnBasedGame& game, std::span<const double> values,
                      int s, int a);

// <phi(s'|s,a,b), theta[h]> clamped to [0,1]. Clamping beyond 1e-9 indicates
// a malformed instance and raises ValidationError.
double transition_prob(const LinearMixtureGame& game, int h, int s, int a, int b, int sp);
double transition_prob(const TurnBasedGame& game, int h, int s, int a, int sp);

// Inverse-CDF draw over the enumerated next states using one uniform.
int sample_next_state(const LinearMixtureGame& game, int h, int s, int a, int b, Rng& rng);
int sample_next_state(const TurnBasedGame& game, int h, int s, int a, Rng& rng);

// Checks the kernel, normalization, parameter-bound and reward-range
// invariants; throws ValidationError with the offending index on failure.
void validate(const LinearMixtureGame& game);
void validate(const TurnBasedGame& game);

// Tabular game as a linear mixture instance: phi is a scaled one-hot over
// (s,a,b,s') and theta[h] the correspondingly scaled flattened kernel. The
// scale is the smallest power of two whose square covers |S|, which keeps
// |phi_V| <= 1 for |V| <= 1 and makes the kernel round-trip bit-exact.
// kernel is [h][s][a][b][s'], reward is [h][s][a][b].
LinearMixtureGame make_tabular(int num_states, int num_actions_max, int num_actions_min,
                               int horizon, std::span<const double> kernel,
                               std::span<const double> reward);

double tabular_feature_scale(int num_states);

// Simultaneous-move view of a turn-based game: the ignored side's action axis
// is replicated so that features and rewards do not depend on it.
LinearMixtureGame embed_turn_based(const TurnBasedGame& tb);

// Markov game whose min player has no influence: transitions and rewards copy
// the MDP for every min action.
LinearMixtureGame make_dummy_min_player(const LinearMixtureMdp& mdp, int num_min_actions = 2);

// Random instance generators. Basis kernels have Dirichlet(1,..,1) rows;
// mixture weights live on the simplex. Features are scaled by 1/sqrt(d) and
// parameters by sqrt(d), so phi_V is normalized and param_bound = sqrt(d).
LinearMixtureGame random_instance(int dim, int num_states, int num_actions_max,
                                  int num_actions_min, int horizon, Rng& rng);
TurnBasedGame random_turn_based(int dim, int num_states, int num_actions, int horizon,
                                Rng& rng);
LinearMixtureMdp random_mdp(int dim, int num_states, int num_actions, int horizon, Rng& rng);
LinearMixtureGame random_tabular(int num_states, int num_actions_max, int num_actions_min,
                                 int horizon, Rng& rng);

}  // namespace nashmg

#endif  // NASHMG_GAME_MODEL_HPP_
