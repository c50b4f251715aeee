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

#include "nashmg/game_model.hpp"

#include <cmath>
#include <sstream>

#include "nashmg/errors.hpp"

namespace nashmg {
namespace {

constexpr double kKernelRowTol = 1e-9;
constexpr double kKernelEntryTol = 1e-12;
constexpr double kClampTol = 1e-9;
constexpr double kPhiNormTol = 1e-9;

void check_range(bool ok, const char* what) {
  if (!ok) {
    throw ConfigError(std::string("index out of range: ") + what);
  }
}

double clamped_probability(double raw, const char* where) {
  if (raw < -kClampTol || raw > 1.0 + kClampTol) {
    std::ostringstream msg;
    msg << where << ": probability " << raw << " outside [0,1] beyond tolerance";
    throw ValidationError(msg.str());
  }
  if (raw < 0.0) return 0.0;
  if (raw > 1.0) return 1.0;
  return raw;
}

std::vector<double> dirichlet_row(int n, Rng& rng) {
  std::vector<double> row(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    row[i] = -std::log(1.0 - rng.uniform());
    total += row[i];
  }
  if (total <= 0.0) {
    for (int i = 0; i < n; ++i) row[i] = 1.0 / n;
    return row;
  }
  for (int i = 0; i < n; ++i) row[i] /= total;
  return row;
}

// Shared validation core: walks every (h,s,a,b), checks the kernel row and a
// sample of value-integrated feature norms.
template <typename FeatureAt, typename RewardAt>
void validate_core(int S, int H, int num_pairs, int dim,
                   const std::vector<Eigen::VectorXd>& theta, double param_bound,
                   FeatureAt feature_at, RewardAt reward_at) {
  if (S <= 0 || H <= 0 || num_pairs <= 0 || dim <= 0) {
    throw ValidationError("instance has non-positive dimensions");
  }
  if (static_cast<int>(theta.size()) != H) {
    throw ValidationError("theta_star must have one vector per step");
  }
  for (int h = 0; h < H; ++h) {
    if (theta[h].size() != dim) throw ValidationError("theta_star dimension mismatch");
    const double norm = theta[h].norm();
    if (norm > param_bound + 1e-9 * (1.0 + param_bound)) {
      std::ostringstream msg;
      msg << "theta_star norm " << norm << " exceeds bound " << param_bound << " at h=" << h;
      throw ValidationError(msg.str());
    }
  }
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int p = 0; p < num_pairs; ++p) {
        double row_sum = 0.0;
        for (int sp = 0; sp < S; ++sp) {
          const double prob = feature_at(s, p, sp).dot(theta[h]);
          if (prob < -kKernelEntryTol) {
            std::ostringstream msg;
            msg << "negative transition probability " << prob << " at (h=" << h
                << ", s=" << s << ", pair=" << p << ", s'=" << sp << ")";
            throw ValidationError(msg.str());
          }
          row_sum += prob;
        }
        if (std::abs(row_sum - 1.0) > kKernelRowTol) {
          std::ostringstream msg;
          msg << "kernel row sums to " << row_sum << " at (h=" << h << ", s=" << s
              << ", pair=" << p << ")";
          throw ValidationError(msg.str());
        }
        const double r = reward_at(h, s, p);
        if (r < -1.0 || r > 1.0 || !std::isfinite(r)) {
          std::ostringstream msg;
          msg << "reward " << r << " outside [-1,1] at (h=" << h << ", s=" << s
              << ", pair=" << p << ")";
          throw ValidationError(msg.str());
        }
      }
    }
  }

  // Normalization |phi_V| <= 1 for |V| <= 1, tested on the extreme constant
  // functions plus a fixed deterministic sample.
  Rng probe(0x5eedu);
  std::vector<std::vector<double>> probes;
  probes.emplace_back(S, 1.0);
  probes.emplace_back(S, -1.0);
  for (int i = 0; i < 16; ++i) {
    std::vector<double> v(S);
    for (int s = 0; s < S; ++s) v[s] = 2.0 * probe.uniform() - 1.0;
    probes.push_back(std::move(v));
  }
  for (const auto& v : probes) {
    for (int s = 0; s < S; ++s) {
      for (int p = 0; p < num_pairs; ++p) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
        for (int sp = 0; sp < S; ++sp) acc += feature_at(s, p, sp) * v[sp];
        if (acc.norm() > 1.0 + kPhiNormTol) {
          std::ostringstream msg;
          msg << "phi_V norm " << acc.norm() << " exceeds 1 at (s=" << s << ", pair=" << p
              << ")";
          throw ValidationError(msg.str());
        }
      }
    }
  }
}

}  // namespace

Eigen::VectorXd phi_v(const LinearMixtureGame& game, std::span<const double> values,
                      int s, int a, int b) {
  check_range(static_cast<int>(values.size()) == game.num_states, "phi_v values");
  check_range(s >= 0 && s < game.num_states, "phi_v state");
  check_range(a >= 0 && a < game.num_actions_max, "phi_v max action");
  check_range(b >= 0 && b < game.num_actions_min, "phi_v min action");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(game.dim);
  for (int sp = 0; sp < game.num_states; ++sp) {
    acc += game.feature(s, a, b, sp) * values[sp];
  }
  return acc;
}

Eigen::VectorXd phi_v(const TurnBasedGame& game, std::span<const double> values,
                      int s, int a) {
  check_range(static_cast<int>(values.size()) == game.num_states, "phi_v values");
  check_range(s >= 0 && s < game.num_states, "phi_v state");
  check_range(a >= 0 && a < game.num_actions, "phi_v action");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(game.dim);
  for (int sp = 0; sp < game.num_states; ++sp) {
    acc += game.feature(s, a, sp) * values[sp];
  }
  return acc;
}

double transition_prob(const LinearMixtureGame& game, int h, int s, int a, int b, int sp) {
  check_range(h >= 0 && h < game.horizon, "transition_prob step");
  check_range(s >= 0 && s < game.num_states && sp >= 0 && sp < game.num_states,
              "transition_prob state");
  check_range(a >= 0 && a < game.num_actions_max && b >= 0 && b < game.num_actions_min,
              "transition_prob action");
  return clamped_probability(game.feature(s, a, b, sp).dot(game.theta[h]),
                             "transition_prob");
}

double transition_prob(const TurnBasedGame& game, int h, int s, int a, int sp) {
  check_range(h >= 0 && h < game.horizon, "transition_prob step");
  check_range(s >= 0 && s < game.num_states && sp >= 0 && sp < game.num_states,
              "transition_prob state");
  check_range(a >= 0 && a < game.num_actions, "transition_prob action");
  return clamped_probability(game.feature(s, a, sp).dot(game.theta[h]), "transition_prob");
}

int sample_next_state(const LinearMixtureGame& game, int h, int s, int a, int b, Rng& rng) {
  std::vector<double> probs(game.num_states);
  for (int sp = 0; sp < game.num_states; ++sp) {
    probs[sp] = transition_prob(game, h, s, a, b, sp);
  }
  return sample_categorical(probs.data(), game.num_states, rng.uniform());
}

int sample_next_state(const TurnBasedGame& game, int h, int s, int a, Rng& rng) {
  std::vector<double> probs(game.num_states);
  for (int sp = 0; sp < game.num_states; ++sp) {
    probs[sp] = transition_prob(game, h, s, a, sp);
  }
  return sample_categorical(probs.data(), game.num_states, rng.uniform());
}

void validate(const LinearMixtureGame& game) {
  const int pairs = game.num_actions_max * game.num_actions_min;
  validate_core(
      game.num_states, game.horizon, pairs, game.dim, game.theta, game.param_bound,
      [&](int s, int p, int sp) {
        return game.feature(s, p / game.num_actions_min, p % game.num_actions_min, sp);
      },
      [&](int h, int s, int p) {
        return game.reward(h, s, p / game.num_actions_min, p % game.num_actions_min);
      });
}

void validate(const TurnBasedGame& game) {
  if (static_cast<int>(game.owner.size()) != game.num_states) {
    throw ValidationError("state_owner must tag every state");
  }
  validate_core(
      game.num_states, game.horizon, game.num_actions, game.dim, game.theta,
      game.param_bound, [&](int s, int a, int sp) { return game.feature(s, a, sp); },
      [&](int h, int s, int a) { return game.reward(h, s, a); });
}

double tabular_feature_scale(int num_states) {
  double scale = 1.0;
  while (scale * scale < static_cast<double>(num_states)) scale *= 2.0;
  return scale;
}

LinearMixtureGame make_tabular(int num_states, int num_actions_max, int num_actions_min,
                               int horizon, std::span<const double> kernel,
                               std::span<const double> reward) {
  const int S = num_states, A = num_actions_max, B = num_actions_min, H = horizon;
  if (S <= 0 || A <= 0 || B <= 0 || H <= 0) {
    throw ConfigError("make_tabular: dimensions must be positive");
  }
  const std::size_t cells = static_cast<std::size_t>(H) * S * A * B;
  if (kernel.size() != cells * S || reward.size() != cells) {
    throw ConfigError("make_tabular: kernel/reward size mismatch");
  }
  for (std::size_t row = 0; row < cells; ++row) {
    double sum = 0.0;
    for (int sp = 0; sp < S; ++sp) {
      const double p = kernel[row * S + sp];
      if (p < 0.0 || !std::isfinite(p)) {
        throw ValidationError("make_tabular: negative kernel entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError("make_tabular: kernel row does not sum to 1");
    }
  }

  LinearMixtureGame g;
  g.num_states = S;
  g.num_actions_max = A;
  g.num_actions_min = B;
  g.horizon = H;
  g.dim = S * S * A * B;
  const double scale = tabular_feature_scale(S);
  const double inv_scale = 1.0 / scale;

  // One-hot index of (s,a,b,s') in flattened order, scaled by 1/scale so that
  // |phi_V| <= 1; theta picks up the matching factor. Powers of two keep the
  // product (1/scale)*(scale*p) == p bit-exact.
  g.features.assign(static_cast<std::size_t>(S) * A * B * S * g.dim, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        for (int sp = 0; sp < S; ++sp) {
          const std::size_t flat = ((static_cast<std::size_t>(s) * A + a) * B + b) * S + sp;
          g.features[g.feature_offset(s, a, b, sp) + flat] = inv_scale;
        }
      }
    }
  }
  g.theta.resize(H);
  double max_norm = 0.0;
  for (int h = 0; h < H; ++h) {
    Eigen::VectorXd t(g.dim);
    for (std::size_t j = 0; j < static_cast<std::size_t>(S) * A * B * S; ++j) {
      t[static_cast<Eigen::Index>(j)] =
          scale * kernel[static_cast<std::size_t>(h) * S * A * B * S + j];
    }
    max_norm = std::max(max_norm, t.norm());
    g.theta[h] = std::move(t);
  }
  g.param_bound = max_norm;
  g.rewards.assign(reward.begin(), reward.end());
  validate(g);
  return g;
}

LinearMixtureGame embed_turn_based(const TurnBasedGame& tb) {
  LinearMixtureGame g;
  g.num_states = tb.num_states;
  g.num_actions_max = tb.num_actions;
  g.num_actions_min = tb.num_actions;
  g.horizon = tb.horizon;
  g.dim = tb.dim;
  g.theta = tb.theta;
  g.param_bound = tb.param_bound;
  const int S = tb.num_states, A = tb.num_actions;
  g.features.assign(static_cast<std::size_t>(S) * A * A * S * g.dim, 0.0);
  g.rewards.assign(static_cast<std::size_t>(tb.horizon) * S * A * A, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        const int own_action = tb.owner[s] == Owner::Max ? a : b;
        for (int sp = 0; sp < S; ++sp) {
          std::copy_n(tb.features.data() + tb.feature_offset(s, own_action, sp), g.dim,
                      g.features.data() + g.feature_offset(s, a, b, sp));
        }
        for (int h = 0; h < tb.horizon; ++h) {
          g.rewards[((static_cast<std::size_t>(h) * S + s) * A + a) * A + b] =
              tb.reward(h, s, own_action);
        }
      }
    }
  }
  return g;
}

LinearMixtureGame make_dummy_min_player(const LinearMixtureMdp& mdp, int num_min_actions) {
  if (num_min_actions < 1) {
    throw ConfigError("make_dummy_min_player: need at least one min action");
  }
  LinearMixtureGame g;
  g.num_states = mdp.num_states;
  g.num_actions_max = mdp.num_actions;
  g.num_actions_min = num_min_actions;
  g.horizon = mdp.horizon;
  g.dim = mdp.dim;
  g.theta = mdp.theta;
  g.param_bound = mdp.param_bound;
  const int S = mdp.num_states, A = mdp.num_actions, B = num_min_actions;
  g.features.assign(static_cast<std::size_t>(S) * A * B * S * g.dim, 0.0);
  g.rewards.assign(static_cast<std::size_t>(mdp.horizon) * S * A * B, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        for (int sp = 0; sp < S; ++sp) {
          std::copy_n(mdp.features.data() + mdp.feature_offset(s, a, sp), g.dim,
                      g.features.data() + g.feature_offset(s, a, b, sp));
        }
        for (int h = 0; h < mdp.horizon; ++h) {
          g.rewards[((static_cast<std::size_t>(h) * S + s) * A + a) * B + b] =
              mdp.reward(h, s, a);
        }
      }
    }
  }
  return g;
}

namespace {

// Shared scaffolding for the random generators: d basis kernels with
// Dirichlet rows over a (state, pair) grid, simplex mixture weights per step.
struct RandomMixture {
  std::vector<double> features;  // [cell][sp][i] with cell = s*pairs + pair
  std::vector<Eigen::VectorXd> theta;
  double param_bound;
};

RandomMixture random_mixture(int dim, int S, int cells_per_state, int H, Rng& rng) {
  if (dim < 1) throw ConfigError("random instance: dim must be >= 1");
  RandomMixture out;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dim));
  const std::size_t num_cells = static_cast<std::size_t>(S) * cells_per_state;
  out.features.assign(num_cells * S * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (std::size_t cell = 0; cell < num_cells; ++cell) {
      const std::vector<double> row = dirichlet_row(S, rng);
      for (int sp = 0; sp < S; ++sp) {
        out.features[(cell * S + sp) * dim + i] = row[sp] * inv_sqrt_d;
      }
    }
  }
  const double sqrt_d = std::sqrt(static_cast<double>(dim));
  out.theta.resize(H);
  for (int h = 0; h < H; ++h) {
    const std::vector<double> w = dirichlet_row(dim, rng);
    Eigen::VectorXd t(dim);
    for (int i = 0; i < dim; ++i) t[i] = sqrt_d * w[i];
    out.theta[h] = std::move(t);
  }
  out.param_bound = sqrt_d;
  return out;
}

std::vector<double> random_rewards(std::size_t count, Rng& rng) {
  std::vector<double> r(count);
  for (auto& v : r) v = 2.0 * rng.uniform() - 1.0;
  return r;
}

}  // namespace

LinearMixtureGame random_instance(int dim, int num_states, int num_actions_max,
                                  int num_actions_min, int horizon, Rng& rng) {
  LinearMixtureGame g;
  g.num_states = num_states;
  g.num_actions_max = num_actions_max;
  g.num_actions_min = num_actions_min;
  g.horizon = horizon;
  g.dim = dim;
  RandomMixture mix =
      random_mixture(dim, num_states, num_actions_max * num_actions_min, horizon, rng);
  g.features = std::move(mix.features);
  g.theta = std::move(mix.theta);
  g.param_bound = mix.param_bound;
  g.rewards = random_rewards(
      static_cast<std::size_t>(horizon) * num_states * num_actions_max * num_actions_min,
      rng);
  validate(g);
  return g;
}

TurnBasedGame random_turn_based(int dim, int num_states, int num_actions, int horizon,
                                Rng& rng) {
  TurnBasedGame g;
  g.num_states = num_states;
  g.num_actions = num_actions;
  g.horizon = horizon;
  g.dim = dim;
  g.owner.resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    g.owner[s] = rng.uniform() < 0.5 ? Owner::Max : Owner::Min;
  }
  RandomMixture mix = random_mixture(dim, num_states, num_actions, horizon, rng);
  g.features = std::move(mix.features);
  g.theta = std::move(mix.theta);
  g.param_bound = mix.param_bound;
  g.rewards =
      random_rewards(static_cast<std::size_t>(horizon) * num_states * num_actions, rng);
  validate(g);
  return g;
}

LinearMixtureMdp random_mdp(int dim, int num_states, int num_actions, int horizon,
                            Rng& rng) {
  LinearMixtureMdp m;
  m.num_states = num_states;
  m.num_actions = num_actions;
  m.horizon = horizon;
  m.dim = dim;
  RandomMixture mix = random_mixture(dim, num_states, num_actions, horizon, rng);
  m.features = std::move(mix.features);
  m.theta = std::move(mix.theta);
  m.param_bound = mix.param_bound;
  m.rewards =
      random_rewards(static_cast<std::size_t>(horizon) * num_states * num_actions, rng);
  return m;
}

LinearMixtureGame random_tabular(int num_states, int num_actions_max, int num_actions_min,
                                 int horizon, Rng& rng) {
  const std::size_t cells =
      static_cast<std::size_t>(horizon) * num_states * num_actions_max * num_actions_min;
  std::vector<double> kernel(cells * num_states);
  for (std::size_t row = 0; row < cells; ++row) {
    const std::vector<double> p = dirichlet_row(num_states, rng);
    std::copy(p.begin(), p.end(), kernel.begin() + row * num_states);
  }
  const std::vector<double> reward = random_rewards(cells, rng);
  return make_tabular(num_states, num_actions_max, num_actions_min, horizon, kernel,
                      reward);
}

}  // namespace nashmg
