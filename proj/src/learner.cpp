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

#include "nashmg/learner.hpp"

#include <cmath>

#include "nashmg/errors.hpp"

namespace nashmg {
namespace {

double clamp(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

int argmax_lowest(const double* values, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int argmin_lowest(const double* values, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

BetaTriple beta_schedule(long k, int dim, int horizon, double lambda, double delta,
                         double param_bound, long total_episodes, BetaConstants constants) {
  if (k < 1 || dim < 1 || horizon < 1 || lambda <= 0.0 || delta <= 0.0 || delta >= 1.0 ||
      total_episodes < 1) {
    throw ConfigError("beta_schedule: invalid parameters");
  }
  const double d = static_cast<double>(dim);
  const double H = static_cast<double>(horizon);
  const double kk = static_cast<double>(k);
  const double K = static_cast<double>(total_episodes);
  const double front = constants == BetaConstants::Lemma ? 4.0 : 8.0;
  const double log_k = std::log(front * kk * kk * H / delta);
  // The lemma statement divides by d inside beta1's first log; the proof
  // variant does not.
  const double log_k_d =
      constants == BetaConstants::Lemma ? std::log(front * kk * kk * H / (d * delta)) : log_k;
  const double log_cov0 = std::log(1.0 + kk / lambda);
  const double log_cov1 = std::log(1.0 + K * H * H * H * H / (d * lambda));
  const double reg = std::sqrt(lambda) * param_bound;

  BetaTriple beta;
  beta.b0 = 16.0 * std::sqrt(d * log_cov0 * log_k) + 8.0 * std::sqrt(d) * log_k + reg;
  beta.b1 = 16.0 * std::sqrt(d * H * H * H * H * log_cov1 * log_k_d) +
            8.0 * H * H * log_k + reg;
  beta.b2 = 16.0 * d * std::sqrt(log_cov0 * log_k) + 8.0 * std::sqrt(d) * log_k + reg;
  return beta;
}

double cce_epsilon_default(int horizon, long episodes) {
  if (horizon < 1 || episodes < 1) {
    throw ConfigError("cce_epsilon_default: invalid parameters");
  }
  return std::sqrt(static_cast<double>(horizon) / static_cast<double>(episodes));
}

double sigma_bar(double var_est, double offset, int horizon, int dim, VarianceFloor floor) {
  const double H = static_cast<double>(horizon);
  const double divisor = floor == VarianceFloor::MainText ? static_cast<double>(dim)
                                                          : 4.0 * static_cast<double>(dim);
  return std::sqrt(std::max(H * H / divisor, var_est + offset));
}

RegressionState::RegressionState(int dim_in, int horizon_in, double lambda_in)
    : dim(dim_in), horizon(horizon_in), lambda(lambda_in) {
  if (dim < 1 || horizon < 1 || lambda <= 0.0) {
    throw ConfigError("RegressionState: invalid parameters");
  }
  up.steps.reserve(horizon);
  lo.steps.reserve(horizon);
  for (int h = 0; h < horizon; ++h) {
    up.steps.emplace_back(dim, lambda);
    lo.steps.emplace_back(dim, lambda);
  }
}

void apply_weighted_sample(StepRegression& reg, const Eigen::VectorXd& phi0, double y0,
                           double sigma, const Eigen::VectorXd& phi1, double y1) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw NumericError("apply_weighted_sample: sigma must be positive");
  }
  const double w = 1.0 / (sigma * sigma);
  // A zero feature carries no information; skip the rank-one updates but keep
  // the estimates consistent (they are unchanged by a zero row).
  if (phi0.squaredNorm() > 0.0) {
    reg.cov0.rank_one_update(phi0, w);
    reg.b0.accumulate(phi0, y0, w);
    reg.theta0 = reg.cov0.ridge_solve(reg.b0.value);
  }
  if (phi1.squaredNorm() > 0.0) {
    reg.cov1.rank_one_update(phi1, 1.0);
    reg.b1.accumulate(phi1, y1, 1.0);
    reg.theta1 = reg.cov1.ridge_solve(reg.b1.value);
  }
}

double variance_estimate(const StepRegression& reg, const Eigen::VectorXd& phi0,
                         const Eigen::VectorXd& phi1, int horizon) {
  const double H = static_cast<double>(horizon);
  const double first = clamp(phi1.dot(reg.theta1), 0.0, H * H);
  const double second = clamp(phi0.dot(reg.theta0), -H, H);
  return first - second * second;
}

double offset_bound(const StepRegression& reg, const Eigen::VectorXd& phi0,
                    const Eigen::VectorXd& phi1, double beta1, double beta2, int horizon) {
  const double H = static_cast<double>(horizon);
  const double term1 = std::min(H * H, beta1 * reg.cov1.bonus_norm(phi1));
  const double term2 = std::min(H * H, 2.0 * H * beta2 * reg.cov0.bonus_norm(phi0));
  return term1 + term2;
}

PlanningTables plan_episode(const LinearMixtureGame& game, const RegressionState& reg,
                            double beta0, double cce_epsilon, PolicyMode mode,
                            const std::vector<Owner>* owners) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  if (reg.dim != game.dim || reg.horizon != H) {
    throw ConfigError("plan_episode: regression state does not match the instance");
  }
  if (mode == PolicyMode::OwnerGreedy &&
      (owners == nullptr || static_cast<int>(owners->size()) != S)) {
    throw ConfigError("plan_episode: owner tags required for greedy planning");
  }

  PlanningTables t;
  t.horizon = H;
  t.num_states = S;
  t.actions_max = A;
  t.actions_min = B;
  t.q_up.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
  t.q_lo.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
  t.v_up.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  t.v_lo.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  t.joint.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
  t.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  t.nu.assign(static_cast<std::size_t>(H) * S * B, 0.0);

  const double Hd = static_cast<double>(H);
  Eigen::MatrixXd q_up_s(A, B), q_lo_s(A, B);
  for (int h = H - 1; h >= 0; --h) {
    const std::span<const double> v_up_next{t.v_up_row(h + 1), static_cast<size_t>(S)};
    const std::span<const double> v_lo_next{t.v_lo_row(h + 1), static_cast<size_t>(S)};
    const StepRegression& up = reg.up.steps[h];
    const StepRegression& lo = reg.lo.steps[h];
    const SpdFactor up_factor = up.cov0.factor();
    const SpdFactor lo_factor = lo.cov0.factor();
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          const Eigen::VectorXd phi_up = phi_v(game, v_up_next, s, a, b);
          const Eigen::VectorXd phi_lo = phi_v(game, v_lo_next, s, a, b);
          const double r = game.reward(h, s, a, b);
          const double qu =
              r + up.theta0.dot(phi_up) + beta0 * up_factor.inverse_norm(phi_up);
          const double ql =
              r + lo.theta0.dot(phi_lo) - beta0 * lo_factor.inverse_norm(phi_lo);
          t.q_up[t.q_index(h, s, a, b)] = clamp(qu, -Hd, Hd);
          t.q_lo[t.q_index(h, s, a, b)] = clamp(ql, -Hd, Hd);
        }
      }
    }
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          q_up_s(a, b) = t.q_up[t.q_index(h, s, a, b)];
          q_lo_s(a, b) = t.q_lo[t.q_index(h, s, a, b)];
        }
      }
      JointDistribution sigma;
      if (mode == PolicyMode::Cce) {
        sigma = epsilon_cce(q_up_s, q_lo_s, cce_epsilon);
      } else {
        sigma.rows = A;
        sigma.cols = B;
        sigma.p.assign(static_cast<std::size_t>(A) * B, 0.0);
        if ((*owners)[s] == Owner::Max) {
          Eigen::VectorXd col0 = q_up_s.col(0);
          const int best = argmax_lowest(col0.data(), A);
          sigma.at(best, 0) = 1.0;
        } else {
          Eigen::VectorXd row0 = q_lo_s.row(0);
          const int best = argmin_lowest(row0.data(), B);
          sigma.at(0, best) = 1.0;
        }
      }
      double vu = 0.0, vl = 0.0;
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          const double p = sigma.at(a, b);
          t.joint[t.q_index(h, s, a, b)] = p;
          vu += p * q_up_s(a, b);
          vl += p * q_lo_s(a, b);
        }
      }
      t.v_up[t.v_index(h, s)] = vu;
      t.v_lo[t.v_index(h, s)] = vl;
      const MarginalPair m = marginals(sigma);
      for (int a = 0; a < A; ++a) {
        t.pi[(static_cast<std::size_t>(h) * S + s) * A + a] = m.row[a];
      }
      for (int b = 0; b < B; ++b) {
        t.nu[(static_cast<std::size_t>(h) * S + s) * B + b] = m.col[b];
      }
    }
  }
  return t;
}

namespace {

StepConfidence snapshot_confidence(const RegressionState& reg, int h) {
  StepConfidence c;
  c.cov_up = reg.up.steps[h].cov0.matrix();
  c.cov_lo = reg.lo.steps[h].cov0.matrix();
  c.theta_up = reg.up.steps[h].theta0;
  c.theta_lo = reg.lo.steps[h].theta0;
  return c;
}

SideStepStats update_side(StepRegression& side, const Eigen::VectorXd& phi0, double y0,
                          const Eigen::VectorXd& phi1, double y1, double beta0,
                          double beta1, double beta2, int horizon, VarianceFloor floor) {
  SideStepStats stats;
  stats.var_est = variance_estimate(side, phi0, phi1, horizon);
  stats.offset = offset_bound(side, phi0, phi1, beta1, beta2, horizon);
  stats.sigma = sigma_bar(stats.var_est, stats.offset, horizon, phi0.size(), floor);
  stats.bonus = beta0 * side.cov0.bonus_norm(phi0);
  stats.target0 = y0;
  stats.target1 = y1;
  stats.phi0 = phi0;
  stats.phi1 = phi1;
  apply_weighted_sample(side, phi0, y0, stats.sigma, phi1, y1);
  return stats;
}

}  // namespace

EpisodeRecord run_episode(const LinearMixtureGame& game, RegressionState& reg,
                          const LearnerConfig& config, long k, Rng& rng, PolicyMode mode,
                          const std::vector<Owner>* owners) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  const BetaTriple beta = beta_schedule(k, game.dim, H, config.lambda, config.delta,
                                        config.param_bound, config.episodes,
                                        config.constants);

  EpisodeRecord rec;
  rec.episode = k;
  rec.beta0 = beta.b0;
  rec.beta1 = beta.b1;
  rec.beta2 = beta.b2;
  rec.tables = plan_episode(game, reg, beta.b0, config.cce_epsilon, mode, owners);
  rec.confidence.reserve(H);
  for (int h = 0; h < H; ++h) rec.confidence.push_back(snapshot_confidence(reg, h));

  if (config.initial_state < 0 || config.initial_state >= S) {
    throw ConfigError("run_episode: initial state out of range");
  }
  int s = config.initial_state;
  rec.initial_state = s;
  rec.v_up_s1 = rec.tables.v_up[rec.tables.v_index(0, s)];
  rec.v_lo_s1 = rec.tables.v_lo[rec.tables.v_index(0, s)];

  std::vector<double> v2_up(S), v2_lo(S);
  rec.steps.reserve(H);
  for (int h = 0; h < H; ++h) {
    const double* joint = rec.tables.joint.data() + rec.tables.q_index(h, s, 0, 0);
    const int pair = sample_categorical(joint, A * B, rng.uniform());
    const int a = pair / B;
    const int b = pair % B;
    const int s_next = sample_next_state(game, h, s, a, b, rng);

    const std::span<const double> v_up_next{rec.tables.v_up_row(h + 1),
                                            static_cast<size_t>(S)};
    const std::span<const double> v_lo_next{rec.tables.v_lo_row(h + 1),
                                            static_cast<size_t>(S)};
    for (int sp = 0; sp < S; ++sp) {
      v2_up[sp] = v_up_next[sp] * v_up_next[sp];
      v2_lo[sp] = v_lo_next[sp] * v_lo_next[sp];
    }

    StepStats step;
    step.s = s;
    step.a = a;
    step.b = b;
    step.s_next = s_next;
    step.up = update_side(reg.up.steps[h], phi_v(game, v_up_next, s, a, b),
                          v_up_next[s_next], phi_v(game, v2_up, s, a, b), v2_up[s_next],
                          beta.b0, beta.b1, beta.b2, H, config.floor);
    step.lo = update_side(reg.lo.steps[h], phi_v(game, v_lo_next, s, a, b),
                          v_lo_next[s_next], phi_v(game, v2_lo, s, a, b), v2_lo[s_next],
                          beta.b0, beta.b1, beta.b2, H, config.floor);
    rec.steps.push_back(std::move(step));
    s = s_next;
  }
  return rec;
}

EpisodeRecord run_turn_based_episode(const TurnBasedGame& game, RegressionState& reg,
                                     const LearnerConfig& config, long k, Rng& rng) {
  const int S = game.num_states, A = game.num_actions, H = game.horizon;
  if (reg.dim != game.dim || reg.horizon != H) {
    throw ConfigError("run_turn_based_episode: regression state mismatch");
  }
  const BetaTriple beta = beta_schedule(k, game.dim, H, config.lambda, config.delta,
                                        config.param_bound, config.episodes,
                                        config.constants);

  EpisodeRecord rec;
  rec.episode = k;
  rec.beta0 = beta.b0;
  rec.beta1 = beta.b1;
  rec.beta2 = beta.b2;

  // Single-action planning tables; the joint/pi/nu views use A_max=A_min=A
  // with point-mass policies on the owner's greedy action.
  PlanningTables t;
  t.horizon = H;
  t.num_states = S;
  t.actions_max = A;
  t.actions_min = A;
  t.q_up.assign(static_cast<std::size_t>(H) * S * A * A, 0.0);
  t.q_lo.assign(static_cast<std::size_t>(H) * S * A * A, 0.0);
  t.v_up.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  t.v_lo.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  t.joint.assign(static_cast<std::size_t>(H) * S * A * A, 0.0);
  t.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  t.nu.assign(static_cast<std::size_t>(H) * S * A, 0.0);

  const double Hd = static_cast<double>(H);
  std::vector<double> q_up_s(A), q_lo_s(A);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    const std::span<const double> v_up_next{t.v_up_row(h + 1), static_cast<size_t>(S)};
    const std::span<const double> v_lo_next{t.v_lo_row(h + 1), static_cast<size_t>(S)};
    const StepRegression& up = reg.up.steps[h];
    const StepRegression& lo = reg.lo.steps[h];
    const SpdFactor up_factor = up.cov0.factor();
    const SpdFactor lo_factor = lo.cov0.factor();
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const Eigen::VectorXd phi_up = phi_v(game, v_up_next, s, a);
        const Eigen::VectorXd phi_lo = phi_v(game, v_lo_next, s, a);
        const double r = game.reward(h, s, a);
        q_up_s[a] = clamp(r + up.theta0.dot(phi_up) + beta.b0 * up_factor.inverse_norm(phi_up),
                          -Hd, Hd);
        q_lo_s[a] = clamp(r + lo.theta0.dot(phi_lo) - beta.b0 * lo_factor.inverse_norm(phi_lo),
                          -Hd, Hd);
      }
      const bool max_owned = game.owner[s] == Owner::Max;
      const int act = max_owned ? argmax_lowest(q_up_s.data(), A)
                                : argmin_lowest(q_lo_s.data(), A);
      greedy[static_cast<std::size_t>(h) * S + s] = act;
      t.v_up[t.v_index(h, s)] = q_up_s[act];
      t.v_lo[t.v_index(h, s)] = q_lo_s[act];
      // Both Q views replicate the single-action tables across the dummy axis
      // so the record has the same shape as the simultaneous variant.
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          const int own = max_owned ? a : b;
          t.q_up[t.q_index(h, s, a, b)] = q_up_s[own];
          t.q_lo[t.q_index(h, s, a, b)] = q_lo_s[own];
        }
      }
      const int ja = max_owned ? act : 0;
      const int jb = max_owned ? 0 : act;
      t.joint[t.q_index(h, s, ja, jb)] = 1.0;
      t.pi[(static_cast<std::size_t>(h) * S + s) * A + ja] = 1.0;
      t.nu[(static_cast<std::size_t>(h) * S + s) * A + jb] = 1.0;
    }
  }

  rec.confidence.reserve(H);
  for (int h = 0; h < H; ++h) rec.confidence.push_back(snapshot_confidence(reg, h));

  if (config.initial_state < 0 || config.initial_state >= S) {
    throw ConfigError("run_turn_based_episode: initial state out of range");
  }
  int s = config.initial_state;
  rec.initial_state = s;
  rec.v_up_s1 = t.v_up[t.v_index(0, s)];
  rec.v_lo_s1 = t.v_lo[t.v_index(0, s)];

  std::vector<double> point_mass(A);
  std::vector<double> v2_up(S), v2_lo(S);
  rec.steps.reserve(H);
  for (int h = 0; h < H; ++h) {
    const int act = greedy[static_cast<std::size_t>(h) * S + s];
    // Drawing from the point mass consumes one uniform, keeping the stream
    // aligned with the embedded simultaneous run.
    std::fill(point_mass.begin(), point_mass.end(), 0.0);
    point_mass[act] = 1.0;
    const int taken = sample_categorical(point_mass.data(), A, rng.uniform());
    const int s_next = sample_next_state(game, h, s, taken, rng);

    const std::span<const double> v_up_next{t.v_up_row(h + 1), static_cast<size_t>(S)};
    const std::span<const double> v_lo_next{t.v_lo_row(h + 1), static_cast<size_t>(S)};
    for (int sp = 0; sp < S; ++sp) {
      v2_up[sp] = v_up_next[sp] * v_up_next[sp];
      v2_lo[sp] = v_lo_next[sp] * v_lo_next[sp];
    }

    StepStats step;
    step.s = s;
    const bool max_owned = game.owner[s] == Owner::Max;
    step.a = max_owned ? taken : 0;
    step.b = max_owned ? 0 : taken;
    step.s_next = s_next;
    step.up = update_side(reg.up.steps[h], phi_v(game, v_up_next, s, taken),
                          v_up_next[s_next], phi_v(game, v2_up, s, taken), v2_up[s_next],
                          beta.b0, beta.b1, beta.b2, H, config.floor);
    step.lo = update_side(reg.lo.steps[h], phi_v(game, v_lo_next, s, taken),
                          v_lo_next[s_next], phi_v(game, v2_lo, s, taken), v2_lo[s_next],
                          beta.b0, beta.b1, beta.b2, H, config.floor);
    rec.steps.push_back(std::move(step));
    s = s_next;
  }
  rec.tables = std::move(t);
  return rec;
}

}  // namespace nashmg
