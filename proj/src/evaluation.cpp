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

#include "nashmg/evaluation.hpp"

#include <cmath>

#include "nashmg/equilibrium.hpp"
#include "nashmg/errors.hpp"

namespace nashmg {
namespace {

ValueTable zero_table(int horizon, int num_states) {
  ValueTable t;
  t.horizon = horizon;
  t.num_states = num_states;
  t.v.assign(static_cast<std::size_t>(horizon + 1) * num_states, 0.0);
  return t;
}

double expected_next(const LinearMixtureGame& game, int h, int s, int a, int b,
                     const double* values) {
  double acc = 0.0;
  for (int sp = 0; sp < game.num_states; ++sp) {
    acc += transition_prob(game, h, s, a, b, sp) * values[sp];
  }
  return acc;
}

void check_policy(const PolicyTable& p, int horizon, int num_states, int num_actions,
                  const char* name) {
  if (p.horizon != horizon || p.num_states != num_states || p.num_actions != num_actions) {
    throw ConfigError(std::string(name) + ": policy shape mismatch");
  }
}

}  // namespace

BestResponseValues best_response_value_max(const LinearMixtureGame& game,
                                           const PolicyTable& nu) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  check_policy(nu, H, S, B, "best_response_value_max");
  BestResponseValues out;
  out.v = zero_table(H, S);
  out.q.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = out.v.row(h + 1);
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double mean = 0.0;
        for (int b = 0; b < B; ++b) {
          const double q =
              game.reward(h, s, a, b) + expected_next(game, h, s, a, b, next);
          out.q[((static_cast<std::size_t>(h) * S + s) * A + a) * B + b] = q;
          mean += nu.at(h, s, b) * q;
        }
        best = std::max(best, mean);
      }
      out.v.at(h, s) = best;
    }
  }
  return out;
}

BestResponseValues best_response_value_min(const LinearMixtureGame& game,
                                           const PolicyTable& pi) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  check_policy(pi, H, S, A, "best_response_value_min");
  BestResponseValues out;
  out.v = zero_table(H, S);
  out.q.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = out.v.row(h + 1);
    for (int s = 0; s < S; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int b = 0; b < B; ++b) {
        double mean = 0.0;
        for (int a = 0; a < A; ++a) {
          const double q =
              game.reward(h, s, a, b) + expected_next(game, h, s, a, b, next);
          out.q[((static_cast<std::size_t>(h) * S + s) * A + a) * B + b] = q;
          mean += pi.at(h, s, a) * q;
        }
        best = std::min(best, mean);
      }
      out.v.at(h, s) = best;
    }
  }
  return out;
}

NashValues nash_value(const LinearMixtureGame& game) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  NashValues out;
  out.v = zero_table(H, S);
  out.row_strategy = PolicyTable{H, S, A,
                                 std::vector<double>(static_cast<std::size_t>(H) * S * A)};
  out.col_strategy = PolicyTable{H, S, B,
                                 std::vector<double>(static_cast<std::size_t>(H) * S * B)};
  Eigen::MatrixXd q(A, B);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = out.v.row(h + 1);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          q(a, b) = game.reward(h, s, a, b) + expected_next(game, h, s, a, b, next);
        }
      }
      const ZeroSumSolution sol = zero_sum_value(q);
      out.v.at(h, s) = sol.value;
      for (int a = 0; a < A; ++a) out.row_strategy.at(h, s, a) = sol.row_strategy[a];
      for (int b = 0; b < B; ++b) out.col_strategy.at(h, s, b) = sol.col_strategy[b];
    }
  }
  return out;
}

ValueTable joint_policy_value(const LinearMixtureGame& game, std::span<const double> mu) {
  const int S = game.num_states, A = game.num_actions_max, B = game.num_actions_min;
  const int H = game.horizon;
  if (mu.size() != static_cast<std::size_t>(H) * S * A * B) {
    throw ConfigError("joint_policy_value: mu shape mismatch");
  }
  ValueTable t = zero_table(H, S);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = t.row(h + 1);
    for (int s = 0; s < S; ++s) {
      double value = 0.0;
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          const double p =
              mu[((static_cast<std::size_t>(h) * S + s) * A + a) * B + b];
          if (p == 0.0) continue;
          value += p * (game.reward(h, s, a, b) + expected_next(game, h, s, a, b, next));
        }
      }
      t.at(h, s) = value;
    }
  }
  return t;
}

double episode_gap(const LinearMixtureGame& game, const PolicyTable& pi,
                   const PolicyTable& nu, int s1) {
  if (s1 < 0 || s1 >= game.num_states) throw ConfigError("episode_gap: bad initial state");
  const BestResponseValues vs_nu = best_response_value_max(game, nu);
  const BestResponseValues vs_pi = best_response_value_min(game, pi);
  const double gap = vs_nu.v.at(0, s1) - vs_pi.v.at(0, s1);
  if (gap < -1e-9) {
    throw NumericError("episode_gap: weak duality violated, oracle inconsistency");
  }
  return gap;
}

double true_variance(const LinearMixtureGame& game, int h, int s, int a, int b,
                     std::span<const double> values) {
  if (static_cast<int>(values.size()) != game.num_states) {
    throw ConfigError("true_variance: value table shape mismatch");
  }
  double first = 0.0;
  double mean = 0.0;
  for (int sp = 0; sp < game.num_states; ++sp) {
    const double p = transition_prob(game, h, s, a, b, sp);
    first += p * values[sp] * values[sp];
    mean += p * values[sp];
  }
  return first - mean * mean;
}

Certificate policy_certificate(std::span<const long> episodes,
                               std::span<const double> gaps) {
  if (episodes.empty() || episodes.size() != gaps.size()) {
    throw ConfigError("policy_certificate: need matching non-empty series");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] < gaps[best]) best = i;
  }
  return Certificate{episodes[best], gaps[best]};
}

RunMonitor::RunMonitor(const LinearMixtureGame* game, const LearnerConfig* config,
                       bool events_enabled)
    : game_(game), config_(config), events_enabled_(events_enabled) {
  e1_suffix_sums_.assign(game->horizon, 0.0);
}

void RunMonitor::observe(const EpisodeRecord& rec) {
  const int H = game_->horizon;
  const int S = game_->num_states;
  ++episodes_;

  // Confidence membership of theta* in both (0)-ellipsoids at this episode.
  bool member = true;
  for (int h = 0; h < H && member; ++h) {
    const StepConfidence& c = rec.confidence[h];
    const Eigen::VectorXd du = game_->theta[h] - c.theta_up;
    const Eigen::VectorXd dl = game_->theta[h] - c.theta_lo;
    const double radius_up = std::sqrt(du.dot(c.cov_up * du));
    const double radius_lo = std::sqrt(dl.dot(c.cov_lo * dl));
    member = radius_up <= rec.beta0 && radius_lo <= rec.beta0;
  }
  last_membership_ = member;
  membership_all_ = membership_all_ && member;
  if (!events_enabled_) return;

  // E1 summands c_h = P_h(V_up - V_lo)(s,a,b) - (V_up - V_lo)(s_{h+1}),
  // folded into every suffix sum starting at h' <= h.
  std::vector<double> diff(S);
  double suffix = 0.0;
  std::vector<double> c(H, 0.0);
  for (int h = 0; h < H; ++h) {
    const StepStats& st = rec.steps[h];
    const double* vu = rec.tables.v_up_row(h + 1);
    const double* vl = rec.tables.v_lo_row(h + 1);
    for (int sp = 0; sp < S; ++sp) diff[sp] = vu[sp] - vl[sp];
    double expected = 0.0;
    for (int sp = 0; sp < S; ++sp) {
      expected += transition_prob(*game_, h, st.s, st.a, st.b, sp) * diff[sp];
    }
    c[h] = expected - diff[st.s_next];
  }
  for (int hp = H - 1; hp >= 0; --hp) {
    suffix += c[hp];
    e1_suffix_sums_[hp] += suffix;
  }

  // E2: total true variance of the joint-policy value along the trajectory.
  const ValueTable vmu = joint_policy_value(*game_, rec.tables.joint);
  for (int h = 0; h < H; ++h) {
    const StepStats& st = rec.steps[h];
    const std::span<const double> next{vmu.row(h + 1), static_cast<std::size_t>(S)};
    e2_sum_ += true_variance(*game_, h, st.s, st.a, st.b, next);
  }

  // Variance-offset deviation against the true kernel, both sides.
  for (int h = 0; h < H; ++h) {
    const StepStats& st = rec.steps[h];
    const std::span<const double> vu{rec.tables.v_up_row(h + 1),
                                     static_cast<std::size_t>(S)};
    const std::span<const double> vl{rec.tables.v_lo_row(h + 1),
                                     static_cast<std::size_t>(S)};
    const double tv_up = true_variance(*game_, h, st.s, st.a, st.b, vu);
    const double tv_lo = true_variance(*game_, h, st.s, st.a, st.b, vl);
    var_checked_ += 2;
    if (std::abs(st.up.var_est - tv_up) > st.up.offset + 1e-9) ++var_violations_;
    if (std::abs(st.lo.var_est - tv_lo) > st.lo.offset + 1e-9) ++var_violations_;
  }
}

double RunMonitor::e1_margin() const {
  const double H = static_cast<double>(game_->horizon);
  const double T = static_cast<double>(episodes_) * H;
  if (episodes_ == 0) return 0.0;
  const double bound = 8.0 * H * std::sqrt(2.0 * T * std::log(H / config_->delta));
  double worst = e1_suffix_sums_[0];
  for (double v : e1_suffix_sums_) worst = std::max(worst, v);
  return bound - worst;
}

double RunMonitor::e2_margin() const {
  const double H = static_cast<double>(game_->horizon);
  const double T = static_cast<double>(episodes_) * H;
  if (episodes_ == 0) return 0.0;
  const double bound = 3.0 * (H * T + H * H * H * std::log(1.0 / config_->delta));
  return bound - e2_sum_;
}

}  // namespace nashmg
