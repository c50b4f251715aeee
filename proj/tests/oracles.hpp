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

// Independent brute-force oracles used only by tests. Everything here is
// deliberately written against the raw definitions (exhaustive enumeration,
// assembled normal equations, dense inversion) and never calls the
// implementation paths it is checking.

#ifndef NASHMG_TESTS_ORACLES_HPP_
#define NASHMG_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "nashmg/game_model.hpp"

namespace nashmg::oracles {

// Weighted ridge normal equations assembled from the full sample history.
inline Eigen::VectorXd batch_ridge(double lambda,
                                   const std::vector<Eigen::VectorXd>& xs,
                                   const std::vector<double>& ys,
                                   const std::vector<double>& ws) {
  const int d = static_cast<int>(xs.empty() ? 0 : xs.front().size());
  Eigen::MatrixXd sigma = lambda * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sigma.noalias() += ws[j] * xs[j] * xs[j].transpose();
    b.noalias() += ws[j] * ys[j] * xs[j];
  }
  return sigma.ldlt().solve(b);
}

// Exhaustive vertex enumeration for maximize c^T x, A x <= b, x >= 0 with a
// handful of variables. Returns -inf when infeasible.
inline double vertex_enumeration_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                                    const Eigen::VectorXd& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  const int total = m + n;  // inequality rows then nonnegativity rows
  std::vector<int> pick(n);
  double best = -std::numeric_limits<double>::infinity();

  const auto feasible = [&](const Eigen::VectorXd& x) {
    for (int i = 0; i < m; ++i) {
      if (a.row(i).dot(x) > b[i] + 1e-7) return false;
    }
    for (int j = 0; j < n; ++j) {
      if (x[j] < -1e-7) return false;
    }
    return true;
  };

  const std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd rows(n, n);
      Eigen::VectorXd rhs(n);
      for (int j = 0; j < n; ++j) {
        const int idx = pick[j];
        if (idx < m) {
          rows.row(j) = a.row(idx);
          rhs[j] = b[idx];
        } else {
          rows.row(j).setZero();
          rows(j, idx - m) = 1.0;
          rhs[j] = 0.0;
        }
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (feasible(x)) best = std::max(best, c.dot(x));
      return;
    }
    for (int i = start; i < total; ++i) {
      pick[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

// Kernel probabilities straight from the instance data.
inline double kernel_prob(const LinearMixtureGame& g, int h, int s, int a, int b, int sp) {
  return g.feature(s, a, b, sp).dot(g.theta[h]);
}

// Policy evaluation of a deterministic max policy against a fixed stochastic
// min policy; policies indexed [h][s].
inline double deterministic_pair_value(const LinearMixtureGame& g,
                                       const std::vector<int>& max_policy,
                                       const std::vector<double>& nu, int s1) {
  const int S = g.num_states, B = g.num_actions_min, H = g.horizon;
  std::vector<double> value(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      const int a = max_policy[static_cast<std::size_t>(h) * S + s];
      double acc = 0.0;
      for (int b = 0; b < B; ++b) {
        double q = g.reward(h, s, a, b);
        for (int sp = 0; sp < S; ++sp) q += kernel_prob(g, h, s, a, b, sp) * value[sp];
        acc += nu[(static_cast<std::size_t>(h) * S + s) * B + b] * q;
      }
      next[s] = acc;
    }
    value = std::move(next);
  }
  return value[s1];
}

// max over all deterministic Markov max policies of V^{pi,nu}(s1).
inline double brute_force_best_response_max(const LinearMixtureGame& g,
                                            const std::vector<double>& nu, int s1) {
  const int S = g.num_states, A = g.num_actions_max, H = g.horizon;
  const int cells = H * S;
  long combos = 1;
  for (int i = 0; i < cells; ++i) combos *= A;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> policy(cells, 0);
  for (long code = 0; code < combos; ++code) {
    long rest = code;
    for (int i = 0; i < cells; ++i) {
      policy[i] = static_cast<int>(rest % A);
      rest /= A;
    }
    best = std::max(best, deterministic_pair_value(g, policy, nu, s1));
  }
  return best;
}

// Mirror: min over deterministic min policies of V^{pi,nu}(s1), pi stochastic.
inline double brute_force_best_response_min(const LinearMixtureGame& g,
                                            const std::vector<double>& pi, int s1) {
  const int S = g.num_states, A = g.num_actions_max, B = g.num_actions_min, H = g.horizon;
  const int cells = H * S;
  long combos = 1;
  for (int i = 0; i < cells; ++i) combos *= B;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> policy(cells, 0);
  for (long code = 0; code < combos; ++code) {
    long rest = code;
    for (int i = 0; i < cells; ++i) {
      policy[i] = static_cast<int>(rest % B);
      rest /= B;
    }
    std::vector<double> value(S, 0.0);
    for (int h = H - 1; h >= 0; --h) {
      std::vector<double> next(S, 0.0);
      for (int s = 0; s < S; ++s) {
        const int b = policy[static_cast<std::size_t>(h) * S + s];
        double acc = 0.0;
        for (int a = 0; a < A; ++a) {
          double q = g.reward(h, s, a, b);
          for (int sp = 0; sp < S; ++sp) q += kernel_prob(g, h, s, a, b, sp) * value[sp];
          acc += pi[(static_cast<std::size_t>(h) * S + s) * A + a] * q;
        }
        next[s] = acc;
      }
      value = std::move(next);
    }
    best = std::min(best, value[s1]);
  }
  return best;
}

// Finite-horizon optimal values of a single-agent MDP, plus evaluation of a
// fixed stochastic policy.
inline std::vector<double> mdp_optimal_values(const LinearMixtureMdp& m) {
  const int S = m.num_states, A = m.num_actions, H = m.horizon;
  std::vector<double> value(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double q = m.reward(h, s, a);
        const double* feat = m.features.data() + m.feature_offset(s, a, 0);
        for (int sp = 0; sp < S; ++sp) {
          double p = 0.0;
          for (int i = 0; i < m.dim; ++i) p += feat[static_cast<std::size_t>(sp) * m.dim + i] * m.theta[h][i];
          q += p * value[sp];
        }
        best = std::max(best, q);
      }
      next[s] = best;
    }
    value = std::move(next);
  }
  return value;
}

inline std::vector<double> mdp_policy_values(const LinearMixtureMdp& m,
                                             const std::vector<double>& pi) {
  const int S = m.num_states, A = m.num_actions, H = m.horizon;
  std::vector<double> value(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double acc = 0.0;
      for (int a = 0; a < A; ++a) {
        double q = m.reward(h, s, a);
        const double* feat = m.features.data() + m.feature_offset(s, a, 0);
        for (int sp = 0; sp < S; ++sp) {
          double p = 0.0;
          for (int i = 0; i < m.dim; ++i) p += feat[static_cast<std::size_t>(sp) * m.dim + i] * m.theta[h][i];
          q += p * value[sp];
        }
        acc += pi[(static_cast<std::size_t>(h) * S + s) * A + a] * q;
      }
      next[s] = acc;
    }
    value = std::move(next);
  }
  return value;
}

// Backward induction value of a turn-based game: max at max-owned states, min
// at min-owned states.
inline std::vector<double> turn_based_optimal_values(const TurnBasedGame& g) {
  const int S = g.num_states, A = g.num_actions, H = g.horizon;
  std::vector<double> value(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      const bool maximize = g.owner[s] == Owner::Max;
      double best = maximize ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double q = g.reward(h, s, a);
        for (int sp = 0; sp < S; ++sp) {
          q += g.feature(s, a, sp).dot(g.theta[h]) * value[sp];
        }
        best = maximize ? std::max(best, q) : std::min(best, q);
      }
      next[s] = best;
    }
    value = std::move(next);
  }
  return value;
}

}  // namespace nashmg::oracles

#endif  // NASHMG_TESTS_ORACLES_HPP_
