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

#ifndef NASHMG_EQUILIBRIUM_HPP_
#define NASHMG_EQUILIBRIUM_HPP_

#include <Eigen/Dense>
#include <vector>

namespace nashmg {

// Joint action distribution over A_max x A_min, stored row-major
// (max-player actions index rows).
struct JointDistribution {
  int rows = 0;
  int cols = 0;
  std::vector<double> p;

  double at(int a, int b) const { return p[static_cast<size_t>(a) * cols + b]; }
  double& at(int a, int b) { return p[static_cast<size_t>(a) * cols + b]; }
};

struct MarginalPair {
  std::vector<double> row;  // distribution over A_max
  std::vector<double> col;  // distribution over A_min
};

struct CceCheck {
  bool ok = false;
  // Largest constraint excess before the epsilon allowance; negative means
  // slack on every constraint.
  double worst_violation = 0.0;
};

struct ZeroSumSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

// ---------------------------------------------------------------------------
// Dense LP core: primal simplex with Bland's rule, two phases. Intended for
// desk-scale problems (<= 200 variables / constraints).

enum class LpStatus { Optimal, Infeasible, Unbounded };

// maximize c^T x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
struct LpProblem {
  Eigen::VectorXd maximize;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

LpSolution lp_solve(const LpProblem& problem);

// ---------------------------------------------------------------------------
// Equilibrium routines on bimatrix payoffs. q_max is the payoff the
// row player wants large, q_min the payoff the column player wants small;
// both are |A_max| x |A_min|.

// Joint distribution sigma with
//   E_sigma q_max >= max_a' E_{b~col marginal} q_max(a',b) - epsilon
//   E_sigma q_min <= min_b' E_{a~row marginal} q_min(a,b') + epsilon.
// Solved as a feasibility LP maximizing the minimum constraint slack; the
// optimum slack is always >= 0 because a Nash point of the bimatrix game
// (q_max, -q_min) satisfies both families exactly.
JointDistribution epsilon_cce(const Eigen::MatrixXd& q_max,
                              const Eigen::MatrixXd& q_min, double epsilon);

MarginalPair marginals(const JointDistribution& sigma);

CceCheck verify_cce(const JointDistribution& sigma, const Eigen::MatrixXd& q_max,
                    const Eigen::MatrixXd& q_min, double epsilon);

// Exact value and optimal mixed strategies of the zero-sum matrix game with
// row-player payoff `payoff`. Strong duality between the row and column LPs
// is checked to 1e-8.
ZeroSumSolution zero_sum_value(const Eigen::MatrixXd& payoff);

}  // namespace nashmg

#endif  // NASHMG_EQUILIBRIUM_HPP_
