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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "nashmg/equilibrium.hpp"
#include "nashmg/errors.hpp"
#include "nashmg/rng.hpp"
#include "oracles.hpp"

using namespace nashmg;

namespace {

Eigen::MatrixXd mat22(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::MatrixXd random_payoff(int rows, int cols, double span, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = span * (2.0 * rng.uniform() - 1.0);
  }
  return m;
}

}  // namespace

TEST_CASE("lp_solve one-dimensional box") {
  LpProblem lp;
  lp.maximize = Eigen::VectorXd::Ones(1);
  lp.a_ub = Eigen::MatrixXd::Ones(1, 1);
  lp.b_ub = Eigen::VectorXd::Ones(1);
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp_solve handles duplicated and degenerate constraints") {
  LpProblem lp;
  lp.maximize = Eigen::VectorXd::Ones(2);
  lp.a_ub = Eigen::MatrixXd(4, 2);
  lp.a_ub << 1, 1, 1, 1, 1, 0, 1, 0;  // duplicates on purpose
  lp.b_ub = Eigen::VectorXd(4);
  lp.b_ub << 1, 1, 0.5, 0.5;
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp_solve flags infeasible and unbounded problems") {
  LpProblem infeasible;
  infeasible.maximize = Eigen::VectorXd::Ones(1);
  infeasible.a_ub = -Eigen::MatrixXd::Ones(1, 1);
  infeasible.b_ub = -Eigen::VectorXd::Ones(1) * 2.0;  // -x <= -2 with x <= 1
  infeasible.a_ub.conservativeResize(2, 1);
  infeasible.a_ub(1, 0) = 1.0;
  infeasible.b_ub.conservativeResize(2);
  infeasible.b_ub[1] = 1.0;
  CHECK(lp_solve(infeasible).status == LpStatus::Infeasible);

  LpProblem unbounded;
  unbounded.maximize = Eigen::VectorXd::Ones(1);
  unbounded.a_ub = -Eigen::MatrixXd::Ones(1, 1);
  unbounded.b_ub = Eigen::VectorXd::Ones(1);
  CHECK(lp_solve(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("lp_solve matches vertex enumeration on random feasible problems") {
  Rng rng(17);
  int solved = 0;
  while (solved < 50) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4.999);  // 2..6
    const int m = 2 + static_cast<int>(rng.uniform() * 6.999);  // 2..8
    LpProblem lp;
    lp.maximize = Eigen::VectorXd(n);
    for (int j = 0; j < n; ++j) lp.maximize[j] = 2.0 * rng.uniform() - 1.0;
    lp.a_ub = Eigen::MatrixXd(m, n);
    lp.b_ub = Eigen::VectorXd(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) lp.a_ub(i, j) = 2.0 * rng.uniform() - 1.0;
      lp.b_ub[i] = rng.uniform();  // nonnegative rhs keeps x=0 feasible
    }
    // Cap every variable so the problem is bounded.
    lp.a_ub.conservativeResize(m + n, n);
    lp.b_ub.conservativeResize(m + n);
    for (int j = 0; j < n; ++j) {
      lp.a_ub.row(m + j).setZero();
      lp.a_ub(m + j, j) = 1.0;
      lp.b_ub[m + j] = 1.0 + rng.uniform();
    }
    const LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    const double oracle =
        oracles::vertex_enumeration_lp(lp.maximize, lp.a_ub, lp.b_ub);
    CHECK(std::abs(sol.objective - oracle) <= 1e-7);
    ++solved;
  }
}

TEST_CASE("epsilon_cce on a 1x1 game is the point mass") {
  const Eigen::MatrixXd q = Eigen::MatrixXd::Constant(1, 1, 0.3);
  const JointDistribution sigma = epsilon_cce(q, q, 0.0);
  CHECK(sigma.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matching pennies: uniform joint satisfies both families exactly") {
  const Eigen::MatrixXd q = mat22(1, -1, -1, 1);
  JointDistribution uniform{2, 2, {0.25, 0.25, 0.25, 0.25}};
  const CceCheck check = verify_cce(uniform, q, q, 0.0);
  CHECK(check.ok);
  CHECK(std::abs(check.worst_violation) <= 1e-12);

  const JointDistribution sigma = epsilon_cce(q, q, 0.0);
  CHECK(verify_cce(sigma, q, q, 0.0).ok);
}

TEST_CASE("dominated row forces mass onto it") {
  const Eigen::MatrixXd q_max = mat22(1, 1, 0, 0);
  const Eigen::MatrixXd q_min = Eigen::MatrixXd::Zero(2, 2);
  const JointDistribution sigma = epsilon_cce(q_max, q_min, 0.1);
  const double row0 = sigma.at(0, 0) + sigma.at(0, 1);
  CHECK(row0 >= 0.9 - 1e-9);
  CHECK(verify_cce(sigma, q_max, q_min, 0.1).ok);
}

TEST_CASE("marginals of simple tables") {
  JointDistribution uniform{2, 2, {0.25, 0.25, 0.25, 0.25}};
  const MarginalPair mu = marginals(uniform);
  CHECK(mu.row[0] == doctest::Approx(0.5));
  CHECK(mu.col[1] == doctest::Approx(0.5));

  JointDistribution point{2, 2, {0, 0, 1, 0}};  // mass at (a=1, b=0)
  const MarginalPair mp = marginals(point);
  CHECK(mp.row[0] == doctest::Approx(0.0));
  CHECK(mp.row[1] == doctest::Approx(1.0));
  CHECK(mp.col[0] == doctest::Approx(1.0));
  CHECK(mp.col[1] == doctest::Approx(0.0));
}

TEST_CASE("marginals of a correlated table resum to one and differ from product") {
  JointDistribution sigma{2, 2, {0.5, 0.0, 0.0, 0.5}};
  const MarginalPair m = marginals(sigma);
  CHECK(m.row[0] + m.row[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.col[0] + m.col[1] == doctest::Approx(1.0).epsilon(1e-12));
  // E_sigma of the XOR payoff differs from the product-of-marginals mean.
  const Eigen::MatrixXd q = mat22(1, 0, 0, 1);
  double joint_mean = 0.0, product_mean = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      joint_mean += sigma.at(a, b) * q(a, b);
      product_mean += m.row[a] * m.col[b] * q(a, b);
    }
  }
  CHECK(joint_mean == doctest::Approx(1.0));
  CHECK(product_mean == doctest::Approx(0.5));
}

TEST_CASE("verify_cce rejects a dominated point mass and accepts vacuous epsilon") {
  const Eigen::MatrixXd q_max = mat22(1, 1, 0, 0);
  const Eigen::MatrixXd q_min = Eigen::MatrixXd::Zero(2, 2);
  JointDistribution bottom{2, 2, {0, 0, 0.5, 0.5}};
  const CceCheck fail = verify_cce(bottom, q_max, q_min, 0.0);
  CHECK_FALSE(fail.ok);
  CHECK(fail.worst_violation == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verify_cce(bottom, q_max, q_min, 2.0).ok);
}

TEST_CASE("zero_sum_value closed forms") {
  CHECK(zero_sum_value(Eigen::MatrixXd::Constant(1, 1, -0.7)).value ==
        doctest::Approx(-0.7));

  const ZeroSumSolution pennies = zero_sum_value(mat22(1, -1, -1, 1));
  CHECK(pennies.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pennies.row_strategy[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pennies.col_strategy[0] == doctest::Approx(0.5).epsilon(1e-9));

  // With x the first-row weight, equalizing 1 + 2x = 2 - x gives x = 1/3 and
  // value 5/3.
  const ZeroSumSolution g = zero_sum_value(mat22(3, 1, 1, 2));
  CHECK(g.value == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
  CHECK(g.row_strategy[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(g.row_strategy[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("zero_sum_value satisfies the minimax sandwich and equivariance") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 4);
    const int cols = 1 + static_cast<int>(rng.uniform() * 4);
    const Eigen::MatrixXd q = random_payoff(rows, cols, 3.0, rng);
    const ZeroSumSolution sol = zero_sum_value(q);
    const double maximin = q.rowwise().minCoeff().maxCoeff();
    const double minimax = q.colwise().maxCoeff().minCoeff();
    CHECK(sol.value >= maximin - 1e-8);
    CHECK(sol.value <= minimax + 1e-8);

    const double alpha = 0.5 + rng.uniform();
    const double beta = 2.0 * rng.uniform() - 1.0;
    const ZeroSumSolution scaled =
        zero_sum_value((alpha * q.array() + beta).matrix());
    CHECK(scaled.value == doctest::Approx(alpha * sol.value + beta).epsilon(1e-7));
  }
}

TEST_CASE("zero-sum NE product strategy is a 0-CCE of the pair") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 3);
    const Eigen::MatrixXd q = random_payoff(n, n, 2.0, rng);
    const ZeroSumSolution sol = zero_sum_value(q);
    JointDistribution product{n, n, std::vector<double>(static_cast<size_t>(n) * n)};
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        product.at(a, b) = sol.row_strategy[a] * sol.col_strategy[b];
      }
    }
    CHECK(verify_cce(product, q, q, 0.0).ok);
  }
}

TEST_CASE("epsilon_cce output always verifies on random payoff pairs") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 5.999);
    const int cols = 1 + static_cast<int>(rng.uniform() * 5.999);
    const Eigen::MatrixXd q_max = random_payoff(rows, cols, 5.0, rng);
    const Eigen::MatrixXd q_min = random_payoff(rows, cols, 5.0, rng);
    const double eps = trial % 2 == 0 ? 0.0 : 0.1;
    const JointDistribution sigma = epsilon_cce(q_max, q_min, eps);
    double total = 0.0;
    for (double p : sigma.p) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(verify_cce(sigma, q_max, q_min, eps).ok);
  }
}
