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

#include "nashmg/equilibrium.hpp"

#include <cmath>
#include <limits>

#include "nashmg/errors.hpp"

namespace nashmg {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr long kIterationCap = 1000000;

// Tableau simplex in standard form: minimize c^T x, A x = b, x >= 0, b >= 0.
// Bland's rule on both the entering and leaving choices, which rules out
// cycling; the iteration cap is a hard backstop.
class Tableau {
 public:
  // Expects b >= 0 (the caller flips row signs).
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        t_(a.rows(), a.cols() + 1),
        basis_(a.rows()) {
    t_.leftCols(n_) = a;
    t_.col(n_) = b;
  }

  const std::vector<int>& basis() const { return basis_; }

  // Phase 1: append one artificial per row and drive their sum to zero.
  // Returns false when the constraints are infeasible.
  bool phase1() {
    Eigen::MatrixXd full(m_, n_ + m_ + 1);
    full.leftCols(n_) = t_.leftCols(n_);
    full.block(0, n_, m_, m_) = Eigen::MatrixXd::Identity(m_, m_);
    full.col(n_ + m_) = t_.col(n_);
    t_.swap(full);
    const int total = n_ + m_;
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
    cost.segment(n_, m_).setOnes();
    const double value = run(cost, total);
    if (value > 1e-7) return false;

    // Pivot any remaining artificial out of the basis; rows without a
    // structural pivot entry are redundant and get zeroed.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int pivot_col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotTol) {
          pivot_col = j;
          break;
        }
      }
      if (pivot_col >= 0) {
        pivot(i, pivot_col);
      } else {
        t_.row(i).setZero();
      }
    }

    Eigen::MatrixXd trimmed(m_, n_ + 1);
    trimmed.leftCols(n_) = t_.leftCols(n_);
    trimmed.col(n_) = t_.col(n_ + m_);
    t_.swap(trimmed);
    return true;
  }

  // Phase 2 over the structural + slack columns. Returns the objective value;
  // sets `unbounded` instead when a ray is found.
  double phase2(const Eigen::VectorXd& cost, bool* unbounded) {
    unbounded_ = false;
    const double value = run(cost, n_);
    *unbounded = unbounded_;
    return value;
  }

  Eigen::VectorXd extract(int count) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(count);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < count) x[basis_[i]] = t_(i, n_active_);
    }
    return x;
  }

 private:
  // Minimizes cost over the first `active` columns starting from the current
  // basis. Reduced costs are recomputed from the basis each iteration, which
  // is plenty fast at this scale and avoids objective-row drift.
  double run(const Eigen::VectorXd& cost, int active) {
    n_active_ = static_cast<int>(t_.cols()) - 1;
    for (long iter = 0; iter < kIterationCap; ++iter) {
      Eigen::VectorXd basic_cost(m_);
      for (int i = 0; i < m_; ++i) {
        basic_cost[i] = basis_[i] >= 0 && basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      }
      int entering = -1;
      for (int j = 0; j < active; ++j) {
        const double reduced = cost[j] - basic_cost.dot(t_.col(j));
        if (reduced < -kPivotTol) {
          entering = j;
          break;  // Bland: lowest index
        }
      }
      if (entering < 0) {
        double value = 0.0;
        for (int i = 0; i < m_; ++i) {
          if (basis_[i] >= 0 && basis_[i] < cost.size()) {
            value += cost[basis_[i]] * t_(i, n_active_);
          }
        }
        return value;
      }
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, entering);
        if (a > kPivotTol) {
          const double ratio = t_(i, n_active_) / a;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol &&
               (leaving < 0 || basis_[i] < basis_[leaving]))) {
            best_ratio = ratio;
            leaving = i;
          }
        }
      }
      if (leaving < 0) {
        unbounded_ = true;
        return 0.0;
      }
      pivot(leaving, entering);
    }
    throw NumericError("lp_solve: simplex iteration cap exceeded");
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[row] = col;
  }

  int m_;
  int n_;
  int n_active_ = 0;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  bool unbounded_ = false;
};

// Recomputes the basic solution of the final basis from the original
// constraint data, discarding the round-off the pivoting accumulated.
// Artificial indices (>= total) stand for unit columns of their row.
Eigen::VectorXd refine_basic_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      const std::vector<int>& basis, int keep,
                                      const Eigen::VectorXd& fallback) {
  const int m = static_cast<int>(a.rows());
  const int total = static_cast<int>(a.cols());
  Eigen::MatrixXd basis_mat = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const int col = basis[i];
    if (col < total) {
      basis_mat.col(i) = a.col(col);
    } else {
      basis_mat(col - total, i) = 1.0;
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
  if (!lu.isInvertible()) return fallback;
  const Eigen::VectorXd xb = lu.solve(b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(keep);
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= 0 && basis[i] < keep) x[basis[i]] = xb[i];
  }
  return x;
}

}  // namespace

LpSolution lp_solve(const LpProblem& problem) {
  const int n = static_cast<int>(problem.maximize.size());
  const int m_ub = static_cast<int>(problem.a_ub.rows());
  const int m_eq = static_cast<int>(problem.a_eq.rows());
  if (n == 0) throw ConfigError("lp_solve: empty problem");
  if ((m_ub > 0 && problem.a_ub.cols() != n) || (m_eq > 0 && problem.a_eq.cols() != n)) {
    throw ConfigError("lp_solve: constraint dimension mismatch");
  }
  if (n > 200 || m_ub + m_eq > 200) {
    throw ConfigError("lp_solve: problem exceeds desk-scale limits");
  }

  // Standard form with one slack per inequality row; rows flipped so b >= 0.
  const int total = n + m_ub;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m_ub + m_eq, total);
  Eigen::VectorXd b(m_ub + m_eq);
  for (int i = 0; i < m_ub; ++i) {
    a.row(i).head(n) = problem.a_ub.row(i);
    a(i, n + i) = 1.0;
    b[i] = problem.b_ub[i];
  }
  for (int i = 0; i < m_eq; ++i) {
    a.row(m_ub + i).head(n) = problem.a_eq.row(i);
    b[m_ub + i] = problem.b_eq[i];
  }
  for (int i = 0; i < m_ub + m_eq; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }

  Tableau tab(a, b);
  LpSolution out;
  if (!tab.phase1()) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  cost.head(n) = -problem.maximize;
  bool unbounded = false;
  tab.phase2(cost, &unbounded);
  if (unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x = refine_basic_solution(a, b, tab.basis(), n, tab.extract(n));
  out.objective = problem.maximize.dot(out.x);
  return out;
}

JointDistribution epsilon_cce(const Eigen::MatrixXd& q_max,
                              const Eigen::MatrixXd& q_min, double epsilon) {
  const int rows = static_cast<int>(q_max.rows());
  const int cols = static_cast<int>(q_max.cols());
  if (q_min.rows() != rows || q_min.cols() != cols) {
    throw ConfigError("epsilon_cce: payoff shape mismatch");
  }
  if (!q_max.allFinite() || !q_min.allFinite()) {
    throw NumericError("epsilon_cce: non-finite payoff");
  }
  if (epsilon < 0.0) throw ConfigError("epsilon_cce: negative epsilon");

  // Variables: sigma (row-major), then t+ and t-. Maximize t = t+ - t- where
  // t is the minimum slack over both deviation families.
  const int nv = rows * cols + 2;
  const int tp = rows * cols;
  const int tm = rows * cols + 1;
  LpProblem lp;
  lp.maximize = Eigen::VectorXd::Zero(nv);
  lp.maximize[tp] = 1.0;
  lp.maximize[tm] = -1.0;
  lp.a_ub = Eigen::MatrixXd::Zero(rows + cols, nv);
  lp.b_ub = Eigen::VectorXd::Zero(rows + cols);
  for (int dev = 0; dev < rows; ++dev) {
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) {
        lp.a_ub(dev, a * cols + b) = q_max(dev, b) - q_max(a, b);
      }
    }
    lp.a_ub(dev, tp) = 1.0;
    lp.a_ub(dev, tm) = -1.0;
  }
  for (int dev = 0; dev < cols; ++dev) {
    for (int a = 0; a < rows; ++a) {
      for (int b = 0; b < cols; ++b) {
        lp.a_ub(rows + dev, a * cols + b) = q_min(a, b) - q_min(a, dev);
      }
    }
    lp.a_ub(rows + dev, tp) = 1.0;
    lp.a_ub(rows + dev, tm) = -1.0;
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, nv);
  lp.a_eq.row(0).head(rows * cols).setOnes();
  lp.b_eq = Eigen::VectorXd::Ones(1);

  const LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) {
    throw NumericError("epsilon_cce: LP did not reach an optimum");
  }
  if (sol.objective < -(epsilon + 1e-9)) {
    throw NumericError("epsilon_cce: max-slack below -epsilon, invariant violated");
  }

  JointDistribution sigma;
  sigma.rows = rows;
  sigma.cols = cols;
  sigma.p.assign(static_cast<size_t>(rows) * cols, 0.0);
  double total = 0.0;
  for (int i = 0; i < rows * cols; ++i) {
    const double v = sol.x[i] < 1e-12 ? 0.0 : sol.x[i];
    sigma.p[i] = v;
    total += v;
  }
  if (total <= 0.0) throw NumericError("epsilon_cce: degenerate distribution");
  for (double& v : sigma.p) v /= total;
  return sigma;
}

MarginalPair marginals(const JointDistribution& sigma) {
  MarginalPair m;
  m.row.assign(sigma.rows, 0.0);
  m.col.assign(sigma.cols, 0.0);
  for (int a = 0; a < sigma.rows; ++a) {
    for (int b = 0; b < sigma.cols; ++b) {
      m.row[a] += sigma.at(a, b);
      m.col[b] += sigma.at(a, b);
    }
  }
  return m;
}

CceCheck verify_cce(const JointDistribution& sigma, const Eigen::MatrixXd& q_max,
                    const Eigen::MatrixXd& q_min, double epsilon) {
  const int rows = static_cast<int>(q_max.rows());
  const int cols = static_cast<int>(q_max.cols());
  if (sigma.rows != rows || sigma.cols != cols || q_min.rows() != rows ||
      q_min.cols() != cols) {
    throw ConfigError("verify_cce: shape mismatch");
  }
  const MarginalPair m = marginals(sigma);
  double mean_max = 0.0;
  double mean_min = 0.0;
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) {
      mean_max += sigma.at(a, b) * q_max(a, b);
      mean_min += sigma.at(a, b) * q_min(a, b);
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int dev = 0; dev < rows; ++dev) {
    double value = 0.0;
    for (int b = 0; b < cols; ++b) value += m.col[b] * q_max(dev, b);
    worst = std::max(worst, value - mean_max);
  }
  for (int dev = 0; dev < cols; ++dev) {
    double value = 0.0;
    for (int a = 0; a < rows; ++a) value += m.row[a] * q_min(a, dev);
    worst = std::max(worst, mean_min - value);
  }
  CceCheck check;
  check.worst_violation = worst;
  check.ok = worst <= epsilon + 1e-9;
  return check;
}

ZeroSumSolution zero_sum_value(const Eigen::MatrixXd& payoff) {
  const int rows = static_cast<int>(payoff.rows());
  const int cols = static_cast<int>(payoff.cols());
  if (rows == 0 || cols == 0) throw ConfigError("zero_sum_value: empty payoff");
  if (!payoff.allFinite()) throw NumericError("zero_sum_value: non-finite payoff");

  // Row LP: maximize v with sum_a x_a q(a,b) >= v for every column b.
  const auto solve_side = [](const Eigen::MatrixXd& q) {
    const int n = static_cast<int>(q.rows());
    const int m = static_cast<int>(q.cols());
    LpProblem lp;
    lp.maximize = Eigen::VectorXd::Zero(n + 2);
    lp.maximize[n] = 1.0;
    lp.maximize[n + 1] = -1.0;
    lp.a_ub = Eigen::MatrixXd::Zero(m, n + 2);
    lp.b_ub = Eigen::VectorXd::Zero(m);
    for (int b = 0; b < m; ++b) {
      for (int a = 0; a < n; ++a) lp.a_ub(b, a) = -q(a, b);
      lp.a_ub(b, n) = 1.0;
      lp.a_ub(b, n + 1) = -1.0;
    }
    lp.a_eq = Eigen::MatrixXd::Zero(1, n + 2);
    lp.a_eq.row(0).head(n).setOnes();
    lp.b_eq = Eigen::VectorXd::Ones(1);
    const LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::Optimal) {
      throw NumericError("zero_sum_value: LP failure");
    }
    return sol;
  };

  const LpSolution primal = solve_side(payoff);
  // Column player minimizes, which is the same LP on the negated transpose.
  const LpSolution dual = solve_side(-payoff.transpose());
  const double v = primal.objective;
  const double w = -dual.objective;
  if (std::abs(v - w) > 1e-8) {
    throw NumericError("zero_sum_value: strong duality check failed");
  }

  ZeroSumSolution out;
  out.value = v;
  out.row_strategy.assign(payoff.rows(), 0.0);
  out.col_strategy.assign(payoff.cols(), 0.0);
  for (int a = 0; a < rows; ++a) out.row_strategy[a] = std::max(0.0, primal.x[a]);
  for (int b = 0; b < cols; ++b) out.col_strategy[b] = std::max(0.0, dual.x[b]);
  // Tidy the simplex coordinates.
  double sr = 0.0, sc = 0.0;
  for (double x : out.row_strategy) sr += x;
  for (double x : out.col_strategy) sc += x;
  for (double& x : out.row_strategy) x /= sr;
  for (double& x : out.col_strategy) x /= sc;
  return out;
}

}  // namespace nashmg
