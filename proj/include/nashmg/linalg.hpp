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

#ifndef NASHMG_LINALG_HPP_
#define NASHMG_LINALG_HPP_

#include <Eigen/Dense>

namespace nashmg {

// Frozen SPD factorization of a covariance matrix. All quantities that enter
// confidence logic (ridge solutions, bonus norms) go through a fresh factor
// rather than the incrementally maintained inverse.
class SpdFactor {
 public:
  explicit SpdFactor(const Eigen::MatrixXd& m);

  // Solves m x = rhs with one step of iterative refinement.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  // sqrt(x^T m^{-1} x).
  double inverse_norm(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Weighted ridge covariance Sigma = lambda*I + sum_j w_j x_j x_j^T together
// with a maintained inverse kept current by rank-one updates. The maintained
// inverse serves O(d^2) fast paths only; see SpdFactor for the solve path.
class WeightedCovariance {
 public:
  WeightedCovariance(int dim, double lambda);

  // Sigma += weight * x x^T; maintained inverse updated by the rank-one
  // inverse identity and symmetrized. Refactorizes the inverse every
  // kRefactorPeriod updates to bound drift.
  void rank_one_update(const Eigen::VectorXd& x, double weight);

  // theta = Sigma^{-1} b through a fresh factorization. Residual checked
  // against 1e-10 * (1 + |b|_inf).
  Eigen::VectorXd ridge_solve(const Eigen::VectorXd& b) const;

  // |Sigma^{-1/2} x|_2 through a fresh factorization.
  double bonus_norm(const Eigen::VectorXd& x) const;

  SpdFactor factor() const { return SpdFactor(matrix_); }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double lambda() const { return lambda_; }
  long count() const { return count_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  static constexpr long kRefactorPeriod = 512;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
  double lambda_;
  long count_ = 0;
};

// Running correlation vector b = sum_j w_j x_j y_j.
struct CorrelationVector {
  Eigen::VectorXd value;
  long count = 0;

  explicit CorrelationVector(int dim) : value(Eigen::VectorXd::Zero(dim)) {}

  void accumulate(const Eigen::VectorXd& x, double target, double weight) {
    value.noalias() += weight * target * x;
    ++count;
  }
};

}  // namespace nashmg

#endif  // NASHMG_LINALG_HPP_
