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

#include "nashmg/linalg.hpp"

#include <cmath>

#include "nashmg/errors.hpp"

namespace nashmg {

SpdFactor::SpdFactor(const Eigen::MatrixXd& m) : matrix_(m), llt_(m) {
  if (llt_.info() != Eigen::Success) {
    throw NumericError("SPD factorization failed: matrix not positive definite");
  }
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = llt_.solve(rhs);
  x += llt_.solve(rhs - matrix_ * x);
  return x;
}

double SpdFactor::inverse_norm(const Eigen::VectorXd& x) const {
  if (!x.allFinite()) throw NumericError("inverse_norm: non-finite input");
  // |L^{-1} x|_2 with Sigma = L L^T.
  Eigen::VectorXd y = llt_.matrixL().solve(x);
  return y.norm();
}

WeightedCovariance::WeightedCovariance(int dim, double lambda)
    : matrix_(lambda * Eigen::MatrixXd::Identity(dim, dim)),
      inverse_(Eigen::MatrixXd::Identity(dim, dim) / lambda),
      lambda_(lambda) {
  if (dim <= 0) throw ConfigError("WeightedCovariance: dim must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("WeightedCovariance: lambda must be positive and finite");
  }
}

void WeightedCovariance::rank_one_update(const Eigen::VectorXd& x, double weight) {
  if (x.size() != matrix_.rows()) {
    throw ConfigError("rank_one_update: dimension mismatch");
  }
  if (!x.allFinite() || !std::isfinite(weight) || weight <= 0.0) {
    throw NumericError("rank_one_update: non-finite input or non-positive weight");
  }
  matrix_.noalias() += weight * x * x.transpose();
  matrix_ = ((matrix_ + matrix_.transpose()) * 0.5).eval();

  // Sherman-Morrison step on the maintained inverse.
  Eigen::VectorXd ix = inverse_ * x;
  const double denom = 1.0 + weight * x.dot(ix);
  inverse_.noalias() -= (weight / denom) * ix * ix.transpose();
  inverse_ = ((inverse_ + inverse_.transpose()) * 0.5).eval();

  ++count_;
  if (count_ % kRefactorPeriod == 0) {
    SpdFactor f(matrix_);
    const int d = dim();
    Eigen::MatrixXd fresh(d, d);
    for (int j = 0; j < d; ++j) {
      fresh.col(j) = f.solve(Eigen::VectorXd::Unit(d, j));
    }
    inverse_ = (fresh + fresh.transpose()) * 0.5;
  }
}

Eigen::VectorXd WeightedCovariance::ridge_solve(const Eigen::VectorXd& b) const {
  if (b.size() != matrix_.rows()) {
    throw ConfigError("ridge_solve: dimension mismatch");
  }
  if (!b.allFinite()) throw NumericError("ridge_solve: non-finite input");
  SpdFactor f(matrix_);
  Eigen::VectorXd theta = f.solve(b);
  const double resid = (matrix_ * theta - b).cwiseAbs().maxCoeff();
  const double bound = 1e-10 * (1.0 + b.cwiseAbs().maxCoeff());
  if (resid > bound) {
    throw NumericError("ridge_solve: residual exceeds tolerance");
  }
  return theta;
}

double WeightedCovariance::bonus_norm(const Eigen::VectorXd& x) const {
  if (x.size() != matrix_.rows()) {
    throw ConfigError("bonus_norm: dimension mismatch");
  }
  return SpdFactor(matrix_).inverse_norm(x);
}

}  // namespace nashmg
