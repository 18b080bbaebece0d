// Copyright 2026 The Beatnote Authors
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

#ifndef BEATNOTE_LEAST_SQUARES_HPP_
#define BEATNOTE_LEAST_SQUARES_HPP_

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <cmath>
#include <functional>
#include <string>

#include "beatnote/errors.hpp"

namespace beatnote {

/// Result of a weighted nonlinear least-squares fit in physical units.
struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // (J^T W J)^-1 scaled by the reduced chi^2
  double chi2 = 0.0;
  int dof = 0;
  int iterations = 0;
  int status = 0;
};

struct LeastSquaresOptions {
  int max_iterations = 200;
  double xtol = 1e-10;
  double ftol = 1e-15;
  /// Scale the covariance by chi^2/dof (weights known only up to a factor).
  bool scale_covariance = true;
};

/// Residual callback: fills `r` with sqrt(w_i) (y_i - model_i(p)).
using ResidualFunction = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r)>;

namespace detail {

// Levenberg-Marquardt on parameters divided by `scale`, so every unknown is
// O(1) whatever its physical unit.
struct ScaledProblem {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ResidualFunction* f;
  Eigen::VectorXd scale;
  int m;

  int inputs() const { return static_cast<int>(scale.size()); }
  int values() const { return m; }

  int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& r) const {
    (*f)(q.cwiseProduct(scale), r);
    return r.allFinite() ? 0 : -1;
  }

  int df(const Eigen::VectorXd& q, Eigen::MatrixXd& jac) const {
    Eigen::VectorXd qp = q;
    Eigen::VectorXd rp(m);
    Eigen::VectorXd rm(m);
    for (int j = 0; j < inputs(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(q(j)));
      qp(j) = q(j) + h;
      (*f)(qp.cwiseProduct(scale), rp);
      qp(j) = q(j) - h;
      (*f)(qp.cwiseProduct(scale), rm);
      qp(j) = q(j);
      jac.col(j) = (rp - rm) / (2.0 * h);
    }
    return jac.allFinite() ? 0 : -1;
  }
};

}  // namespace detail

/// Minimizes |r(p)|^2 from `p0`.  `scale` gives the typical magnitude of each
/// parameter.  Throws FitError when the solver stops without converging.
inline LeastSquaresResult weighted_least_squares(const ResidualFunction& f, int n_residuals,
                                                 const Eigen::VectorXd& p0,
                                                 const Eigen::VectorXd& scale,
                                                 const LeastSquaresOptions& opt = {}) {
  const int n = static_cast<int>(p0.size());
  if (n_residuals < n) throw InsufficientDataError("fewer residuals than parameters");
  detail::ScaledProblem prob{&f, scale, n_residuals};
  Eigen::LevenbergMarquardt<detail::ScaledProblem> lm(prob);
  lm.parameters.xtol = opt.xtol;
  lm.parameters.ftol = opt.ftol;
  lm.parameters.maxfev = 1000000;
  Eigen::VectorXd q = p0.cwiseQuotient(scale);

  namespace lms = Eigen::LevenbergMarquardtSpace;
  lms::Status st = lm.minimizeInit(q);
  if (st == lms::ImproperInputParameters) throw FitError("least squares: improper input");
  int it = 0;
  do {
    st = lm.minimizeOneStep(q);
    ++it;
  } while (st == lms::Running && it < opt.max_iterations);
  if (st == lms::Running || st == lms::ImproperInputParameters || st == lms::UserAsked ||
      !q.allFinite()) {
    throw FitError("least squares did not converge after " + std::to_string(it) +
                   " iterations (status " + std::to_string(static_cast<int>(st)) + ")");
  }

  LeastSquaresResult res;
  res.params = q.cwiseProduct(scale);
  res.iterations = it;
  res.status = static_cast<int>(st);
  Eigen::VectorXd r(n_residuals);
  f(res.params, r);
  res.chi2 = r.squaredNorm();
  res.dof = n_residuals - n;

  Eigen::MatrixXd jac(n_residuals, n);
  prob.df(q, jac);
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::MatrixXd cov_q = jtj.completeOrthogonalDecomposition().pseudoInverse();
  if (opt.scale_covariance && res.dof > 0) cov_q *= res.chi2 / res.dof;
  res.covariance = scale.asDiagonal() * cov_q * scale.asDiagonal();
  return res;
}

}  // namespace beatnote

#endif  // BEATNOTE_LEAST_SQUARES_HPP_
