// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace egohoi {

using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

/// Nonlinear least-squares problem: minimize sum_i r_i(x)^2.
/// Weights are encoded inside the residuals by the caller.
struct LmProblem {
  std::function<VectorX(const VectorX&)> residual;
  /// Optional; central differences are used when empty.
  std::function<MatrixX(const VectorX&)> jacobian;
};

struct LmOptions {
  int max_iter = 100;
  double cost_tol = 1e-10;  // relative decrease
  double step_tol = 1e-10;
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 10.0;
  double lambda_max = 1e16;
  double numeric_step = 1e-6;
};

enum class LmTermination {
  kCostTolerance,
  kStepTolerance,
  kZeroCost,
  kNoFurtherDecrease,  // damping exhausted without finding a decreasing step
  kMaxIterations,
};

std::string_view to_string(LmTermination t);

struct LmReport {
  VectorX params;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  LmTermination termination = LmTermination::kMaxIterations;
  /// Cost after every accepted step, starting with the initial cost.
  std::vector<double> cost_history;
};

/// Levenberg-Marquardt with the classic multiplicative damping schedule
/// (A + lambda I), accepting a step only if it strictly lowers the cost.
///
/// Throws kNonFiniteResidual if r(x0) is not finite and
/// kSingularNormalEquations if the damped system cannot be solved even at
/// lambda_max.
LmReport lm_solve(const LmProblem& problem, const VectorX& x0, const LmOptions& options = {});

/// Central-difference Jacobian, J(i,j) = (r_i(x + h e_j) - r_i(x - h e_j)) / 2h.
MatrixX numeric_jacobian(const LmProblem& problem, const VectorX& x, double h);

}  // namespace egohoi
