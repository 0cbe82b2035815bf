// Copyright (C) 2026 The egohoi Authors
// SPDX-License-Identifier: Apache-2.0

#include "egohoi/lm_solver.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "egohoi/error.hpp"

namespace egohoi {

std::string_view to_string(LmTermination t) {
  switch (t) {
    case LmTermination::kCostTolerance: return "cost_tolerance";
    case LmTermination::kStepTolerance: return "step_tolerance";
    case LmTermination::kZeroCost: return "zero_cost";
    case LmTermination::kNoFurtherDecrease: return "no_further_decrease";
    case LmTermination::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

MatrixX numeric_jacobian(const LmProblem& problem, const VectorX& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "finite-difference step must be positive");
  const VectorX r0 = problem.residual(x);
  MatrixX jac(r0.size(), x.size());
  VectorX xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + h;
    const VectorX rp = problem.residual(xp);
    xp[j] = x[j] - h;
    const VectorX rm = problem.residual(xp);
    xp[j] = x[j];
    if (!rp.allFinite() || !rm.allFinite()) {
      throw Error(ErrorCode::kNonFiniteResidual, "residual not finite while differencing parameter " +
                                                     std::to_string(j));
    }
    jac.col(j) = (rp - rm) / (2.0 * h);
  }
  return jac;
}

LmReport lm_solve(const LmProblem& problem, const VectorX& x0, const LmOptions& options) {
  if (x0.size() == 0 || !x0.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "initial parameters must be non-empty and finite");
  }
  if (options.max_iter <= 0 || !(options.cost_tol > 0) || !(options.step_tol > 0) ||
      !(options.lambda_init > 0) || !(options.lambda_up > 1) || !(options.lambda_down > 1)) {
    throw Error(ErrorCode::kInvalidArgument, "solver options must be positive");
  }

  auto jacobian_at = [&](const VectorX& x) {
    return problem.jacobian ? problem.jacobian(x) : numeric_jacobian(problem, x, options.numeric_step);
  };

  LmReport report;
  VectorX x = x0;
  VectorX r = problem.residual(x);
  if (!r.allFinite()) throw Error(ErrorCode::kNonFiniteResidual, "residual not finite at the initial point");
  if (r.size() == 0) throw Error(ErrorCode::kInvalidArgument, "problem has no residuals");

  double cost = r.squaredNorm();
  report.initial_cost = cost;
  report.cost_history.push_back(cost);
  double lambda = options.lambda_init;

  auto finish = [&](LmTermination why, bool converged) {
    report.params = x;
    report.final_cost = cost;
    report.termination = why;
    report.converged = converged;
    return report;
  };

  if (cost == 0.0) return finish(LmTermination::kZeroCost, true);

  const Eigen::Index n = x.size();
  for (int iter = 0; iter < options.max_iter; ++iter) {
    report.iterations = iter + 1;
    const MatrixX jac = jacobian_at(x);
    const MatrixX jtj = jac.transpose() * jac;
    const VectorX g = jac.transpose() * r;

    bool accepted = false;
    bool solved_any = false;
    while (lambda <= options.lambda_max) {
      MatrixX damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::LDLT<MatrixX> ldlt(damped);
      VectorX step;
      if (ldlt.info() == Eigen::Success) step = ldlt.solve(-g);
      if (step.size() != n || !step.allFinite()) {
        lambda *= options.lambda_up;
        continue;
      }
      solved_any = true;

      const VectorX x_new = x + step;
      const VectorX r_new = problem.residual(x_new);
      const double new_cost = r_new.allFinite() ? r_new.squaredNorm() : cost;
      if (new_cost < cost) {
        const double decrease = cost - new_cost;
        const double prev_cost = cost;
        x = x_new;
        r = r_new;
        cost = new_cost;
        report.cost_history.push_back(cost);
        lambda = std::max(lambda / options.lambda_down, 1e-300);
        accepted = true;

        if (cost == 0.0) return finish(LmTermination::kZeroCost, true);
        if (decrease <= options.cost_tol * prev_cost) return finish(LmTermination::kCostTolerance, true);
        if (step.norm() <= options.step_tol * (x.norm() + options.step_tol)) {
          return finish(LmTermination::kStepTolerance, true);
        }
        break;
      }
      if (step.norm() <= options.step_tol * (x.norm() + options.step_tol)) {
        // The damped step has shrunk below resolution without lowering the cost.
        return finish(LmTermination::kStepTolerance, true);
      }
      lambda *= options.lambda_up;
    }
    if (!solved_any) {
      throw Error(ErrorCode::kSingularNormalEquations, "damped normal equations unsolvable at maximum damping");
    }
    if (!accepted) return finish(LmTermination::kNoFurtherDecrease, true);
  }
  return finish(LmTermination::kMaxIterations, false);
}

}  // namespace egohoi
