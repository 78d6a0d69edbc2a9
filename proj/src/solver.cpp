#include "tfr/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "tfr/kernels.hpp"

namespace tfr {

ModelRole ModelRole::analysis(const AnalysisOperator& a) {
  return ModelRole([a](const RealMatrix& w) { return a.apply(w); });
}

TFMatrix ModelRole::apply(const Iterate& w) const {
  if (lift_) {
    const auto* frames = std::get_if<RealMatrix>(&w);
    if (frames == nullptr) throw DimensionError("analysis role expects real frames from the projection");
    return lift_(*frames);
  }
  const auto* coefficients = std::get_if<TFMatrix>(&w);
  if (coefficients == nullptr) throw DimensionError("synthesis role expects coefficients from the projection");
  return *coefficients;
}

SolverResult run_generic(const GenericProblem& problem) {
  if (!problem.project) throw ParameterError("solver needs a projection");
  if (!(problem.beta > 0.0)) throw ParameterError("stopping threshold beta must be positive");
  if (problem.max_iterations == 0) throw ParameterError("iteration cap must be at least 1");
  problem.schedule.validate();

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  SolverResult result;
  TFMatrix z = problem.z0;
  TFMatrix u(z.rows(), z.cols());
  TFMatrix shifted(z.rows(), z.cols());
  double mu = problem.schedule.mu0;

  for (std::size_t i = 1;; ++i) {
    for (std::size_t k = 0; k < z.size(); ++k) shifted[k] = z[k] - u[k];
    ProjectionStep step = problem.project(shifted);
    if (!step.converged) ++result.projection_warnings;
    const TFMatrix mw = problem.role.apply(step.estimate);
    if (!mw.same_shape(z)) throw DimensionError("lifted projection does not match the coefficient shape");

    for (std::size_t k = 0; k < z.size(); ++k) shifted[k] = mw[k] + u[k];
    const double mu_used = mu;
    z = shrink(problem.family, shifted, mu);

    const double residual = std::sqrt(kernels::diff_sum_squares(mw.values(), z.values()));
    const double scale = std::sqrt(kernels::sum_squares(mw.values()));
    const double ratio = scale < 1e-12 ? 0.0 : residual / scale;
    if (problem.trace) problem.trace(TraceRecord{i, mu_used, residual, ratio});

    result.estimate = std::move(step.estimate);
    result.iterations = i;
    result.final_ratio = ratio;
    if (ratio <= problem.beta) {
      result.converged = true;
      break;
    }
    if (i >= problem.max_iterations) break;
    if (problem.time_budget_seconds &&
        std::chrono::duration<double>(Clock::now() - start).count() > *problem.time_budget_seconds) {
      result.budget_exhausted = true;
      break;
    }
    kernels::add_difference(u.values(), mw.values(), z.values());
    mu = next_mu(problem.schedule, mu);
  }

  result.mu_final = mu;
  result.z_final = std::move(z);
  return result;
}

}  // namespace tfr
