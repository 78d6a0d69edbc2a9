#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "tfr/matrix.hpp"
#include "tfr/shrinkage.hpp"
#include "tfr/transforms.hpp"

namespace tfr {

/// A projection output: time frames for the analysis role, coefficients for synthesis.
using Iterate = std::variant<RealMatrix, TFMatrix>;

struct ProjectionStep {
  Iterate estimate;
  bool converged = true;

  ProjectionStep(RealMatrix w) : estimate(std::move(w)) {}  // NOLINT(google-explicit-constructor)
  ProjectionStep(TFMatrix w) : estimate(std::move(w)) {}    // NOLINT(google-explicit-constructor)
  ProjectionStep(Iterate w, bool ok) : estimate(std::move(w)), converged(ok) {}
};

/// The M of the iteration: an analysis operator lifting real frames to
/// coefficients, or the identity on coefficients.
class ModelRole {
 public:
  using Lift = std::function<TFMatrix(const RealMatrix&)>;

  [[nodiscard]] static ModelRole analysis(const AnalysisOperator& a);
  [[nodiscard]] static ModelRole analysis(Lift lift) { return ModelRole(std::move(lift)); }
  [[nodiscard]] static ModelRole synthesis() { return ModelRole(Lift{}); }

  [[nodiscard]] bool is_analysis() const noexcept { return static_cast<bool>(lift_); }

  /// M W. Throws DimensionError when the iterate kind does not match the role.
  [[nodiscard]] TFMatrix apply(const Iterate& w) const;

 private:
  explicit ModelRole(Lift lift) : lift_(std::move(lift)) {}
  Lift lift_;
};

struct TraceRecord {
  std::size_t iteration = 0;
  /// Threshold used by this iteration's shrinkage.
  double mu = 0.0;
  double residual_norm = 0.0;
  double ratio = 0.0;
};

struct GenericProblem {
  /// W = P(Z - U); must return a feasible point.
  std::function<ProjectionStep(const TFMatrix&)> project;
  ModelRole role = ModelRole::synthesis();
  ShrinkageFamily family = ShrinkageFamily::plain();
  MuSchedule schedule;
  TFMatrix z0;
  double beta = 1e-3;
  std::size_t max_iterations = 1000000;
  /// Wall-clock limit per run; exhausting it ends the run unconverged.
  std::optional<double> time_budget_seconds = 30.0;
  std::function<void(const TraceRecord&)> trace;
};

struct SolverResult {
  Iterate estimate;
  double mu_final = 0.0;
  TFMatrix z_final;
  std::size_t iterations = 0;
  bool converged = false;
  bool budget_exhausted = false;
  std::size_t projection_warnings = 0;
  double final_ratio = 0.0;
  /// Per-iteration records; filled only when the caller asks for them.
  std::vector<TraceRecord> trace;
};

/// Alternates W = P(Z - U), Z = S_mu(M W + U) and stops once
/// ||M W - Z|| / ||M W|| <= beta (a vanishing denominator counts as zero).
/// Otherwise U += M W - Z and mu advances along the schedule.
[[nodiscard]] SolverResult run_generic(const GenericProblem& problem);

}  // namespace tfr
