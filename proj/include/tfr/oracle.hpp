#pragma once

// Dense reference solvers for small generalized projections. Test use only.
//
// Every problem is written over a real parameter vector x:
//   minimize ||M x - z||  subject to  G x in C
// Complex unknowns are stacked as [Re; Im]. C is the whole space, a Euclidean
// ball, or a box with possibly infinite bounds (a singleton is a box with
// lower == upper).

#include <cstddef>

#include <Eigen/Dense>

namespace tfr::oracle {

inline constexpr std::size_t max_dimension = 64;

struct ConstraintSet {
  enum class Kind { whole, ball, box };

  Kind kind = Kind::whole;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  [[nodiscard]] static ConstraintSet whole();
  [[nodiscard]] static ConstraintSet ball(Eigen::VectorXd center, double radius);
  [[nodiscard]] static ConstraintSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  [[nodiscard]] static ConstraintSet singleton(const Eigen::VectorXd& point);

  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  [[nodiscard]] double distance(const Eigen::VectorXd& v) const;
};

struct DenseProblem {
  Eigen::MatrixXd m;
  Eigen::VectorXd z;
  /// Ignored for the whole space.
  Eigen::MatrixXd g;
  ConstraintSet set;

  [[nodiscard]] double objective(const Eigen::VectorXd& x) const { return (m * x - z).norm(); }
  [[nodiscard]] double violation(const Eigen::VectorXd& x) const;
};

struct OracleResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double violation = 0.0;
  std::size_t iterations = 0;
};

struct AdmmOptions {
  std::size_t max_iterations = 200000;
  double rho = 1.0;
  double tolerance = 1e-13;
};

/// ADMM on the split G x = v, v in C. Throws ParameterError when the unknown
/// or the constraint image exceeds max_dimension.
[[nodiscard]] OracleResult oracle_project(const DenseProblem& problem, const AdmmOptions& options = {});

/// Ball case through its KKT system: (M^T M + l G^T G) x = M^T z + l G^T c,
/// with the multiplier l found by bisection on ||G x - c|| = r.
[[nodiscard]] OracleResult ball_kkt_oracle(const DenseProblem& problem);

/// Box case by enumerating which one-sided bounds are active and solving each
/// equality-constrained least squares exactly. At most 16 one-sided bounds.
[[nodiscard]] OracleResult active_set_oracle(const DenseProblem& problem);

}  // namespace tfr::oracle
