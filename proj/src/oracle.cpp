#include "tfr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tfr/common.hpp"

namespace tfr::oracle {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_problem(const DenseProblem& p) {
  if (p.m.rows() != p.z.size()) throw DimensionError("oracle: M and z disagree");
  if (static_cast<std::size_t>(p.m.cols()) > max_dimension) {
    throw ParameterError("oracle: unknown exceeds the dimension guard");
  }
  if (p.set.kind == ConstraintSet::Kind::whole) return;
  if (p.g.cols() != p.m.cols()) throw DimensionError("oracle: G and M disagree");
  if (static_cast<std::size_t>(p.g.rows()) > max_dimension) {
    throw ParameterError("oracle: constraint image exceeds the dimension guard");
  }
  const auto k = p.g.rows();
  if (p.set.kind == ConstraintSet::Kind::ball && p.set.center.size() != k) {
    throw DimensionError("oracle: ball centre size");
  }
  if (p.set.kind == ConstraintSet::Kind::box && (p.set.lower.size() != k || p.set.upper.size() != k)) {
    throw DimensionError("oracle: box bound size");
  }
}

OracleResult finish(const DenseProblem& p, VectorXd x, std::size_t iterations) {
  OracleResult r;
  r.objective = p.objective(x);
  r.violation = p.violation(x);
  r.x = std::move(x);
  r.iterations = iterations;
  return r;
}

VectorXd least_squares(const MatrixXd& m, const VectorXd& z) {
  return m.completeOrthogonalDecomposition().solve(z);
}

}  // namespace

ConstraintSet ConstraintSet::whole() { return {}; }

ConstraintSet ConstraintSet::ball(VectorXd center, double radius) {
  if (!(radius >= 0.0)) throw ParameterError("oracle: negative ball radius");
  ConstraintSet s;
  s.kind = Kind::ball;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

ConstraintSet ConstraintSet::box(VectorXd lower, VectorXd upper) {
  if (lower.size() != upper.size()) throw DimensionError("oracle: box bound sizes differ");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw ParameterError("oracle: empty box");
  }
  ConstraintSet s;
  s.kind = Kind::box;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

ConstraintSet ConstraintSet::singleton(const VectorXd& point) { return box(point, point); }

VectorXd ConstraintSet::project(const VectorXd& v) const {
  switch (kind) {
    case Kind::whole:
      return v;
    case Kind::ball: {
      const VectorXd d = v - center;
      const double n = d.norm();
      return n <= radius ? v : VectorXd(center + d * (radius / n));
    }
    case Kind::box:
      return v.cwiseMax(lower).cwiseMin(upper);
  }
  return v;
}

double ConstraintSet::distance(const VectorXd& v) const { return (project(v) - v).norm(); }

double DenseProblem::violation(const VectorXd& x) const {
  if (set.kind == ConstraintSet::Kind::whole) return 0.0;
  return set.distance(g * x);
}

OracleResult oracle_project(const DenseProblem& p, const AdmmOptions& options) {
  check_problem(p);
  if (p.set.kind == ConstraintSet::Kind::whole) return finish(p, least_squares(p.m, p.z), 0);

  const MatrixXd mtm = p.m.transpose() * p.m;
  const MatrixXd gtg = p.g.transpose() * p.g;
  const VectorXd mtz = p.m.transpose() * p.z;
  double rho = options.rho;
  auto factor = [&] { return (mtm + rho * gtg).completeOrthogonalDecomposition(); };
  auto solver = factor();

  VectorXd v = p.set.project(VectorXd::Zero(p.g.rows()));
  VectorXd u = VectorXd::Zero(p.g.rows());
  VectorXd x = VectorXd::Zero(p.m.cols());
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    x = solver.solve(mtz + rho * p.g.transpose() * (v - u));
    const VectorXd gx = p.g * x;
    const VectorXd v_prev = v;
    v = p.set.project(gx + u);
    u += gx - v;

    const double primal = (gx - v).norm();
    const double dual = rho * (p.g.transpose() * (v - v_prev)).norm();
    const double scale = std::max({1.0, gx.norm(), v.norm()});
    if (primal <= options.tolerance * scale && dual <= options.tolerance * std::max(1.0, mtz.norm())) break;

    // Residual balancing keeps both residuals decreasing at a similar rate.
    if (it % 50 == 49) {
      double factor_change = 1.0;
      if (primal > 10.0 * dual) factor_change = 2.0;
      if (dual > 10.0 * primal) factor_change = 0.5;
      if (factor_change != 1.0) {
        rho *= factor_change;
        u /= factor_change;
        solver = factor();
      }
    }
  }
  return finish(p, x, it);
}

OracleResult ball_kkt_oracle(const DenseProblem& p) {
  check_problem(p);
  if (p.set.kind != ConstraintSet::Kind::ball) throw ParameterError("ball_kkt_oracle needs a ball");
  const MatrixXd mtm = p.m.transpose() * p.m;
  const MatrixXd gtg = p.g.transpose() * p.g;
  const VectorXd mtz = p.m.transpose() * p.z;
  const VectorXd gtc = p.g.transpose() * p.set.center;

  auto solve = [&](double lambda) -> VectorXd {
    return (mtm + lambda * gtg).completeOrthogonalDecomposition().solve(mtz + lambda * gtc);
  };
  auto gap = [&](const VectorXd& x) { return (p.g * x - p.set.center).norm() - p.set.radius; };

  VectorXd x = solve(0.0);
  if (gap(x) <= 0.0) return finish(p, x, 0);

  double lo = 0.0;
  double hi = 1.0;
  std::size_t it = 0;
  while (gap(solve(hi)) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++it > 200) throw RangeError("ball_kkt_oracle: multiplier diverged");
  }
  for (int k = 0; k < 200; ++k, ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (gap(solve(mid)) > 0.0 ? lo : hi) = mid;
  }
  return finish(p, solve(hi), it);
}

OracleResult active_set_oracle(const DenseProblem& p) {
  check_problem(p);
  if (p.set.kind != ConstraintSet::Kind::box) throw ParameterError("active_set_oracle needs a box");
  const auto& lo = p.set.lower;
  const auto& hi = p.set.upper;

  std::vector<Eigen::Index> equalities;
  std::vector<Eigen::Index> inequalities;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    const bool lo_finite = std::isfinite(lo[i]);
    const bool hi_finite = std::isfinite(hi[i]);
    if (lo_finite && hi_finite && lo[i] == hi[i]) {
      equalities.push_back(i);
    } else if (lo_finite && hi_finite) {
      throw ParameterError("active_set_oracle: two-sided bounds are not supported");
    } else if (lo_finite || hi_finite) {
      inequalities.push_back(i);
    }
  }
  if (inequalities.size() > 16) throw ParameterError("active_set_oracle: too many one-sided bounds");

  const MatrixXd mtm = p.m.transpose() * p.m;
  const VectorXd mtz = p.m.transpose() * p.z;
  const Eigen::Index n = p.m.cols();
  auto bound = [&](Eigen::Index i) { return std::isfinite(lo[i]) ? lo[i] : hi[i]; };

  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::size_t subsets = std::size_t{1} << inequalities.size();
  for (std::size_t s = 0; s < subsets; ++s) {
    std::vector<Eigen::Index> active = equalities;
    for (std::size_t k = 0; k < inequalities.size(); ++k) {
      if (s & (std::size_t{1} << k)) active.push_back(inequalities[k]);
    }
    const auto a = static_cast<Eigen::Index>(active.size());
    MatrixXd kkt = MatrixXd::Zero(n + a, n + a);
    VectorXd rhs(n + a);
    kkt.topLeftCorner(n, n) = mtm;
    rhs.head(n) = mtz;
    for (Eigen::Index r = 0; r < a; ++r) {
      kkt.block(n + r, 0, 1, n) = p.g.row(active[r]);
      kkt.block(0, n + r, n, 1) = p.g.row(active[r]).transpose();
      rhs[n + r] = bound(active[r]);
    }
    const VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    const VectorXd x = sol.head(n);
    if (p.violation(x) > 1e-9) continue;
    const double obj = p.objective(x);
    if (obj < best.objective) {
      best = finish(p, x, s + 1);
    }
  }
  if (!std::isfinite(best.objective)) throw RangeError("active_set_oracle: no feasible candidate");
  best.iterations = subsets;
  return best;
}

}  // namespace tfr::oracle
