#pragma once

// Generalized projections: argmin ||M W - Z||_F over W in a constraint set.
//
// The projections are templates over the operator so that the same code runs
// with the FFT operators of transforms.hpp and with small dense operators whose
// frame bound differs from one. An analysis-like operator provides
//   ComplexMatrix adjoint(const TFMatrix&) and double frame_bound()   (A^H A = zeta I)
// and a synthesis-like operator provides
//   ComplexMatrix apply(const TFMatrix&), TFMatrix adjoint(const ComplexMatrix&)
//   and double frame_bound()                                          (D D^H = xi I).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tfr/kernels.hpp"
#include "tfr/matrix.hpp"
#include "tfr/transforms.hpp"

namespace tfr {

/// Theta = { W : ||W - observed||_F <= epsilon }.
struct NoiseConstraint {
  RealMatrix observed;
  double epsilon = 0.0;
};

enum class SampleState : std::int8_t { reliable = 0, clipped_pos = 1, clipped_neg = -1 };

/// Partition of a frame block into reliable and positively/negatively clipped samples.
struct ClipMask {
  Matrix<SampleState> states;
  double tau = 1.0;

  [[nodiscard]] std::vector<std::size_t> reliable() const;
  [[nodiscard]] std::vector<std::size_t> clipped_pos() const;
  [[nodiscard]] std::vector<std::size_t> clipped_neg() const;
  [[nodiscard]] std::size_t clipped_count() const;
};

inline constexpr double clip_equality_tolerance = 1e-9;

/// Samples with value >= tau - delta are positively clipped, <= -tau + delta negatively.
[[nodiscard]] ClipMask build_clip_mask(const RealMatrix& frames, double tau,
                                       double delta = clip_equality_tolerance);

struct ProjectionReport {
  TFMatrix result;
  std::size_t inner_iterations = 0;
  /// Distance of the constrained time-domain image of `result` to the feasible set.
  double residual = 0.0;
  bool converged = true;
};

namespace detail {

/// Euclidean projection of b onto the ball of radius eps around y.
[[nodiscard]] RealMatrix project_ball(const RealMatrix& b, const RealMatrix& y, double eps);

/// Factor f with W = Z - f * G^*(GZ - Y) for the synthesis noise projection:
/// max(||r|| - eps, 0) / ||r||, r = GZ - Y.
[[nodiscard]] double ball_shrink_factor(double residual_norm, double eps);

/// Componentwise projection onto the clipping-consistent set, using the
/// observation as the bound on clipped samples.
[[nodiscard]] RealMatrix project_clip_box(const RealMatrix& b, const ClipMask& mask, const RealMatrix& y);

/// Euclidean distance of v to the clipping-consistent set.
[[nodiscard]] double clip_violation(const RealMatrix& v, const ClipMask& mask, const RealMatrix& y);

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* what);

}  // namespace detail

/// W = B - max(||B - Y|| - eps, 0) / ||B - Y|| (B - Y), B = realify(A^H Z) / zeta.
template <class AnalysisOp>
[[nodiscard]] RealMatrix project_denoise_analysis(const TFMatrix& z, const NoiseConstraint& c, const AnalysisOp& a,
                                                  RealMode mode = RealMode::re_minus_im) {
  RealMatrix b = realify(a.adjoint(z), mode);
  const double zeta = a.frame_bound();
  if (zeta != 1.0) {
    for (auto& v : b.values()) v /= zeta;
  }
  detail::require_same_shape(b, c.observed, "denoise projection");
  return detail::project_ball(b, c.observed, c.epsilon);
}

/// Exact projection onto { W : ||realify(D W) - Y|| <= eps }. With G = realify o D,
/// G G^* = kappa xi I (kappa = realify_gain), so W = Z - f / (kappa xi) G^*(GZ - Y).
template <class SynthesisOp>
[[nodiscard]] TFMatrix project_denoise_synthesis(const TFMatrix& z, const NoiseConstraint& c,
                                                 const SynthesisOp& d, RealMode mode = RealMode::re_minus_im) {
  RealMatrix r = realify(d.apply(z), mode);
  detail::require_same_shape(r, c.observed, "denoise projection");
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c.observed[i];
  const double f = detail::ball_shrink_factor(std::sqrt(kernels::sum_squares(r.values())), c.epsilon);
  TFMatrix w = z;
  if (f == 0.0) return w;
  const TFMatrix correction = d.adjoint(realify_adjoint(r, mode));
  kernels::axpy(w.values(), -f / (realify_gain(mode) * d.frame_bound()), correction.values());
  return w;
}

/// Componentwise: Y on reliable samples, B where it already satisfies the
/// clipped bound, the bound itself otherwise. B = realify(A^H Z) / zeta.
template <class AnalysisOp>
[[nodiscard]] RealMatrix project_declip_analysis(const TFMatrix& z, const ClipMask& mask, const RealMatrix& y,
                                                 const AnalysisOp& a, RealMode mode = RealMode::re_minus_im) {
  RealMatrix b = realify(a.adjoint(z), mode);
  const double zeta = a.frame_bound();
  if (zeta != 1.0) {
    for (auto& v : b.values()) v /= zeta;
  }
  return detail::project_clip_box(b, mask, y);
}

/// Dual projected gradient for argmin ||W - Z|| s.t. G W in C, G = realify o D,
/// C the clipping-consistent set. Keeps the dual variable between calls so
/// successive outer iterations start warm.
template <class SynthesisOp>
class SynthesisDeclipProjector {
 public:
  SynthesisDeclipProjector(ClipMask mask, RealMatrix observed, const SynthesisOp& d,
                           RealMode mode = RealMode::re_minus_im, double tol = -1.0, std::size_t max_inner = 200)
      : mask_(std::move(mask)), y_(std::move(observed)), d_(d), mode_(mode), max_inner_(max_inner) {
    detail::require_same_shape(RealMatrix(mask_.states.rows(), mask_.states.cols()), y_, "clip mask");
    tol_ = tol > 0.0 ? tol : std::max(1e-6 * std::sqrt(kernels::sum_squares(y_.values())), 1e-12);
  }

  [[nodiscard]] double tolerance() const noexcept { return tol_; }
  [[nodiscard]] const RealMatrix& dual() const noexcept { return dual_; }

  ProjectionReport operator()(const TFMatrix& z) {
    const double step = 1.0 / (realify_gain(mode_) * d_.frame_bound());
    if (dual_.empty()) dual_ = RealMatrix(y_.rows(), y_.cols());

    ProjectionReport report;
    for (std::size_t it = 0;; ++it) {
      report.result = z;
      const TFMatrix lifted = d_.adjoint(realify_adjoint(dual_, mode_));
      kernels::axpy(report.result.values(), -1.0, lifted.values());
      const RealMatrix v = realify(d_.apply(report.result), mode_);
      report.residual = detail::clip_violation(v, mask_, y_);
      report.inner_iterations = it;
      if (report.residual <= tol_) {
        report.converged = true;
        return report;
      }
      if (it == max_inner_) {
        report.converged = false;
        return report;
      }
      // lambda <- (lambda + t v) - t P_C((lambda + t v) / t)
      RealMatrix shifted = dual_;
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = (shifted[i] + step * v[i]) / step;
      const RealMatrix projected = detail::project_clip_box(shifted, mask_, y_);
      for (std::size_t i = 0; i < dual_.size(); ++i) dual_[i] = step * (shifted[i] - projected[i]);
    }
  }

 private:
  ClipMask mask_;
  RealMatrix y_;
  SynthesisOp d_;
  RealMode mode_;
  double tol_ = 0.0;
  std::size_t max_inner_;
  RealMatrix dual_;
};

/// One-shot form of SynthesisDeclipProjector (cold start). tol <= 0 selects
/// max(1e-6 ||Y||, 1e-12).
template <class SynthesisOp>
[[nodiscard]] ProjectionReport project_declip_synthesis(const TFMatrix& z, const ClipMask& mask, const RealMatrix& y,
                                                        const SynthesisOp& d, RealMode mode = RealMode::re_minus_im,
                                                        double tol = -1.0, std::size_t max_inner = 200) {
  SynthesisDeclipProjector<SynthesisOp> projector(mask, y, d, mode, tol, max_inner);
  return projector(z);
}

/// Closed form of the same projection, valid because G G^* is a multiple of
/// the identity: W = Z + G^*(P_C(GZ) - GZ) / (kappa xi).
template <class SynthesisOp>
[[nodiscard]] TFMatrix project_declip_synthesis_closed_form(const TFMatrix& z, const ClipMask& mask,
                                                            const RealMatrix& y, const SynthesisOp& d,
                                                            RealMode mode = RealMode::re_minus_im) {
  const RealMatrix gz = realify(d.apply(z), mode);
  const RealMatrix target = detail::project_clip_box(gz, mask, y);
  RealMatrix delta(gz.rows(), gz.cols());
  for (std::size_t i = 0; i < gz.size(); ++i) delta[i] = target[i] - gz[i];
  TFMatrix w = z;
  const TFMatrix correction = d.adjoint(realify_adjoint(delta, mode));
  kernels::axpy(w.values(), 1.0 / (realify_gain(mode) * d.frame_bound()), correction.values());
  return w;
}

}  // namespace tfr
