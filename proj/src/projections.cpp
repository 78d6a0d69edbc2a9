#include "tfr/projections.hpp"

#include <algorithm>
#include <string>

namespace tfr {

namespace {

std::vector<std::size_t> indices_with(const Matrix<SampleState>& states, SampleState wanted) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == wanted) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> ClipMask::reliable() const { return indices_with(states, SampleState::reliable); }
std::vector<std::size_t> ClipMask::clipped_pos() const { return indices_with(states, SampleState::clipped_pos); }
std::vector<std::size_t> ClipMask::clipped_neg() const { return indices_with(states, SampleState::clipped_neg); }

std::size_t ClipMask::clipped_count() const {
  return static_cast<std::size_t>(
      std::ranges::count_if(states.values(), [](SampleState s) { return s != SampleState::reliable; }));
}

ClipMask build_clip_mask(const RealMatrix& frames, double tau, double delta) {
  if (!(tau > 0.0)) throw ParameterError("clip level must be positive");
  ClipMask mask;
  mask.tau = tau;
  mask.states = Matrix<SampleState>(frames.rows(), frames.cols(), SampleState::reliable);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i] >= tau - delta) {
      mask.states[i] = SampleState::clipped_pos;
    } else if (frames[i] <= -tau + delta) {
      mask.states[i] = SampleState::clipped_neg;
    }
  }
  return mask;
}

namespace detail {

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " does not match " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

RealMatrix project_ball(const RealMatrix& b, const RealMatrix& y, double eps) {
  require_same_shape(b, y, "ball projection");
  if (!(eps >= 0.0)) throw ParameterError("ball radius must be non-negative");
  const double distance = std::sqrt(kernels::diff_sum_squares(b.values(), y.values()));
  if (distance <= eps) return b;
  const double keep = eps / distance;
  RealMatrix w(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.size(); ++i) w[i] = y[i] + keep * (b[i] - y[i]);
  return w;
}

double ball_shrink_factor(double residual_norm, double eps) {
  if (!(eps >= 0.0)) throw ParameterError("ball radius must be non-negative");
  if (residual_norm <= eps) return 0.0;
  return (residual_norm - eps) / residual_norm;
}

RealMatrix project_clip_box(const RealMatrix& b, const ClipMask& mask, const RealMatrix& y) {
  require_same_shape(b, y, "clip projection");
  if (mask.states.rows() != y.rows() || mask.states.cols() != y.cols()) {
    throw DimensionError("clip mask shape does not match the observation");
  }
  RealMatrix w(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.size(); ++i) {
    switch (mask.states[i]) {
      case SampleState::reliable: w[i] = y[i]; break;
      case SampleState::clipped_pos: w[i] = std::max(b[i], y[i]); break;
      case SampleState::clipped_neg: w[i] = std::min(b[i], y[i]); break;
    }
  }
  return w;
}

double clip_violation(const RealMatrix& v, const ClipMask& mask, const RealMatrix& y) {
  const RealMatrix p = project_clip_box(v, mask, y);
  return std::sqrt(kernels::diff_sum_squares(v.values(), p.values()));
}

}  // namespace detail

}  // namespace tfr
