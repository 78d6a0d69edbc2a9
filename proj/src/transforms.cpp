#include "tfr/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "tfr/kernels.hpp"

namespace tfr {
namespace detail {

namespace {
// The FFTW planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Per-thread FFTW-aligned work arrays, grown on demand. Every plan is created
// on arrays from fftw_malloc, so executing on these keeps the planned alignment.
struct Scratch {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  double* real = nullptr;
  std::size_t capacity = 0;

  void reserve(std::size_t n) {
    if (n <= capacity) return;
    release();
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    real = fftw_alloc_real(n);
    capacity = n;
  }
  void release() {
    fftw_free(in);
    fftw_free(out);
    fftw_free(real);
    in = out = nullptr;
    real = nullptr;
    capacity = 0;
  }
  ~Scratch() { release(); }
};

Scratch& scratch(std::size_t n) {
  thread_local Scratch s;
  s.reserve(n);
  return s;
}
}  // namespace

/// Out-of-place complex forward/backward and real-to-complex plans of one size,
/// shared by every operator of that size. Planned with FFTW_ESTIMATE so the
/// chosen algorithm, and therefore the rounding, is the same on every run.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    auto* real = fftw_alloc_real(n);
    const int size = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(size, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(size, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    real_forward_ = fftw_plan_dft_r2c_1d(size, real, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    fftw_free(real);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_destroy_plan(real_forward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  // Each call transforms s.in (or s.real) into s.out.
  void forward(Scratch& s) const { fftw_execute_dft(forward_, s.in, s.out); }
  void backward(Scratch& s) const { fftw_execute_dft(backward_, s.in, s.out); }
  void real_forward(Scratch& s) const { fftw_execute_dft_r2c(real_forward_, s.real, s.out); }

 private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  fftw_plan real_forward_ = nullptr;
};

std::shared_ptr<const FftPlan> plan_for(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FftPlan>(n);
  return slot;
}

}  // namespace detail

namespace {

void validate_sizes(std::size_t frame_length, std::size_t redundancy) {
  if (!is_power_of_two(frame_length)) {
    throw ParameterError("frame length must be a power of two, got " + std::to_string(frame_length));
  }
  if (redundancy == 0) throw ParameterError("redundancy must be at least 1");
}

void require_rows(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(expected) + " rows, got " +
                         std::to_string(actual));
  }
}

Complex load(const fftw_complex& v) { return {v[0], v[1]}; }

// Zero-pads each length-L real column to n, runs a real-input FFT, rebuilds the
// conjugate-symmetric upper half and scales by n^{-1/2}.
TFMatrix padded_forward(const RealMatrix& frames, const detail::FftPlan& plan) {
  const std::size_t n = plan.size();
  const std::size_t len = frames.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  TFMatrix out(n, frames.cols());
  auto& s = detail::scratch(n);
  std::fill(s.real + len, s.real + n, 0.0);
  for (std::size_t c = 0; c < frames.cols(); ++c) {
    std::ranges::copy(frames.col(c), s.real);
    plan.real_forward(s);
    auto dst = out.col(c);
    for (std::size_t p = 0; p <= n / 2; ++p) dst[p] = load(s.out[p]) * scale;
    for (std::size_t p = n / 2 + 1; p < n; ++p) dst[p] = std::conj(dst[n - p]);
  }
  return out;
}

// Complex-input version of the above.
TFMatrix padded_forward(const ComplexMatrix& frames, const detail::FftPlan& plan) {
  const std::size_t n = plan.size();
  const std::size_t len = frames.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  TFMatrix out(n, frames.cols());
  auto& s = detail::scratch(n);
  for (std::size_t p = len; p < n; ++p) s.in[p][0] = s.in[p][1] = 0.0;
  for (std::size_t c = 0; c < frames.cols(); ++c) {
    std::ranges::copy(frames.col(c), reinterpret_cast<Complex*>(s.in));
    plan.forward(s);
    auto dst = out.col(c);
    for (std::size_t p = 0; p < n; ++p) dst[p] = load(s.out[p]) * scale;
  }
  return out;
}

// Inverse FFT of each length-n column, truncated to L samples and scaled by n^{-1/2}.
ComplexMatrix truncated_backward(const TFMatrix& coefficients, std::size_t frame_length,
                                 const detail::FftPlan& plan) {
  const std::size_t n = plan.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix out(frame_length, coefficients.cols());
  auto& s = detail::scratch(n);
  for (std::size_t c = 0; c < coefficients.cols(); ++c) {
    std::ranges::copy(coefficients.col(c), reinterpret_cast<Complex*>(s.in));
    plan.backward(s);
    auto dst = out.col(c);
    for (std::size_t l = 0; l < frame_length; ++l) dst[l] = load(s.out[l]) * scale;
  }
  return out;
}

}  // namespace

AnalysisOperator::AnalysisOperator(std::size_t frame_length, std::size_t redundancy)
    : frame_length_(frame_length), redundancy_(redundancy) {
  validate_sizes(frame_length, redundancy);
  plan_ = detail::plan_for(coefficient_count());
}

TFMatrix AnalysisOperator::apply(const RealMatrix& frames) const {
  require_rows(frames.rows(), frame_length_, "analysis operator");
  return padded_forward(frames, *plan_);
}

TFMatrix AnalysisOperator::apply(const ComplexMatrix& frames) const {
  require_rows(frames.rows(), frame_length_, "analysis operator");
  return padded_forward(frames, *plan_);
}

ComplexMatrix AnalysisOperator::adjoint(const TFMatrix& coefficients) const {
  require_rows(coefficients.rows(), coefficient_count(), "analysis adjoint");
  return truncated_backward(coefficients, frame_length_, *plan_);
}

SynthesisOperator::SynthesisOperator(std::size_t frame_length, std::size_t redundancy)
    : frame_length_(frame_length), redundancy_(redundancy) {
  validate_sizes(frame_length, redundancy);
  plan_ = detail::plan_for(coefficient_count());
}

ComplexMatrix SynthesisOperator::apply(const TFMatrix& coefficients) const {
  require_rows(coefficients.rows(), coefficient_count(), "synthesis operator");
  return truncated_backward(coefficients, frame_length_, *plan_);
}

TFMatrix SynthesisOperator::adjoint(const RealMatrix& frames) const {
  require_rows(frames.rows(), frame_length_, "synthesis adjoint");
  return padded_forward(frames, *plan_);
}

TFMatrix SynthesisOperator::adjoint(const ComplexMatrix& frames) const {
  require_rows(frames.rows(), frame_length_, "synthesis adjoint");
  return padded_forward(frames, *plan_);
}

RealMatrix realify(const ComplexMatrix& values, RealMode mode) {
  RealMatrix out(values.rows(), values.cols());
  kernels::realify(values.values(), out.values(), mode);
  return out;
}

ComplexMatrix realify_adjoint(const RealMatrix& values, RealMode mode) {
  ComplexMatrix out(values.rows(), values.cols());
  const Complex factor = mode == RealMode::re_minus_im ? Complex(1.0, -1.0) : Complex(1.0, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = factor * values[i];
  return out;
}

ComplexMatrix to_complex(const RealMatrix& values) {
  ComplexMatrix out(values.rows(), values.cols());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i];
  return out;
}

}  // namespace tfr
