// Compiled with -mavx2 only; callers reach it through the dispatch table after
// a CPUID check. No FMA so that elementwise results match the scalar path.

#include <immintrin.h>

#include "kernel_table.hpp"

namespace tfr::kernels::detail {
namespace {

// (x0, x2, x1, x3) -> (x0, x1, x2, x3), undoing the lane split of hadd/unpack.
constexpr int kInterleaveFix = 0b11'01'10'00;

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void squared_magnitude(const Complex* in, double* out, std::size_t n) {
  const auto* p = reinterpret_cast<const double*>(in);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d sums = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(sums, kInterleaveFix));
  }
  for (; i < n; ++i) {
    const double re = in[i].real();
    const double im = in[i].imag();
    out[i] = re * re + im * im;
  }
}

void accumulate(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void apply_energy_gain(Complex* z, const double* energy, double mu2, std::size_t n) {
  if (mu2 == 0.0) return;
  auto* p = reinterpret_cast<double*>(z);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d mu2v = _mm256_set1_pd(mu2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = _mm256_loadu_pd(energy + i);
    const __m256d positive = _mm256_cmp_pd(e, zero, _CMP_GT_OQ);
    __m256d gain = _mm256_max_pd(_mm256_sub_pd(one, _mm256_div_pd(mu2v, e)), zero);
    gain = _mm256_and_pd(gain, positive);
    const __m256d g01 = _mm256_permute4x64_pd(gain, 0b01'01'00'00);
    const __m256d g23 = _mm256_permute4x64_pd(gain, 0b11'11'10'10);
    _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(p + 2 * i), g01));
    _mm256_storeu_pd(p + 2 * i + 4, _mm256_mul_pd(_mm256_loadu_pd(p + 2 * i + 4), g23));
  }
  for (; i < n; ++i) {
    const double e = energy[i];
    double gain = 0.0;
    if (e > 0.0) {
      gain = 1.0 - mu2 / e;
      if (gain < 0.0) gain = 0.0;
    }
    z[i] = Complex(z[i].real() * gain, z[i].imag() * gain);
  }
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(b, b));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double diff_sum_squares_real(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void add_difference(Complex* acc, const Complex* a, const Complex* b, std::size_t n) {
  auto* pacc = reinterpret_cast<double*>(acc);
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    _mm256_storeu_pd(pacc + i, _mm256_add_pd(_mm256_loadu_pd(pacc + i), d));
  }
  for (; i < m; ++i) pacc[i] += pa[i] - pb[i];
}

void axpy(Complex* dst, double alpha, const Complex* src, std::size_t n) {
  auto* pd = reinterpret_cast<double*>(dst);
  const auto* ps = reinterpret_cast<const double*>(src);
  const __m256d av = _mm256_set1_pd(alpha);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d scaled = _mm256_mul_pd(av, _mm256_loadu_pd(ps + i));
    _mm256_storeu_pd(pd + i, _mm256_add_pd(_mm256_loadu_pd(pd + i), scaled));
  }
  for (; i < m; ++i) pd[i] += alpha * ps[i];
}

void realify(const Complex* in, double* out, RealMode mode, std::size_t n) {
  const auto* p = reinterpret_cast<const double*>(in);
  std::size_t i = 0;
  if (mode == RealMode::re_only) {
    for (; i + 4 <= n; i += 4) {
      const __m256d a = _mm256_loadu_pd(p + 2 * i);
      const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
      _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), kInterleaveFix));
    }
    for (; i < n; ++i) out[i] = in[i].real();
  } else {
    for (; i + 4 <= n; i += 4) {
      const __m256d a = _mm256_loadu_pd(p + 2 * i);
      const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
      _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(_mm256_hsub_pd(a, b), kInterleaveFix));
    }
    for (; i < n; ++i) out[i] = in[i].real() - in[i].imag();
  }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{
      squared_magnitude, accumulate, apply_energy_gain, sum_squares,
      diff_sum_squares_real, add_difference, axpy, realify,
  };
  return table;
}

}  // namespace tfr::kernels::detail
