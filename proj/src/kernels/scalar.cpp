#include <algorithm>

#include "kernel_table.hpp"

namespace tfr::kernels::detail {
namespace {

void squared_magnitude(const Complex* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = in[i].real();
    const double im = in[i].imag();
    out[i] = re * re + im * im;
  }
}

void accumulate(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void apply_energy_gain(Complex* z, const double* energy, double mu2, std::size_t n) {
  if (mu2 == 0.0) return;
  for (std::size_t i = 0; i < n; ++i) {
    const double gain = energy[i] > 0.0 ? std::max(1.0 - mu2 / energy[i], 0.0) : 0.0;
    z[i] = Complex(z[i].real() * gain, z[i].imag() * gain);
  }
}

double sum_squares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double diff_sum_squares_real(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void add_difference(Complex* acc, const Complex* a, const Complex* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = Complex(acc[i].real() + (a[i].real() - b[i].real()),
                     acc[i].imag() + (a[i].imag() - b[i].imag()));
  }
}

void axpy(Complex* dst, double alpha, const Complex* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = Complex(dst[i].real() + alpha * src[i].real(), dst[i].imag() + alpha * src[i].imag());
  }
}

void realify(const Complex* in, double* out, RealMode mode, std::size_t n) {
  if (mode == RealMode::re_only) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i].real();
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i].real() - in[i].imag();
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{
      squared_magnitude, accumulate, apply_energy_gain, sum_squares,
      diff_sum_squares_real, add_difference, axpy, realify,
  };
  return table;
}

}  // namespace tfr::kernels::detail
