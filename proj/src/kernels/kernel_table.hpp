#pragma once

#include <cstddef>

#include "tfr/common.hpp"

namespace tfr::kernels::detail {

// Raw-pointer signatures; the public span API checks sizes before dispatching.
struct KernelTable {
  void (*squared_magnitude)(const Complex* in, double* out, std::size_t n);
  void (*accumulate)(double* dst, const double* src, std::size_t n);
  void (*apply_energy_gain)(Complex* z, const double* energy, double mu2, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*diff_sum_squares_real)(const double* a, const double* b, std::size_t n);
  void (*add_difference)(Complex* acc, const Complex* a, const Complex* b, std::size_t n);
  void (*axpy)(Complex* dst, double alpha, const Complex* src, std::size_t n);
  void (*realify)(const Complex* in, double* out, RealMode mode, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

#if defined(TFR_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace tfr::kernels::detail
