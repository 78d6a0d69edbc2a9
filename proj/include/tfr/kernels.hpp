#pragma once

// Data-parallel inner loops shared by the transforms, shrinkages and solver.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is picked once at startup from CPUID; setting the
// environment variable TFR_ISA=scalar forces the reference path. Elementwise
// kernels produce bit-identical results on both paths; reductions differ only
// by summation order.

#include <span>
#include <string_view>

#include "tfr/common.hpp"

namespace tfr::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] Isa active_isa() noexcept;
[[nodiscard]] bool isa_available(Isa isa) noexcept;
[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

/// Switches the dispatch table. Not synchronized: call before spawning workers.
/// Throws ParameterError if the ISA is not supported by this CPU or build.
void force_isa(Isa isa);

/// out[i] = re(in[i])^2 + im(in[i])^2
void squared_magnitude(std::span<const Complex> in, std::span<double> out);

/// dst[i] += src[i]
void accumulate(std::span<double> dst, std::span<const double> src);

/// z[i] *= max(1 - mu2 / energy[i], 0), with energy[i] == 0 mapping to 0.
/// mu2 == 0 leaves z untouched.
void apply_energy_gain(std::span<Complex> z, std::span<const double> energy, double mu2);

[[nodiscard]] double sum_squares(std::span<const double> x);
[[nodiscard]] double sum_squares(std::span<const Complex> x);

/// sum |a[i] - b[i]|^2
[[nodiscard]] double diff_sum_squares(std::span<const Complex> a, std::span<const Complex> b);
[[nodiscard]] double diff_sum_squares(std::span<const double> a, std::span<const double> b);

/// acc[i] += a[i] - b[i]
void add_difference(std::span<Complex> acc, std::span<const Complex> a, std::span<const Complex> b);

/// dst[i] += alpha * src[i]
void axpy(std::span<Complex> dst, double alpha, std::span<const Complex> src);

/// out[i] = re(in[i]) - im(in[i])  (re_minus_im)  or  re(in[i])  (re_only)
void realify(std::span<const Complex> in, std::span<double> out, RealMode mode);

}  // namespace tfr::kernels
