#pragma once

#include <cstddef>
#include <memory>

#include "tfr/common.hpp"
#include "tfr/matrix.hpp"

namespace tfr {

namespace detail {
class FftPlan;
}

/// Redundant DFT analysis operator A (P x L, P = R L) with entries
/// P^{-1/2} exp(-2 pi i p l / P). Tight: A^H A = I, so frame_bound() is 1.
///
/// Products with A go through a size-P FFT of the zero-padded frame; products
/// with A^H truncate the size-P inverse FFT to L samples.
class AnalysisOperator {
 public:
  AnalysisOperator(std::size_t frame_length, std::size_t redundancy);

  [[nodiscard]] std::size_t frame_length() const noexcept { return frame_length_; }
  [[nodiscard]] std::size_t redundancy() const noexcept { return redundancy_; }
  [[nodiscard]] std::size_t coefficient_count() const noexcept { return frame_length_ * redundancy_; }
  [[nodiscard]] double frame_bound() const noexcept { return 1.0; }

  /// Z = A X, column by column.
  [[nodiscard]] TFMatrix apply(const RealMatrix& frames) const;
  [[nodiscard]] TFMatrix apply(const ComplexMatrix& frames) const;
  /// A^H Z, an L x cols complex matrix.
  [[nodiscard]] ComplexMatrix adjoint(const TFMatrix& coefficients) const;

 private:
  std::size_t frame_length_;
  std::size_t redundancy_;
  std::shared_ptr<const detail::FftPlan> plan_;
};

/// Redundant inverse-DFT dictionary D (L x S, S = R L) with entries
/// S^{-1/2} exp(2 pi i l s / S). Tight: D D^H = I, so frame_bound() is 1.
class SynthesisOperator {
 public:
  SynthesisOperator(std::size_t frame_length, std::size_t redundancy);

  [[nodiscard]] std::size_t frame_length() const noexcept { return frame_length_; }
  [[nodiscard]] std::size_t redundancy() const noexcept { return redundancy_; }
  [[nodiscard]] std::size_t coefficient_count() const noexcept { return frame_length_ * redundancy_; }
  [[nodiscard]] double frame_bound() const noexcept { return 1.0; }

  /// D W, an L x cols complex matrix.
  [[nodiscard]] ComplexMatrix apply(const TFMatrix& coefficients) const;
  /// D^H X, an S x cols coefficient matrix.
  [[nodiscard]] TFMatrix adjoint(const RealMatrix& frames) const;
  [[nodiscard]] TFMatrix adjoint(const ComplexMatrix& frames) const;

 private:
  std::size_t frame_length_;
  std::size_t redundancy_;
  std::shared_ptr<const detail::FftPlan> plan_;
};

/// Entrywise Re(v) - Im(v) or Re(v), depending on `mode`.
[[nodiscard]] RealMatrix realify(const ComplexMatrix& values, RealMode mode = RealMode::re_minus_im);

/// Adjoint of `realify` for the real inner product: (1 - i) r or r.
[[nodiscard]] ComplexMatrix realify_adjoint(const RealMatrix& values, RealMode mode = RealMode::re_minus_im);

/// realify(realify_adjoint(r)) = gain * r; 2 for re_minus_im, 1 for re_only.
[[nodiscard]] constexpr double realify_gain(RealMode mode) noexcept {
  return mode == RealMode::re_minus_im ? 2.0 : 1.0;
}

[[nodiscard]] ComplexMatrix to_complex(const RealMatrix& values);

}  // namespace tfr
