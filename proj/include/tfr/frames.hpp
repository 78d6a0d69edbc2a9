#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tfr/matrix.hpp"

namespace tfr {

/// Mono time signal. Samples are nominally in [-1, 1].
struct Signal {
  std::vector<double> samples;
  unsigned sample_rate = 16000;
};

enum class WindowKind { hann, sine, rectangular };

[[nodiscard]] WindowKind parse_window_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(WindowKind kind) noexcept;

struct Window {
  std::vector<double> coefficients;
  WindowKind kind = WindowKind::hann;

  [[nodiscard]] std::size_t size() const noexcept { return coefficients.size(); }
  [[nodiscard]] double sum() const noexcept;
  [[nodiscard]] double sum_of_squares() const noexcept;
};

/// Periodic Hann, half-sample sine, or all-ones window of length L.
/// L must be at least 4 and a multiple of 4 (hop L/4).
[[nodiscard]] Window make_window(WindowKind kind, std::size_t frame_length);

/// Windowed frames of a signal at 75% overlap; columns are frames.
struct FrameGrid {
  RealMatrix frames;
  std::size_t hop = 0;
  Window window;
  std::size_t original_length = 0;

  [[nodiscard]] std::size_t frame_length() const noexcept { return frames.rows(); }
  [[nodiscard]] std::size_t frame_count() const noexcept { return frames.cols(); }
};

/// L x (2b+1) frames centred on frame `center_index`.
struct FrameBlock {
  RealMatrix columns;
  std::size_t center_index = 0;
  std::size_t half_width = 0;
};

/// Number of frames for a signal of `length` samples: ceil((length - L) / hop) + 1,
/// never fewer than one.
[[nodiscard]] std::size_t frame_count_for(std::size_t length, std::size_t frame_length);

/// Frames `samples` with `window` (whose length fixes L). The tail is zero-padded.
[[nodiscard]] FrameGrid analyze_frames(std::span<const double> samples, const Window& window);
[[nodiscard]] FrameGrid analyze_frames(const Signal& signal, const Window& window);

/// Gathers frames n-b .. n+b; indices outside [0, N) replicate the nearest edge frame.
[[nodiscard]] FrameBlock extract_block(const FrameGrid& grid, std::size_t n, std::size_t half_width);

/// Same block layout taken from an arbitrary L x N matrix (e.g. unwindowed frames).
[[nodiscard]] FrameBlock extract_block(const RealMatrix& frames, std::size_t n, std::size_t half_width);

[[nodiscard]] std::vector<double> center_column(const FrameBlock& block);

/// Weighted overlap-add: each output sample is sum_n w * frame_n divided by
/// sum_n w^2 (floored at 1e-12), truncated to `original_length`.
[[nodiscard]] std::vector<double> overlap_add(const RealMatrix& frames, const Window& window,
                                              std::size_t original_length);

}  // namespace tfr
