#include "tfr/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace tfr {

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "sine") return WindowKind::sine;
  if (name == "rectangular" || name == "rect") return WindowKind::rectangular;
  throw ParameterError("unknown window kind: " + std::string(name));
}

std::string_view to_string(WindowKind kind) noexcept {
  switch (kind) {
    case WindowKind::hann: return "hann";
    case WindowKind::sine: return "sine";
    case WindowKind::rectangular: return "rectangular";
  }
  return "hann";
}

double Window::sum() const noexcept {
  return std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
}

double Window::sum_of_squares() const noexcept {
  return std::inner_product(coefficients.begin(), coefficients.end(), coefficients.begin(), 0.0);
}

Window make_window(WindowKind kind, std::size_t frame_length) {
  if (frame_length < 4 || frame_length % 4 != 0) {
    throw ParameterError("frame length must be a positive multiple of 4, got " +
                         std::to_string(frame_length));
  }
  Window w;
  w.kind = kind;
  w.coefficients.resize(frame_length);
  const double len = static_cast<double>(frame_length);
  for (std::size_t j = 0; j < frame_length; ++j) {
    const double t = static_cast<double>(j);
    switch (kind) {
      case WindowKind::hann:
        w.coefficients[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / len);
        break;
      case WindowKind::sine:
        w.coefficients[j] = std::sin(std::numbers::pi * (t + 0.5) / len);
        break;
      case WindowKind::rectangular:
        w.coefficients[j] = 1.0;
        break;
    }
  }
  return w;
}

std::size_t frame_count_for(std::size_t length, std::size_t frame_length) {
  const std::size_t hop = frame_length / 4;
  if (length <= frame_length) return 1;
  return (length - frame_length + hop - 1) / hop + 1;
}

FrameGrid analyze_frames(std::span<const double> samples, const Window& window) {
  const std::size_t L = window.size();
  if (L < 4 || L % 4 != 0) throw ParameterError("window length must be a positive multiple of 4");
  if (samples.empty()) throw ParameterError("cannot frame an empty signal");

  FrameGrid grid;
  grid.hop = L / 4;
  grid.window = window;
  grid.original_length = samples.size();
  const std::size_t count = frame_count_for(samples.size(), L);
  grid.frames = RealMatrix(L, count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t start = n * grid.hop;
    auto column = grid.frames.col(n);
    for (std::size_t j = 0; j < L && start + j < samples.size(); ++j) {
      column[j] = window.coefficients[j] * samples[start + j];
    }
  }
  return grid;
}

FrameGrid analyze_frames(const Signal& signal, const Window& window) {
  return analyze_frames(std::span<const double>(signal.samples), window);
}

FrameBlock extract_block(const RealMatrix& frames, std::size_t n, std::size_t half_width) {
  const std::size_t count = frames.cols();
  if (n >= count) {
    throw IndexError("frame index " + std::to_string(n) + " out of range (" + std::to_string(count) +
                     " frames)");
  }
  FrameBlock block;
  block.center_index = n;
  block.half_width = half_width;
  block.columns = RealMatrix(frames.rows(), 2 * half_width + 1);
  const auto last = static_cast<std::ptrdiff_t>(count) - 1;
  for (std::size_t j = 0; j < 2 * half_width + 1; ++j) {
    const auto wanted = static_cast<std::ptrdiff_t>(n + j) - static_cast<std::ptrdiff_t>(half_width);
    const auto source = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(wanted, 0, last));
    std::ranges::copy(frames.col(source), block.columns.col(j).begin());
  }
  return block;
}

FrameBlock extract_block(const FrameGrid& grid, std::size_t n, std::size_t half_width) {
  return extract_block(grid.frames, n, half_width);
}

std::vector<double> center_column(const FrameBlock& block) {
  const auto column = block.columns.col(block.half_width);
  return {column.begin(), column.end()};
}

std::vector<double> overlap_add(const RealMatrix& frames, const Window& window,
                                std::size_t original_length) {
  const std::size_t L = frames.rows();
  if (L != window.size()) throw DimensionError("frame length does not match window length");
  const std::size_t hop = L / 4;
  const std::size_t span = frames.cols() == 0 ? 0 : (frames.cols() - 1) * hop + L;
  std::vector<double> numerator(std::max(span, original_length), 0.0);
  std::vector<double> weight(numerator.size(), 0.0);
  for (std::size_t n = 0; n < frames.cols(); ++n) {
    const auto column = frames.col(n);
    const std::size_t start = n * hop;
    for (std::size_t j = 0; j < L; ++j) {
      const double w = window.coefficients[j];
      numerator[start + j] += w * column[j];
      weight[start + j] += w * w;
    }
  }
  std::vector<double> out(original_length);
  for (std::size_t t = 0; t < original_length; ++t) {
    out[t] = numerator[t] / std::max(weight[t], 1e-12);
  }
  return out;
}

}  // namespace tfr
