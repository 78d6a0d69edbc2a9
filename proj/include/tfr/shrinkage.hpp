#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfr/matrix.hpp"

namespace tfr {

using BinaryMatrix = Matrix<std::uint8_t>;

/// Binary time-frequency neighbourhood: (2F+1) frequency rows by (2T+1) frames.
/// The centre entry sits at (F, T).
class Pattern {
 public:
  /// Throws ParameterError for even dimensions, non-binary entries or an all-zero mask.
  Pattern(std::string name, BinaryMatrix mask);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const BinaryMatrix& mask() const noexcept { return mask_; }
  [[nodiscard]] std::size_t frequency_extent() const noexcept { return mask_.rows() / 2; }
  [[nodiscard]] std::size_t time_extent() const noexcept { return mask_.cols() / 2; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return nonzeros_; }

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::string name_;
  BinaryMatrix mask_;
  std::size_t nonzeros_ = 0;
};

/// Builds a pattern from rows of 0/1 given top (lowest frequency offset) to bottom.
[[nodiscard]] Pattern make_pattern(std::string name, const std::vector<std::vector<int>>& rows);

/// Parses the pattern file format: blocks separated by blank lines, each
/// starting with `name <label>` followed by whitespace-separated 0/1 rows.
/// Lines starting with '#' are comments. Errors carry the 1-based line number.
[[nodiscard]] std::vector<Pattern> load_patterns(std::string_view text);
[[nodiscard]] std::vector<Pattern> load_pattern_file(const std::string& path);
[[nodiscard]] std::string format_patterns(std::span<const Pattern> patterns);

/// The six parametric shapes, all (2F+1) x time_span: horizontal bar, vertical
/// bar, causal half bar, rising and falling 3-wide diagonals, 3x3 square.
/// time_span must be odd and at least 3.
[[nodiscard]] std::vector<Pattern> default_patterns(std::size_t time_span, std::size_t frequency_half_extent = 7);
/// 21 frames: 320 ms at a 16 ms hop.
[[nodiscard]] std::vector<Pattern> default_music_patterns();
/// 13 frames: 96 ms at an 8 ms hop.
[[nodiscard]] std::vector<Pattern> default_speech_patterns();

/// Keeps the k largest-magnitude entries. Ties go to the lower column-major index.
[[nodiscard]] TFMatrix hard_threshold(const TFMatrix& z, std::size_t k);

/// Patch energies E(i,j) = sum over the mask of |Z|^2 around (i,j), with
/// half-sample mirror padding on all four borders.
[[nodiscard]] RealMatrix patch_energy(const TFMatrix& z, const Pattern& pattern);

/// Persistent empirical Wiener: Z(i,j) * max(1 - mu^2 / E(i,j), 0).
[[nodiscard]] TFMatrix pew(const TFMatrix& z, const Pattern& pattern, double mu);

/// Plain (hard thresholding, mu counts discarded coefficients) or social (PEW).
class ShrinkageFamily {
 public:
  [[nodiscard]] static ShrinkageFamily plain() { return ShrinkageFamily(std::nullopt); }
  [[nodiscard]] static ShrinkageFamily social(Pattern pattern) { return ShrinkageFamily(std::move(pattern)); }

  [[nodiscard]] bool is_plain() const noexcept { return !pattern_.has_value(); }
  /// Throws ParameterError for plain families.
  [[nodiscard]] const Pattern& pattern() const;

 private:
  explicit ShrinkageFamily(std::optional<Pattern> pattern) : pattern_(std::move(pattern)) {}
  std::optional<Pattern> pattern_;
};

/// S_mu(Z). Plain: H_{n - min(mu, n)} with n = Z.size(); mu must be a
/// non-negative integer. Social: pew(Z, pattern, mu).
[[nodiscard]] TFMatrix shrink(const ShrinkageFamily& family, const TFMatrix& z, double mu);

enum class ScheduleRule { linear_decrement, geometric };

struct MuSchedule {
  double mu0 = 0.0;
  ScheduleRule rule = ScheduleRule::linear_decrement;
  double alpha = 1.0;

  /// Throws ParameterError unless mu0 >= 0 and, for geometric, 0 <= alpha <= 1.
  /// alpha = 0 (a noiseless block) drops mu to zero after the first step.
  void validate() const;
};

/// max(mu - 1, 0) or alpha * mu.
[[nodiscard]] double next_mu(const MuSchedule& schedule, double mu);

}  // namespace tfr
