#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfr/frames.hpp"
#include "tfr/projections.hpp"
#include "tfr/shrinkage.hpp"
#include "tfr/solver.hpp"
#include "tfr/transforms.hpp"

namespace tfr {

enum class Flavor { plain, social };
enum class Model { analysis, synthesis };
enum class Task { denoise, declip };
enum class Preset { music, speech };

[[nodiscard]] Flavor parse_flavor(std::string_view s);
[[nodiscard]] Model parse_model(std::string_view s);
[[nodiscard]] Task parse_task(std::string_view s);
[[nodiscard]] Preset parse_preset(std::string_view s);
[[nodiscard]] RealMode parse_real_mode(std::string_view s);
[[nodiscard]] std::string_view to_string(Flavor f) noexcept;
[[nodiscard]] std::string_view to_string(Model m) noexcept;
[[nodiscard]] std::string_view to_string(Task t) noexcept;

/// Settings shared by both tasks. Defaults follow the music preset at 16 kHz.
struct RestorationConfig {
  Flavor flavor = Flavor::plain;
  Model model = Model::analysis;
  std::size_t frame_length = 1024;
  std::size_t redundancy = 2;
  /// b: blocks span 2b+1 frames. Ignored (treated as 0) by the plain flavor.
  std::size_t half_width = 5;
  double beta = 1e-3;
  std::size_t i_max_small = 10;
  std::size_t i_max_large = 1000000;
  std::vector<Pattern> patterns = default_music_patterns();
  WindowKind window = WindowKind::hann;
  RealMode real_mode = RealMode::re_minus_im;
  /// Per solver run; nullopt disables the limit.
  std::optional<double> time_budget_seconds = 30.0;
  /// Histogram bins for the residual entropy; nullopt uses floor(1 + log2 n).
  std::optional<std::size_t> entropy_bins;
  /// Worker threads for block processing; 0 uses the hardware concurrency.
  std::size_t threads = 0;
  /// Keep the iteration trace of every block's main solver run.
  bool record_trace = false;

  [[nodiscard]] std::size_t effective_half_width() const noexcept {
    return flavor == Flavor::plain ? 0 : half_width;
  }
  /// Throws ParameterError on inconsistent settings.
  void validate() const;
};

enum class WienerMode { off, on, automatic };

struct DenoiseConfig : RestorationConfig {
  /// Noise standard deviation; negative means unknown.
  double sigma = -1.0;
  WienerMode wiener = WienerMode::off;
  /// Automatic mode filters only when the estimated input SNR is at or below this.
  double wiener_threshold_db = 1.0;
};

struct DeclipConfig : RestorationConfig {
  /// Clip level; non-positive means unknown.
  double tau = -1.0;
  double alpha_main = 0.99;
  double clip_delta = clip_equality_tolerance;
  /// Inner solver of the synthesis projection.
  double inner_tolerance = -1.0;
  std::size_t max_inner = 200;
};

/// L, b and the pattern set of the named preset (music: 1024, 5, 21 frames;
/// speech: 512, 1, 13 frames).
void apply_preset(RestorationConfig& cfg, Preset preset);

/// key = value lines, '#' comments. Unknown keys and bad values raise ParseError.
void apply_config_text(std::string_view text, DenoiseConfig& cfg);
void apply_config_text(std::string_view text, DeclipConfig& cfg);

/// sigma sqrt(sum_j w_j)
[[nodiscard]] double eps_plain(double sigma, const Window& window);
/// (2b+1) eps_plain
[[nodiscard]] double eps_social(double sigma, const Window& window, std::size_t half_width);
/// ||Gamma||_0 max|Y|
[[nodiscard]] double init_mu_denoise(const Pattern& pattern, const RealMatrix& y);
/// min(sigma / std(Y), 0.99) with the population deviation; 0.99 when std(Y) = 0.
[[nodiscard]] double init_alpha(double sigma, const RealMatrix& y);
/// ||Gamma||_0 (1 - tau)
[[nodiscard]] double init_mu_declip(const Pattern& pattern, double tau);

/// Entropy (bits) of the histogram of |R| over Q equal-width bins spanning [0, max|R|].
[[nodiscard]] double residual_entropy(const TFMatrix& residual, std::optional<std::size_t> bins = std::nullopt);
[[nodiscard]] std::size_t entropy_bin_count(std::size_t entries);

/// Frequency-domain Wiener gain |s|^2 / (|s|^2 + sigma^2 sum w^2 / P) on A frame.
[[nodiscard]] std::vector<double> wiener_post(std::span<const double> frame, double sigma, const AnalysisOperator& a,
                                              const Window& window, RealMode mode = RealMode::re_minus_im);

struct PatternSelection {
  std::vector<double> entropies;
  std::size_t chosen = 0;
  double warm_mu = 0.0;
  TFMatrix warm_z;
};

/// What a block is restored against.
struct DenoiseTarget {
  double sigma = 0.0;
};
struct DeclipTarget {
  ClipMask mask;
};

/// Operators shared by every block of a run.
class BlockRestorer {
 public:
  explicit BlockRestorer(const RestorationConfig& cfg);

  [[nodiscard]] const AnalysisOperator& analysis() const noexcept { return a_; }
  [[nodiscard]] const SynthesisOperator& synthesis() const noexcept { return d_; }
  [[nodiscard]] const Window& window() const noexcept { return window_; }

  /// Runs the initialization loop over cfg.patterns on block `y`.
  [[nodiscard]] PatternSelection select_pattern(const RealMatrix& y, const DenoiseTarget& target) const;
  [[nodiscard]] PatternSelection select_pattern(const RealMatrix& y, const DeclipTarget& target,
                                                double alpha_loop = 1.0) const;

  struct Outcome {
    /// Restored time frames of the whole block (realified for synthesis).
    RealMatrix frames;
    SolverResult solver;
    std::optional<PatternSelection> selection;
  };

  [[nodiscard]] Outcome denoise(const RealMatrix& y, double sigma) const;
  [[nodiscard]] Outcome declip(const RealMatrix& y, const ClipMask& mask, double alpha_main, double inner_tolerance,
                               std::size_t max_inner) const;

  /// G on one block with explicit parameters. Exposed for the selection loop and tests.
  [[nodiscard]] SolverResult solve(const RealMatrix& y, const DenoiseTarget& target, const ShrinkageFamily& family,
                                   const MuSchedule& schedule, const TFMatrix& z0, std::size_t max_iterations) const;
  [[nodiscard]] SolverResult solve(const RealMatrix& y, const DeclipTarget& target, const ShrinkageFamily& family,
                                   const MuSchedule& schedule, const TFMatrix& z0, std::size_t max_iterations,
                                   double inner_tolerance = -1.0, std::size_t max_inner = 200) const;

  /// Z0 = A Y or D^H Y.
  [[nodiscard]] TFMatrix initial_coefficients(const RealMatrix& y) const;
  /// Time frames of an iterate: W itself for analysis, realify(D W) for synthesis.
  [[nodiscard]] RealMatrix time_frames(const Iterate& w) const;
  /// M W for the configured model.
  [[nodiscard]] TFMatrix lift(const Iterate& w) const;

 private:
  template <class Target>
  PatternSelection select_impl(const RealMatrix& y, const Target& target, const MuSchedule& base,
                               const std::function<double(const Pattern&)>& mu0) const;

  RestorationConfig cfg_;
  Window window_;
  AnalysisOperator a_;
  SynthesisOperator d_;
};

struct BlockRecord {
  std::size_t index = 0;
  /// Observed block (windowed frames).
  const RealMatrix* observed = nullptr;
  /// Restored block before centre extraction.
  const RealMatrix* restored = nullptr;
  /// Declipping only.
  const ClipMask* mask = nullptr;
  const SolverResult* solver = nullptr;
  const PatternSelection* selection = nullptr;
};

struct RunOptions {
  /// Called once per block, in frame order, from the calling thread.
  std::function<void(const BlockRecord&)> on_block;
};

struct RestorationReport {
  Signal output;
  std::size_t blocks = 0;
  std::size_t total_iterations = 0;
  std::size_t unconverged_blocks = 0;
  std::size_t projection_warnings = 0;
  bool wiener_applied = false;
};

[[nodiscard]] RestorationReport denoise(const Signal& signal, const DenoiseConfig& cfg, const RunOptions& options = {});
[[nodiscard]] RestorationReport declip(const Signal& signal, const DeclipConfig& cfg, const RunOptions& options = {});

}  // namespace tfr
