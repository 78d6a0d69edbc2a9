#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tfr/frames.hpp"

namespace tfr {

inline constexpr double metric_cap_db = 300.0;

/// 10 log10(||ref||^2 / ||ref - est||^2), capped at +300 dB.
[[nodiscard]] double snr(const Signal& ref, const Signal& est);
/// Same formula as snr: no gain or filter allowance.
[[nodiscard]] double sdr(const Signal& ref, const Signal& est);

/// Like snr/sdr but skipping `margin` samples at both ends (OLA edge region).
[[nodiscard]] double snr_interior(const Signal& ref, const Signal& est, std::size_t margin);

struct NoisySignal {
  Signal signal;
  double sigma = 0.0;
};

/// x + N(0, sigma^2) with sigma = rms(x) 10^(-snr/20). +inf returns x and sigma 0.
[[nodiscard]] NoisySignal add_noise(const Signal& x, double target_snr_db, std::uint64_t seed);

/// Hard clipping at +-tau.
[[nodiscard]] Signal clip_to_tau(const Signal& x, double tau);

struct ClippedSignal {
  Signal signal;
  double tau = 1.0;
  double achieved_db = 0.0;
};

/// Bisects tau in (0, 1) until the clipped signal's SDR is within tol_db of the
/// target. Throws RangeError when the target is out of reach.
[[nodiscard]] ClippedSignal clip_to_sdr(const Signal& x, double target_sdr_db, double tol_db = 0.1,
                                        std::size_t max_iterations = 60);

struct Atom {
  /// Frequency in DFT bins of the frame length; fractional values fall between bins.
  double bin = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;
};

struct SynthSpec {
  std::vector<Atom> atoms;
  double duration_seconds = 1.0;
  unsigned sample_rate = 16000;
  /// Bins are relative to this frame length: frequency = bin * rate / L.
  std::size_t frame_length = 1024;
  /// Random atoms drawn when `atoms` is empty and random_atoms > 0.
  std::size_t random_atoms = 0;
  /// Draw random atoms at continuous frequencies instead of integer bins.
  bool off_grid = false;
  std::uint64_t seed = 0;
  /// Peak-normalize to this value when positive.
  double normalize_peak = 0.0;
};

/// Sum of cosines at the given bins of the frame length (integer bins are
/// exactly periodic over a frame).
[[nodiscard]] Signal synth_signal(const SynthSpec& spec);

[[nodiscard]] SynthSpec parse_synth_spec(const std::string& json_text);

}  // namespace tfr
