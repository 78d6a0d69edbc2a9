#include "tfr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include <json.hpp>

namespace tfr {

namespace {

double ratio_db(std::span<const double> ref, std::span<const double> est) {
  if (ref.size() != est.size()) throw DimensionError("signals differ in length");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    signal += ref[i] * ref[i];
    const double d = ref[i] - est[i];
    error += d * d;
  }
  if (signal == 0.0) throw ParameterError("reference signal is zero");
  if (error == 0.0) return metric_cap_db;
  return std::min(10.0 * std::log10(signal / error), metric_cap_db);
}

}  // namespace

double snr(const Signal& ref, const Signal& est) { return ratio_db(ref.samples, est.samples); }
double sdr(const Signal& ref, const Signal& est) { return ratio_db(ref.samples, est.samples); }

double snr_interior(const Signal& ref, const Signal& est, std::size_t margin) {
  if (ref.samples.size() != est.samples.size()) throw DimensionError("signals differ in length");
  if (ref.samples.size() <= 2 * margin) return ratio_db(ref.samples, est.samples);
  const std::span<const double> r(ref.samples);
  const std::span<const double> e(est.samples);
  const std::size_t n = r.size() - 2 * margin;
  return ratio_db(r.subspan(margin, n), e.subspan(margin, n));
}

NoisySignal add_noise(const Signal& x, double target_snr_db, std::uint64_t seed) {
  if (x.samples.empty()) throw ParameterError("signal is empty");
  double power = 0.0;
  for (double v : x.samples) power += v * v;
  if (power == 0.0) throw ParameterError("cannot set an SNR on a zero signal");
  if (std::isinf(target_snr_db) && target_snr_db > 0.0) return {x, 0.0};
  if (std::isnan(target_snr_db)) throw ParameterError("target SNR is not a number");

  const double rms = std::sqrt(power / static_cast<double>(x.samples.size()));
  const double sigma = rms * std::pow(10.0, -target_snr_db / 20.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  NoisySignal out{x, sigma};
  for (double& v : out.signal.samples) v += noise(rng);
  return out;
}

Signal clip_to_tau(const Signal& x, double tau) {
  if (!(tau > 0.0)) throw ParameterError("clip level must be positive");
  Signal y = x;
  for (double& v : y.samples) v = std::clamp(v, -tau, tau);
  return y;
}

ClippedSignal clip_to_sdr(const Signal& x, double target_sdr_db, double tol_db, std::size_t max_iterations) {
  if (x.samples.empty()) throw ParameterError("signal is empty");
  if (!(tol_db > 0.0)) throw ParameterError("tolerance must be positive");
  double peak = 0.0;
  for (double v : x.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw ParameterError("cannot clip a zero signal to a target SDR");

  auto evaluate = [&](double tau) {
    ClippedSignal c{clip_to_tau(x, tau), tau, 0.0};
    c.achieved_db = sdr(x, c.signal);
    return c;
  };
  // SDR is non-decreasing in tau; the search interval is (0, peak].
  const ClippedSignal top = evaluate(peak);
  if (target_sdr_db >= top.achieved_db - tol_db) return top;
  const ClippedSignal bottom = evaluate(peak * 1e-9);
  if (target_sdr_db < bottom.achieved_db - tol_db) {
    throw RangeError("target SDR " + std::to_string(target_sdr_db) + " dB is below the reachable minimum");
  }

  double lo = 0.0;
  double hi = peak;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    ClippedSignal c = evaluate(mid);
    if (std::abs(c.achieved_db - target_sdr_db) <= tol_db) return c;
    (c.achieved_db < target_sdr_db ? lo : hi) = mid;
  }
  throw RangeError("clip level search did not reach " + std::to_string(target_sdr_db) + " dB");
}

Signal synth_signal(const SynthSpec& spec) {
  if (spec.sample_rate == 0) throw ParameterError("sample rate must be positive");
  if (!(spec.duration_seconds > 0.0)) throw ParameterError("duration must be positive");
  if (spec.frame_length < 4) throw ParameterError("frame length too small");
  const auto length = static_cast<std::size_t>(std::llround(spec.duration_seconds * spec.sample_rate));
  if (length == 0) throw ParameterError("duration shorter than one sample");

  std::vector<Atom> atoms = spec.atoms;
  if (atoms.empty() && spec.random_atoms > 0) {
    const std::size_t lo = 4;
    const std::size_t hi = spec.frame_length / 2 - 4;
    if (hi <= lo + spec.random_atoms) throw ParameterError("frame length too small for the requested atoms");
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> bin(lo, hi);
    std::uniform_real_distribution<double> offset(0.0, 1.0);
    std::uniform_real_distribution<double> amplitude(0.3, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::set<std::size_t> used;
    while (atoms.size() < spec.random_atoms) {
      const std::size_t k = bin(rng);
      if (!used.insert(k).second) continue;
      const double shift = spec.off_grid ? offset(rng) : 0.0;
      atoms.push_back({static_cast<double>(k) + shift, amplitude(rng), phase(rng)});
    }
  }

  Signal out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(length, 0.0);
  const auto L = static_cast<double>(spec.frame_length);
  for (const auto& atom : atoms) {
    if (!(atom.bin >= 0.0) || atom.bin >= static_cast<double>(spec.frame_length)) {
      throw ParameterError("atom bin outside [0, frame length)");
    }
    const double omega = 2.0 * std::numbers::pi * atom.bin / L;
    for (std::size_t t = 0; t < length; ++t) {
      out.samples[t] += atom.amplitude * std::cos(omega * static_cast<double>(t) + atom.phase);
    }
  }
  if (spec.normalize_peak > 0.0) {
    double peak = 0.0;
    for (double v : out.samples) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (double& v : out.samples) v *= spec.normalize_peak / peak;
    }
  }
  return out;
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  using nlohmann::json;
  SynthSpec spec;
  try {
    const json j = json::parse(json_text);
    spec.duration_seconds = j.value("duration", spec.duration_seconds);
    spec.sample_rate = j.value("rate", spec.sample_rate);
    spec.frame_length = j.value("frame_length", spec.frame_length);
    spec.random_atoms = j.value("random_atoms", spec.random_atoms);
    spec.off_grid = j.value("off_grid", spec.off_grid);
    spec.seed = j.value("seed", spec.seed);
    spec.normalize_peak = j.value("normalize_peak", spec.normalize_peak);
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) {
        spec.atoms.push_back({a.at("bin").get<double>(), a.value("amplitude", 1.0), a.value("phase", 0.0)});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad synth spec: ") + e.what());
  }
  return spec;
}

}  // namespace tfr
