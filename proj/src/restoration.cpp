#include "tfr/restoration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "tfr/kernels.hpp"

namespace tfr {

// ---------------------------------------------------------------- enums

Flavor parse_flavor(std::string_view s) {
  if (s == "plain") return Flavor::plain;
  if (s == "social") return Flavor::social;
  throw ParameterError("unknown flavor: " + std::string(s));
}

Model parse_model(std::string_view s) {
  if (s == "analysis" || s == "cosparse") return Model::analysis;
  if (s == "synthesis" || s == "sparse") return Model::synthesis;
  throw ParameterError("unknown model: " + std::string(s));
}

Task parse_task(std::string_view s) {
  if (s == "denoise" || s == "noise") return Task::denoise;
  if (s == "declip" || s == "clip") return Task::declip;
  throw ParameterError("unknown task: " + std::string(s));
}

Preset parse_preset(std::string_view s) {
  if (s == "music") return Preset::music;
  if (s == "speech") return Preset::speech;
  throw ParameterError("unknown preset: " + std::string(s));
}

RealMode parse_real_mode(std::string_view s) {
  if (s == "re_minus_im") return RealMode::re_minus_im;
  if (s == "re_only") return RealMode::re_only;
  throw ParameterError("unknown real mode: " + std::string(s));
}

std::string_view to_string(Flavor f) noexcept { return f == Flavor::plain ? "plain" : "social"; }
std::string_view to_string(Model m) noexcept { return m == Model::analysis ? "analysis" : "synthesis"; }
std::string_view to_string(Task t) noexcept { return t == Task::denoise ? "denoise" : "declip"; }

// ---------------------------------------------------------------- config

void RestorationConfig::validate() const {
  if (!is_power_of_two(frame_length) || frame_length < 4) {
    throw ParameterError("frame length must be a power of two >= 4");
  }
  if (redundancy == 0) throw ParameterError("redundancy must be at least 1");
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  if (i_max_small == 0 || i_max_large == 0) throw ParameterError("iteration caps must be at least 1");
  if (flavor == Flavor::social && patterns.empty()) throw ParameterError("social flavor needs at least one pattern");
  if (entropy_bins && *entropy_bins == 0) throw ParameterError("entropy bin count must be positive");
}

void apply_preset(RestorationConfig& cfg, Preset preset) {
  if (preset == Preset::music) {
    cfg.frame_length = 1024;
    cfg.half_width = 5;
    cfg.patterns = default_music_patterns();
  } else {
    cfg.frame_length = 512;
    cfg.half_width = 1;
    cfg.patterns = default_speech_patterns();
  }
}

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Entry> parse_entries(std::string_view text) {
  std::vector<Entry> out;
  std::istringstream lines{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(line_no, "expected 'key = value'");
    out.push_back({std::string(key), std::string(value), line_no});
  }
  return out;
}

double to_double(const Entry& e) {
  double v = 0.0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(e.line, e.key + ": not a number: " + e.value);
  }
  return v;
}

std::size_t to_size(const Entry& e) {
  std::size_t v = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  // Accept 1e6-style values for the large iteration cap.
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc{} && ptr == last) return v;
  const double d = to_double(e);
  if (d < 0.0 || std::floor(d) != d || d > 1e18) throw ParseError(e.line, e.key + ": not a count: " + e.value);
  return static_cast<std::size_t>(d);
}

template <class Fn>
auto rethrow_at(const Entry& e, Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& err) {
    throw ParseError(e.line, e.key + ": " + err.what());
  }
}

bool apply_common(const Entry& e, RestorationConfig& cfg) {
  const auto& k = e.key;
  if (k == "preset") {
    rethrow_at(e, [&] { apply_preset(cfg, parse_preset(e.value)); });
  } else if (k == "flavor") {
    cfg.flavor = rethrow_at(e, [&] { return parse_flavor(e.value); });
  } else if (k == "model") {
    cfg.model = rethrow_at(e, [&] { return parse_model(e.value); });
  } else if (k == "frame_length" || k == "L") {
    cfg.frame_length = to_size(e);
  } else if (k == "redundancy" || k == "R") {
    cfg.redundancy = to_size(e);
  } else if (k == "half_width" || k == "b") {
    cfg.half_width = to_size(e);
  } else if (k == "beta") {
    cfg.beta = to_double(e);
  } else if (k == "i_max_small") {
    cfg.i_max_small = to_size(e);
  } else if (k == "i_max_large") {
    cfg.i_max_large = to_size(e);
  } else if (k == "window") {
    cfg.window = rethrow_at(e, [&] { return parse_window_kind(e.value); });
  } else if (k == "real_mode") {
    cfg.real_mode = rethrow_at(e, [&] { return parse_real_mode(e.value); });
  } else if (k == "time_budget") {
    cfg.time_budget_seconds = e.value == "none" ? std::nullopt : std::optional<double>(to_double(e));
  } else if (k == "entropy_bins") {
    cfg.entropy_bins = e.value == "auto" ? std::nullopt : std::optional<std::size_t>(to_size(e));
  } else if (k == "threads") {
    cfg.threads = to_size(e);
  } else if (k == "patterns") {
    cfg.patterns = rethrow_at(e, [&] { return load_pattern_file(e.value); });
  } else {
    return false;
  }
  return true;
}

}  // namespace

void apply_config_text(std::string_view text, DenoiseConfig& cfg) {
  for (const auto& e : parse_entries(text)) {
    if (apply_common(e, cfg)) continue;
    if (e.key == "sigma") {
      cfg.sigma = to_double(e);
    } else if (e.key == "wiener") {
      if (e.value == "off") {
        cfg.wiener = WienerMode::off;
      } else if (e.value == "on") {
        cfg.wiener = WienerMode::on;
      } else if (e.value == "auto") {
        cfg.wiener = WienerMode::automatic;
      } else {
        throw ParseError(e.line, "wiener: expected off, on or auto");
      }
    } else if (e.key == "wiener_threshold_db") {
      cfg.wiener_threshold_db = to_double(e);
    } else {
      throw ParseError(e.line, "unknown denoise setting: " + e.key);
    }
  }
}

void apply_config_text(std::string_view text, DeclipConfig& cfg) {
  for (const auto& e : parse_entries(text)) {
    if (apply_common(e, cfg)) continue;
    if (e.key == "tau") {
      cfg.tau = to_double(e);
    } else if (e.key == "alpha_main") {
      cfg.alpha_main = to_double(e);
    } else if (e.key == "clip_delta") {
      cfg.clip_delta = to_double(e);
    } else if (e.key == "inner_tolerance") {
      cfg.inner_tolerance = to_double(e);
    } else if (e.key == "max_inner") {
      cfg.max_inner = to_size(e);
    } else {
      throw ParseError(e.line, "unknown declip setting: " + e.key);
    }
  }
}

// ---------------------------------------------------------------- heuristics

double eps_plain(double sigma, const Window& window) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  const double sum = window.sum();
  if (sum < 0.0) throw ParameterError("window sum is negative");
  return sigma * std::sqrt(sum);
}

double eps_social(double sigma, const Window& window, std::size_t half_width) {
  return static_cast<double>(2 * half_width + 1) * eps_plain(sigma, window);
}

double init_mu_denoise(const Pattern& pattern, const RealMatrix& y) {
  if (y.empty()) throw ParameterError("empty block");
  double peak = 0.0;
  for (double v : y.values()) peak = std::max(peak, std::abs(v));
  return static_cast<double>(pattern.nonzeros()) * peak;
}

double init_alpha(double sigma, const RealMatrix& y) {
  if (y.size() < 2) throw ParameterError("need at least two samples to estimate a deviation");
  const auto n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.values().begin(), y.values().end(), 0.0) / n;
  double var = 0.0;
  for (double v : y.values()) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) return 0.99;
  return std::min(sigma / std::sqrt(var), 0.99);
}

double init_mu_declip(const Pattern& pattern, double tau) {
  if (!(tau > 0.0)) throw ParameterError("clip level must be positive");
  return static_cast<double>(pattern.nonzeros()) * (1.0 - tau);
}

std::size_t entropy_bin_count(std::size_t entries) {
  if (entries == 0) throw ParameterError("empty residual");
  return static_cast<std::size_t>(std::floor(1.0 + std::log2(static_cast<double>(entries))));
}

double residual_entropy(const TFMatrix& residual, std::optional<std::size_t> bins) {
  if (residual.empty()) throw ParameterError("empty residual");
  std::vector<double> magnitude(residual.size());
  kernels::squared_magnitude(residual.values(), magnitude);
  double peak = 0.0;
  for (auto& m : magnitude) {
    m = std::sqrt(m);
    peak = std::max(peak, m);
  }
  if (peak == 0.0) return 0.0;
  const std::size_t q = bins.value_or(entropy_bin_count(residual.size()));
  if (q == 0) throw ParameterError("entropy bin count must be positive");
  std::vector<std::size_t> counts(q, 0);
  for (double m : magnitude) {
    const auto bin = static_cast<std::size_t>(m / peak * static_cast<double>(q));
    ++counts[std::min(bin, q - 1)];
  }
  const auto n = static_cast<double>(magnitude.size());
  double e = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    e -= p * std::log2(p);
  }
  return e;
}

std::vector<double> wiener_post(std::span<const double> frame, double sigma, const AnalysisOperator& a,
                                const Window& window, RealMode mode) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  if (frame.size() != a.frame_length()) throw DimensionError("frame length does not match the operator");
  if (sigma == 0.0) return {frame.begin(), frame.end()};
  RealMatrix x(frame.size(), 1);
  std::ranges::copy(frame, x.col(0).begin());
  TFMatrix s = a.apply(x);
  const double floor = sigma * sigma * window.sum_of_squares() / static_cast<double>(a.coefficient_count());
  for (auto& v : s.values()) {
    const double power = std::norm(v);
    v *= power + floor > 0.0 ? power / (power + floor) : 0.0;
  }
  const RealMatrix out = realify(a.adjoint(s), mode);
  return {out.values().begin(), out.values().end()};
}

// ---------------------------------------------------------------- blocks

BlockRestorer::BlockRestorer(const RestorationConfig& cfg)
    : cfg_(cfg),
      window_(make_window(cfg.window, cfg.frame_length)),
      a_(cfg.frame_length, cfg.redundancy),
      d_(cfg.frame_length, cfg.redundancy) {
  cfg_.validate();
}

TFMatrix BlockRestorer::initial_coefficients(const RealMatrix& y) const {
  return cfg_.model == Model::analysis ? a_.apply(y) : d_.adjoint(y);
}

RealMatrix BlockRestorer::time_frames(const Iterate& w) const {
  if (const auto* frames = std::get_if<RealMatrix>(&w)) return *frames;
  return realify(d_.apply(std::get<TFMatrix>(w)), cfg_.real_mode);
}

TFMatrix BlockRestorer::lift(const Iterate& w) const {
  if (const auto* frames = std::get_if<RealMatrix>(&w)) return a_.apply(*frames);
  return std::get<TFMatrix>(w);
}

namespace {

SolverResult run_traced(GenericProblem& problem, bool record) {
  if (!record) return run_generic(problem);
  std::vector<TraceRecord> trace;
  problem.trace = [&](const TraceRecord& r) { trace.push_back(r); };
  SolverResult result = run_generic(problem);
  result.trace = std::move(trace);
  return result;
}

}  // namespace

SolverResult BlockRestorer::solve(const RealMatrix& y, const DenoiseTarget& target, const ShrinkageFamily& family,
                                  const MuSchedule& schedule, const TFMatrix& z0, std::size_t max_iterations) const {
  const std::size_t b = y.cols() / 2;
  NoiseConstraint constraint{y, b == 0 ? eps_plain(target.sigma, window_) : eps_social(target.sigma, window_, b)};
  GenericProblem problem;
  if (cfg_.model == Model::analysis) {
    problem.role = ModelRole::analysis(a_);
    problem.project = [&](const TFMatrix& z) -> ProjectionStep {
      return project_denoise_analysis(z, constraint, a_, cfg_.real_mode);
    };
  } else {
    problem.project = [&](const TFMatrix& z) -> ProjectionStep {
      return project_denoise_synthesis(z, constraint, d_, cfg_.real_mode);
    };
  }
  problem.family = family;
  problem.schedule = schedule;
  problem.z0 = z0;
  problem.beta = cfg_.beta;
  problem.max_iterations = max_iterations;
  problem.time_budget_seconds = cfg_.time_budget_seconds;
  return run_traced(problem, cfg_.record_trace && max_iterations == cfg_.i_max_large);
}

SolverResult BlockRestorer::solve(const RealMatrix& y, const DeclipTarget& target, const ShrinkageFamily& family,
                                  const MuSchedule& schedule, const TFMatrix& z0, std::size_t max_iterations,
                                  double inner_tolerance, std::size_t max_inner) const {
  GenericProblem problem;
  std::optional<SynthesisDeclipProjector<SynthesisOperator>> projector;
  if (cfg_.model == Model::analysis) {
    problem.role = ModelRole::analysis(a_);
    problem.project = [&](const TFMatrix& z) -> ProjectionStep {
      return project_declip_analysis(z, target.mask, y, a_, cfg_.real_mode);
    };
  } else {
    projector.emplace(target.mask, y, d_, cfg_.real_mode, inner_tolerance, max_inner);
    problem.project = [&](const TFMatrix& z) -> ProjectionStep {
      ProjectionReport report = (*projector)(z);
      return ProjectionStep(std::move(report.result), report.converged);
    };
  }
  problem.family = family;
  problem.schedule = schedule;
  problem.z0 = z0;
  problem.beta = cfg_.beta;
  problem.max_iterations = max_iterations;
  problem.time_budget_seconds = cfg_.time_budget_seconds;
  return run_traced(problem, cfg_.record_trace && max_iterations == cfg_.i_max_large);
}

template <class Target>
PatternSelection BlockRestorer::select_impl(const RealMatrix& y, const Target& target, const MuSchedule& base,
                                            const std::function<double(const Pattern&)>& mu0) const {
  if (cfg_.patterns.empty()) throw ParameterError("pattern selection needs at least one pattern");
  const TFMatrix z0 = initial_coefficients(y);
  PatternSelection selection;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg_.patterns.size(); ++k) {
    MuSchedule schedule = base;
    schedule.mu0 = mu0(cfg_.patterns[k]);
    SolverResult run = solve(y, target, ShrinkageFamily::social(cfg_.patterns[k]), schedule, z0, cfg_.i_max_small);
    TFMatrix residual = lift(run.estimate);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= z0[i];
    const double e = residual_entropy(residual, cfg_.entropy_bins);
    selection.entropies.push_back(e);
    if (e > best) {
      best = e;
      selection.chosen = k;
      selection.warm_mu = run.mu_final;
      selection.warm_z = std::move(run.z_final);
    }
  }
  return selection;
}

PatternSelection BlockRestorer::select_pattern(const RealMatrix& y, const DenoiseTarget& target) const {
  const MuSchedule base{0.0, ScheduleRule::geometric, init_alpha(target.sigma, y)};
  return select_impl(y, target, base, [&](const Pattern& p) { return init_mu_denoise(p, y); });
}

PatternSelection BlockRestorer::select_pattern(const RealMatrix& y, const DeclipTarget& target,
                                               double alpha_loop) const {
  const MuSchedule base{0.0, ScheduleRule::geometric, alpha_loop};
  return select_impl(y, target, base, [&](const Pattern& p) { return init_mu_declip(p, target.mask.tau); });
}

BlockRestorer::Outcome BlockRestorer::denoise(const RealMatrix& y, double sigma) const {
  Outcome out;
  const DenoiseTarget target{sigma};
  if (cfg_.flavor == Flavor::plain) {
    const TFMatrix z0 = initial_coefficients(y);
    const MuSchedule schedule{static_cast<double>(z0.size()) - 1.0, ScheduleRule::linear_decrement, 1.0};
    out.solver = solve(y, target, ShrinkageFamily::plain(), schedule, z0, cfg_.i_max_large);
  } else {
    out.selection = select_pattern(y, target);
    const MuSchedule schedule{out.selection->warm_mu, ScheduleRule::geometric, init_alpha(sigma, y)};
    out.solver = solve(y, target, ShrinkageFamily::social(cfg_.patterns[out.selection->chosen]), schedule,
                       out.selection->warm_z, cfg_.i_max_large);
  }
  out.frames = time_frames(out.solver.estimate);
  return out;
}

BlockRestorer::Outcome BlockRestorer::declip(const RealMatrix& y, const ClipMask& mask, double alpha_main,
                                             double inner_tolerance, std::size_t max_inner) const {
  Outcome out;
  const DeclipTarget target{mask};
  if (cfg_.flavor == Flavor::plain) {
    const TFMatrix z0 = initial_coefficients(y);
    const MuSchedule schedule{static_cast<double>(z0.size()) - 1.0, ScheduleRule::linear_decrement, 1.0};
    out.solver =
        solve(y, target, ShrinkageFamily::plain(), schedule, z0, cfg_.i_max_large, inner_tolerance, max_inner);
  } else {
    out.selection = select_pattern(y, target, 1.0);
    const MuSchedule schedule{out.selection->warm_mu, ScheduleRule::geometric, alpha_main};
    out.solver = solve(y, target, ShrinkageFamily::social(cfg_.patterns[out.selection->chosen]), schedule,
                       out.selection->warm_z, cfg_.i_max_large, inner_tolerance, max_inner);
  }
  out.frames = time_frames(out.solver.estimate);
  return out;
}

// ---------------------------------------------------------------- pipelines

namespace {

void require_finite(const Signal& signal) {
  if (signal.samples.empty()) throw ParameterError("signal is empty");
  for (double v : signal.samples) {
    if (!std::isfinite(v)) throw ParameterError("signal contains non-finite samples");
  }
}

struct BlockJob {
  RealMatrix observed;
  std::optional<ClipMask> mask;
  BlockRestorer::Outcome outcome;
};

struct ClipLevel {
  double tau = 1.0;
  double delta = clip_equality_tolerance;
};

// Frames start at sample 0, where only the tails of a few windows overlap and
// the overlap-add divisor is tiny. Padding both ends by L - hop zeros gives
// every real sample full window coverage; the grid stays hop-aligned.
template <class Restore>
RestorationReport run_blocks(const Signal& signal, const RestorationConfig& cfg, const BlockRestorer& restorer,
                             std::optional<ClipLevel> clip, const RunOptions& options, Restore&& restore,
                             const std::function<void(std::vector<double>&)>& post) {
  const std::size_t L = cfg.frame_length;
  const std::size_t pad = L - L / 4;
  std::vector<double> padded(signal.samples.size() + 2 * pad, 0.0);
  std::ranges::copy(signal.samples, padded.begin() + static_cast<std::ptrdiff_t>(pad));

  const FrameGrid grid = analyze_frames(padded, restorer.window());
  std::optional<FrameGrid> raw;
  if (clip) raw = analyze_frames(padded, make_window(WindowKind::rectangular, L));
  const std::size_t count = grid.frame_count();
  const std::size_t b = cfg.effective_half_width();

  std::vector<BlockJob> jobs(count);
  detail::parallel_for(count, cfg.threads, [&](std::size_t n) {
    BlockJob& job = jobs[n];
    job.observed = extract_block(grid, n, b).columns;
    if (raw) job.mask = build_clip_mask(extract_block(raw->frames, n, b).columns, clip->tau, clip->delta);
    job.outcome = restore(job);
  });

  RestorationReport report;
  report.blocks = count;
  RealMatrix centres(grid.frame_length(), count);
  for (std::size_t n = 0; n < count; ++n) {
    BlockJob& job = jobs[n];
    const auto& solver = job.outcome.solver;
    report.total_iterations += solver.iterations;
    if (!solver.converged) ++report.unconverged_blocks;
    report.projection_warnings += solver.projection_warnings;
    if (options.on_block) {
      BlockRecord record;
      record.index = n;
      record.observed = &job.observed;
      record.restored = &job.outcome.frames;
      record.mask = job.mask ? &*job.mask : nullptr;
      record.solver = &solver;
      record.selection = job.outcome.selection ? &*job.outcome.selection : nullptr;
      options.on_block(record);
    }
    const auto centre = job.outcome.frames.col(b);
    std::vector<double> frame(centre.begin(), centre.end());
    if (post) post(frame);
    std::ranges::copy(frame, centres.col(n).begin());
    job = BlockJob{};
  }
  report.output.sample_rate = signal.sample_rate;
  const std::vector<double> full = overlap_add(centres, restorer.window(), padded.size());
  report.output.samples.assign(full.begin() + static_cast<std::ptrdiff_t>(pad),
                               full.begin() + static_cast<std::ptrdiff_t>(pad + signal.samples.size()));
  return report;
}

double estimated_input_snr_db(const Signal& signal, double sigma) {
  const auto n = static_cast<double>(signal.samples.size());
  double power = 0.0;
  for (double v : signal.samples) power += v * v;
  power /= n;
  const double noise = sigma * sigma;
  if (noise <= 0.0) return std::numeric_limits<double>::infinity();
  const double clean = std::max(power - noise, noise * 1e-12);
  return 10.0 * std::log10(clean / noise);
}

}  // namespace

RestorationReport denoise(const Signal& signal, const DenoiseConfig& cfg, const RunOptions& options) {
  if (!(cfg.sigma >= 0.0)) throw ParameterError("denoising needs the noise level sigma");
  require_finite(signal);
  const BlockRestorer restorer(cfg);

  bool use_wiener = cfg.wiener == WienerMode::on;
  if (cfg.wiener == WienerMode::automatic) {
    use_wiener = estimated_input_snr_db(signal, cfg.sigma) <= cfg.wiener_threshold_db;
  }
  use_wiener = use_wiener && cfg.sigma > 0.0;
  std::function<void(std::vector<double>&)> post;
  if (use_wiener) {
    post = [&](std::vector<double>& frame) {
      frame = wiener_post(frame, cfg.sigma, restorer.analysis(), restorer.window(), cfg.real_mode);
    };
  }

  auto report = run_blocks(signal, cfg, restorer, std::nullopt, options,
                           [&](const BlockJob& job) { return restorer.denoise(job.observed, cfg.sigma); }, post);
  report.wiener_applied = use_wiener;
  return report;
}

RestorationReport declip(const Signal& signal, const DeclipConfig& cfg, const RunOptions& options) {
  if (!(cfg.tau > 0.0)) throw ParameterError("declipping needs a positive clip level tau");
  if (!(cfg.alpha_main > 0.0 && cfg.alpha_main <= 1.0)) throw ParameterError("alpha_main must lie in (0, 1]");
  require_finite(signal);
  for (double v : signal.samples) {
    if (std::abs(v) > 1.0 + 1e-6) throw ParameterError("declipping expects samples normalized to [-1, 1]");
  }
  const BlockRestorer restorer(cfg);
  return run_blocks(
      signal, cfg, restorer, ClipLevel{cfg.tau, cfg.clip_delta}, options,
      [&](const BlockJob& job) {
        return restorer.declip(job.observed, *job.mask, cfg.alpha_main, cfg.inner_tolerance, cfg.max_inner);
      },
      {});
}

}  // namespace tfr
