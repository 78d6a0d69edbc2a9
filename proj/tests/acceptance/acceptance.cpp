// Acceptance suite: one PASS/FAIL line per criterion.
//
//   tfr_acceptance [--cli PATH] [--only N[,N...]] [--strict]
//
// Without --strict the exit status only reports whether every criterion ran;
// with it, any FAIL makes the exit status non-zero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dense_ops.hpp"
#include "tfr/evaluation.hpp"
#include "tfr/oracle.hpp"
#include "tfr/projections.hpp"
#include "tfr/restoration.hpp"
#include "tfr/shrinkage.hpp"
#include "tfr/solver.hpp"
#include "tfr/wav.hpp"

using namespace tfr;
using namespace tfr::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double norm_of_residual(const RealMatrix& v, const RealMatrix& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - y[i]) * (v[i] - y[i]);
  return std::sqrt(s);
}

bool norm_diff_ok(const RealMatrix& w, const RealMatrix& y, double eps) { return norm_of_residual(w, y) <= eps + 1e-12; }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- corpora

constexpr std::size_t corpus_size = 20;
constexpr std::size_t frame_length = 1024;

/// Criterion 5: three on-grid atoms, peak-normalized.
Signal sparse_signal(std::size_t k) {
  SynthSpec spec;
  spec.duration_seconds = 0.5;
  spec.frame_length = frame_length;
  spec.random_atoms = 3;
  spec.seed = 100 + k;
  spec.normalize_peak = 1.0;
  return synth_signal(spec);
}

/// Criterion 6: six tones at continuous frequencies.
Signal multitone_signal(std::size_t k) {
  SynthSpec spec;
  spec.duration_seconds = 0.5;
  spec.frame_length = frame_length;
  spec.random_atoms = 6;
  spec.off_grid = true;
  spec.seed = 100 + k;
  spec.normalize_peak = 1.0;
  return synth_signal(spec);
}

struct DeclipRun {
  double delta_db = 0.0;
  double seconds = 0.0;
  std::size_t blocks_checked = 0;
  std::size_t violations = 0;
};

DeclipRun run_declip(const Signal& x, Flavor flavor, Model model, bool check_blocks) {
  const ClippedSignal clipped = clip_to_sdr(x, 5.0);
  DeclipConfig cfg;
  cfg.flavor = flavor;
  cfg.model = model;
  cfg.tau = clipped.tau;
  cfg.threads = 1;
  DeclipRun run;
  RunOptions options;
  if (check_blocks) {
    options.on_block = [&](const BlockRecord& r) {
      ++run.blocks_checked;
      const RealMatrix& y = *r.observed;
      const RealMatrix& w = *r.restored;
      bool ok = true;
      for (auto i : r.mask->reliable()) ok = ok && w[i] == y[i];
      for (auto i : r.mask->clipped_pos()) ok = ok && w[i] >= y[i] - 1e-6;
      for (auto i : r.mask->clipped_neg()) ok = ok && w[i] <= y[i] + 1e-6;
      if (!ok) ++run.violations;
    };
  }
  const auto start = Clock::now();
  const RestorationReport report = declip(clipped.signal, cfg, options);
  run.seconds = seconds_since(start);
  run.delta_db = snr_interior(x, report.output, frame_length) - snr_interior(x, clipped.signal, frame_length);
  return run;
}

double run_denoise(const Signal& x, double level_db, std::uint64_t seed, Model model) {
  const NoisySignal noisy = add_noise(x, level_db, seed);
  DenoiseConfig cfg;
  cfg.model = model;
  cfg.sigma = noisy.sigma;
  cfg.threads = 1;
  const RestorationReport report = denoise(noisy.signal, cfg);
  return snr_interior(x, report.output, frame_length) - snr_interior(x, noisy.signal, frame_length);
}

// Shared between criteria 5, 7 and 9.
struct SparseCorpusResults {
  std::vector<DeclipRun> plain;
  std::vector<DeclipRun> social;
};

const SparseCorpusResults& sparse_corpus() {
  static const SparseCorpusResults results = [] {
    SparseCorpusResults r;
    for (std::size_t k = 0; k < corpus_size; ++k) {
      const Signal x = sparse_signal(k);
      r.plain.push_back(run_declip(x, Flavor::plain, Model::analysis, true));
      r.social.push_back(run_declip(x, Flavor::social, Model::analysis, true));
    }
    return r;
  }();
  return results;
}

// Shared between criteria 6 and 7.
struct MultitoneResults {
  double analysis_seconds = 0.0;
  std::vector<double> analysis5;
  std::vector<double> synthesis5;
  std::vector<double> analysis20;
  std::vector<double> synthesis20;
};

const MultitoneResults& multitone_corpus() {
  static const MultitoneResults results = [] {
    MultitoneResults r;
    for (std::size_t k = 0; k < corpus_size; ++k) {
      const Signal x = multitone_signal(k);
      const auto start = Clock::now();
      r.analysis5.push_back(run_denoise(x, 5.0, 7 + k, Model::analysis));
      r.analysis20.push_back(run_denoise(x, 20.0, 7 + k, Model::analysis));
      r.analysis_seconds += seconds_since(start);
      r.synthesis5.push_back(run_denoise(x, 5.0, 7 + k, Model::synthesis));
      r.synthesis20.push_back(run_denoise(x, 20.0, 7 + k, Model::synthesis));
    }
    return r;
  }();
  return results;
}

// ---------------------------------------------------------------- criteria

Outcome tight_frames() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  const auto start = Clock::now();
  for (std::size_t R : {1u, 2u, 4u}) {
    for (std::size_t L : {64u, 512u, 1024u}) {
      const AnalysisOperator a(L, R);
      const SynthesisOperator d(L, R);
      const RealMatrix x = random_real(L, 100, rng);
      const TFMatrix z = random_complex(L, 100, rng);
      const ComplexMatrix back = a.adjoint(a.apply(x));
      const ComplexMatrix ddz = d.apply(d.adjoint(z));
      for (std::size_t c = 0; c < 100; ++c) {
        double ex = 0.0;
        double nx = 0.0;
        double ez = 0.0;
        double nz = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
          ex += std::norm(back(i, c) - x(i, c));
          nx += x(i, c) * x(i, c);
          ez += std::norm(ddz(i, c) - z(i, c));
          nz += std::norm(z(i, c));
        }
        worst = std::max({worst, std::sqrt(ex / nx), std::sqrt(ez / nz)});
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 5.0, format("worst relative error %.2e, %.2f s", worst, elapsed)};
}

Outcome projection_optimality() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> bound(0.25, 4.0);
  std::uniform_real_distribution<double> radius(0.1, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const auto start = Clock::now();
  std::size_t failures = 0;
  double worst_gap = -1e300;
  const char* first_failure = nullptr;
  auto record = [&](bool ok, double gap, const char* which) {
    worst_gap = std::max(worst_gap, gap);
    if (!ok) {
      ++failures;
      if (first_failure == nullptr) first_failure = which;
    }
  };

  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t L = 2 + static_cast<std::size_t>(instance % 7);  // 2..8
    const std::size_t R = 1 + static_cast<std::size_t>(coin(rng));
    const std::size_t cols = L * R <= 8 ? 2 : 1;
    const RealMatrix y = random_real(L, cols, rng);
    const double eps = radius(rng);
    const DenseSynthesis d(L, L * R, bound(rng), rng);
    const TFMatrix zs = random_complex(L * R, cols, rng, 2.0);

    // Clip instance: roughly a third of the samples saturated at +-tau.
    const double tau = 0.5;
    ClipMask mask{Matrix<SampleState>(L, cols), tau};
    RealMatrix yc(L, cols);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < yc.size(); ++i) {
      const double draw = u(rng);
      if (std::abs(draw) > 0.66) {
        mask.states[i] = draw > 0 ? SampleState::clipped_pos : SampleState::clipped_neg;
        yc[i] = draw > 0 ? tau : -tau;
      } else {
        yc[i] = 0.9 * tau * u(rng);
      }
    }

    // Analysis projections. Even instances: dense A with zeta != 1 under Re.
    // Odd instances: the FFT operator on conjugate-symmetric coefficients under
    // Re - Im, where A^H Z is real and both extractions coincide.
    if (instance % 2 == 0) {
      const DenseAnalysis a(L, L * R, bound(rng), rng);
      const TFMatrix za = random_complex(L * R, cols, rng, 2.0);
      const auto pd = analysis_problem(a, L, za, ball_set(y, eps));
      const RealMatrix wd = project_denoise_analysis(za, {y, eps}, a, RealMode::re_only);
      const double od = oracle::oracle_project(pd).objective;
      record(pd.objective(stack(wd)) <= od + 1e-5 && norm_diff_ok(wd, y, eps), pd.objective(stack(wd)) - od,
             "analysis denoise");
      const auto pc = analysis_problem(a, L, za, clip_set(mask, yc));
      const RealMatrix wc = project_declip_analysis(za, mask, yc, a, RealMode::re_only);
      const double oc = oracle::oracle_project(pc).objective;
      record(pc.objective(stack(wc)) <= oc + 1e-5 && pc.violation(stack(wc)) <= 1e-12, pc.objective(stack(wc)) - oc,
             "analysis declip");
    } else {
      const std::size_t Lp = L <= 4 ? 4 : 8;
      const AnalysisOperator a(Lp, R);
      const RealMatrix yp = random_real(Lp, 1, rng);
      const TFMatrix za = random_conjugate_symmetric(Lp * R, 1, rng);
      const auto pd = analysis_problem(a, Lp, za, ball_set(yp, eps));
      const RealMatrix wd = project_denoise_analysis(za, {yp, eps}, a);
      const double od = oracle::oracle_project(pd).objective;
      record(pd.objective(stack(wd)) <= od + 1e-5 && norm_diff_ok(wd, yp, eps), pd.objective(stack(wd)) - od,
             "analysis denoise (fft)");
      ClipMask mp{Matrix<SampleState>(Lp, 1), tau};
      RealMatrix ycp(Lp, 1);
      for (std::size_t i = 0; i < Lp; ++i) {
        const double draw = u(rng);
        if (std::abs(draw) > 0.66) {
          mp.states[i] = draw > 0 ? SampleState::clipped_pos : SampleState::clipped_neg;
          ycp[i] = draw > 0 ? tau : -tau;
        } else {
          ycp[i] = 0.9 * tau * u(rng);
        }
      }
      const auto pc = analysis_problem(a, Lp, za, clip_set(mp, ycp));
      const RealMatrix wc = project_declip_analysis(za, mp, ycp, a);
      const double oc = oracle::oracle_project(pc).objective;
      record(pc.objective(stack(wc)) <= oc + 1e-5 && pc.violation(stack(wc)) <= 1e-12, pc.objective(stack(wc)) - oc,
             "analysis declip (fft)");
    }

    // Synthesis projections: exact in both real modes; alternate between them.
    const RealMode mode = instance % 4 < 2 ? RealMode::re_minus_im : RealMode::re_only;
    const auto ps = synthesis_problem(d, zs, mode, ball_set(y, eps));
    const TFMatrix ws = project_denoise_synthesis(zs, {y, eps}, d, mode);
    const double os = oracle::oracle_project(ps).objective;
    const double feas = norm_of_residual(realify(d.apply(ws), mode), y);
    record(ps.objective(stack(ws)) <= os + 1e-5 && feas <= eps + 1e-10, ps.objective(stack(ws)) - os,
           "synthesis denoise");

    const auto pc = synthesis_problem(d, zs, mode, clip_set(mask, yc));
    const ProjectionReport rc = project_declip_synthesis(zs, mask, yc, d, mode, -1.0, 20000);
    SynthesisDeclipProjector<DenseSynthesis> probe(mask, yc, d, mode);
    const double oc = oracle::oracle_project(pc).objective;
    record(pc.objective(stack(rc.result)) <= oc + 1e-5 && rc.converged && rc.residual <= probe.tolerance(),
           pc.objective(stack(rc.result)) - oc, "synthesis declip");
  }
  const double elapsed = seconds_since(start);
  std::string detail = format("%zu/800 projections off, worst objective gap %.2e, %.1f s", failures, worst_gap, elapsed);
  if (first_failure != nullptr) detail += std::string(", first failure: ") + first_failure;
  return {failures == 0 && elapsed < 60.0, detail};
}

Outcome shrinkage_conformance() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> rows(4, 40);
  std::uniform_int_distribution<std::size_t> cols(1, 12);
  std::uniform_real_distribution<double> mu_draw(0.0, 3.0);
  std::uniform_real_distribution<double> scale(1.01, 5.0);
  const auto patterns = [] {
    auto p = default_speech_patterns();
    const auto m = default_music_patterns();
    p.insert(p.end(), m.begin(), m.end());
    p.push_back(make_pattern("unit", {{1}}));
    return p;
  }();
  std::uniform_int_distribution<std::size_t> pick(0, patterns.size() - 1);

  std::size_t bad_hard = 0;
  std::size_t bad_pew = 0;
  auto conforms = [](const TFMatrix& z, const std::function<TFMatrix(const TFMatrix&)>& s, double t) {
    const TFMatrix out = s(z);
    TFMatrix neg = z;
    for (auto& v : neg.values()) v = -v;
    TFMatrix ray = z;
    for (auto& v : ray.values()) v *= t;
    const TFMatrix out_neg = s(neg);
    const TFMatrix out_ray = s(ray);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (out_neg[i] != -out[i]) return false;                                    // odd
      if (std::abs(out[i]) > std::abs(z[i]) * (1.0 + 1e-15)) return false;        // 0 <= |S(z)| <= |z|
      if (std::abs(out_ray[i]) < t * std::abs(out[i]) * (1.0 - 1e-12)) return false;  // grows along the ray
    }
    return true;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const TFMatrix z = random_complex(rows(rng), cols(rng), rng);
    const double t = scale(rng);
    std::uniform_int_distribution<std::size_t> keep(0, z.size());
    const std::size_t k = keep(rng);
    if (!conforms(z, [k](const TFMatrix& v) { return hard_threshold(v, k); }, t)) ++bad_hard;
    const Pattern& p = patterns[pick(rng)];
    const double mu = mu_draw(rng);
    if (!conforms(z, [&](const TFMatrix& v) { return pew(v, p, mu); }, t)) ++bad_pew;
  }

  double ew_gap = 0.0;
  const Pattern unit = make_pattern("unit", {{1}});
  for (int trial = 0; trial < 100; ++trial) {
    const TFMatrix z = random_complex(32, 8, rng);
    const double mu = mu_draw(rng);
    const TFMatrix out = pew(z, unit, mu);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double m2 = std::norm(z[i]);
      const Complex ew = m2 > 0.0 ? z[i] * std::max(0.0, 1.0 - mu * mu / m2) : Complex{};
      ew_gap = std::max(ew_gap, std::abs(out[i] - ew));
    }
  }
  return {bad_hard == 0 && bad_pew == 0 && ew_gap <= 1e-12,
          format("violations: hard %zu/1000, pew %zu/1000; 1x1 pew vs empirical Wiener %.1e", bad_hard, bad_pew,
                 ew_gap)};
}

Outcome solver_sanity() {
  std::mt19937_64 rng(4);
  // eps = 0 through the full pipeline.
  const Signal x = sparse_signal(0);
  DenoiseConfig cfg;
  cfg.sigma = 0.0;
  const RestorationReport r = denoise(x, cfg);
  double worst = 0.0;
  for (std::size_t t = 0; t < x.samples.size(); ++t) worst = std::max(worst, std::abs(r.output.samples[t] - x.samples[t]));

  // beta = infinity.
  DenoiseConfig one = cfg;
  one.beta = std::numeric_limits<double>::infinity();
  one.sigma = 0.05;
  std::size_t max_iterations = 0;
  RunOptions opts;
  opts.on_block = [&](const BlockRecord& b) { max_iterations = std::max(max_iterations, b.solver->iterations); };
  (void)denoise(x, one, opts);

  // Stopping rule on recorded traces, both models and flavors.
  std::size_t checked = 0;
  std::size_t wrong = 0;
  const Signal noisy = add_noise(x, 10.0, 11).signal;
  for (auto flavor : {Flavor::plain, Flavor::social}) {
    for (auto model : {Model::analysis, Model::synthesis}) {
      DenoiseConfig traced;
      traced.flavor = flavor;
      traced.model = model;
      traced.sigma = add_noise(x, 10.0, 11).sigma;
      traced.record_trace = true;
      RunOptions o;
      o.on_block = [&](const BlockRecord& b) {
        if (b.index % 8 != 0) return;
        const auto& trace = b.solver->trace;
        ++checked;
        if (trace.size() != b.solver->iterations) {
          ++wrong;
          return;
        }
        for (std::size_t i = 0; i < trace.size(); ++i) {
          const bool stop = trace[i].ratio <= traced.beta;
          const bool last = i + 1 == trace.size();
          if (stop && !last) ++wrong;
          if (last && stop != b.solver->converged) ++wrong;
        }
      };
      (void)denoise(Signal{{noisy.samples.begin(), noisy.samples.begin() + 4096}, 16000}, traced, o);
    }
  }
  return {worst <= 1e-8 && max_iterations == 1 && wrong == 0 && checked > 0,
          format("eps=0 max deviation %.1e; beta=inf max iterations %zu; %zu traces, %zu stopping-rule violations",
                 worst, max_iterations, checked, wrong)};
}

Outcome sparse_declipping() {
  const auto start = Clock::now();
  const auto& c = sparse_corpus();
  std::size_t plain_ok = 0;
  std::vector<double> social;
  double plain_min = 1e300;
  double social_min = 1e300;
  for (std::size_t k = 0; k < corpus_size; ++k) {
    plain_ok += c.plain[k].delta_db >= 20.0 ? 1 : 0;
    plain_min = std::min(plain_min, c.plain[k].delta_db);
    social.push_back(c.social[k].delta_db);
    social_min = std::min(social_min, c.social[k].delta_db);
  }
  const double elapsed = seconds_since(start);
  return {plain_ok >= 18 && mean(social) >= 8.0 && elapsed < 600.0,
          format("plain cosparse >= 20 dB on %zu/20 (min %.1f); social cosparse mean %.1f dB (min %.1f); %.0f s",
                 plain_ok, plain_min, mean(social), social_min, elapsed)};
}

Outcome denoising_surrogate() {
  const auto& c = multitone_corpus();
  const double m5 = mean(c.analysis5);
  const double m20 = mean(c.analysis20);
  const double elapsed = c.analysis_seconds;
  return {m5 >= 5.0 && m20 >= 2.0 && elapsed < 600.0,
          format("plain cosparse mean dSNR %.2f dB at 5 dB, %.2f dB at 20 dB; %.0f s", m5, m20, elapsed)};
}

Outcome model_agreement() {
  const auto& m = multitone_corpus();
  std::size_t agree = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < corpus_size; ++k) {
    for (const auto& [a, s] : {std::pair{m.analysis5[k], m.synthesis5[k]}, std::pair{m.analysis20[k], m.synthesis20[k]}}) {
      const double gap = std::abs(a - s);
      worst = std::max(worst, gap);
      agree += gap <= 0.2 ? 1 : 0;
    }
  }

  // Declip wall clock on the criterion-5 corpus, plain flavor, both models
  // timed back to back under the same conditions.
  double analysis_seconds = 0.0;
  double synthesis_seconds = 0.0;
  for (std::size_t k = 0; k < corpus_size; ++k) {
    const Signal x = sparse_signal(k);
    analysis_seconds += run_declip(x, Flavor::plain, Model::analysis, false).seconds;
    synthesis_seconds += run_declip(x, Flavor::plain, Model::synthesis, false).seconds;
  }
  const bool ordering = analysis_seconds <= synthesis_seconds;
  return {agree == 2 * corpus_size && ordering,
          format("dSNR gap <= 0.2 dB on %zu/%zu files (worst %.2f dB, mean analysis %.2f/%.2f vs synthesis %.2f/%.2f "
                 "at 5/20 dB); declip time analysis %.1f s vs synthesis %.1f s",
                 agree, 2 * corpus_size, worst, mean(m.analysis5), mean(m.analysis20), mean(m.synthesis5),
                 mean(m.synthesis20), analysis_seconds, synthesis_seconds)};
}

Outcome pattern_selection() {
  std::size_t wins = 0;
  std::size_t ties = 0;
  for (std::size_t t = 0; t < corpus_size; ++t) {
    SynthSpec spec;
    spec.duration_seconds = 0.5;
    spec.random_atoms = 3;
    spec.seed = 500 + t;
    spec.normalize_peak = 0.9;
    const Signal x = synth_signal(spec);
    const NoisySignal y = add_noise(x, 10.0, 900 + t);
    DenoiseConfig cfg;
    cfg.flavor = Flavor::social;
    const auto music = default_music_patterns();
    cfg.patterns = {music[0], music[1]};
    const BlockRestorer restorer(cfg);
    const FrameGrid grid = analyze_frames(y.signal, restorer.window());
    const FrameBlock block = extract_block(grid, grid.frame_count() / 2, cfg.half_width);
    const PatternSelection sel = restorer.select_pattern(block.columns, DenoiseTarget{y.sigma});
    // A tie resolves to the first pattern by rule; only a strictly higher entropy counts.
    if (sel.entropies[0] > sel.entropies[1]) ++wins;
    if (sel.entropies[0] == sel.entropies[1]) ++ties;
  }
  return {wins >= 18, format("horizontal bar strictly preferred in %zu/20 trials (%zu ties)", wins, ties)};
}

Outcome declip_consistency() {
  const auto& c = sparse_corpus();
  std::size_t blocks = 0;
  std::size_t bad = 0;
  for (const auto* runs : {&c.plain, &c.social}) {
    for (const auto& r : *runs) {
      blocks += r.blocks_checked;
      bad += r.violations;
    }
  }
  return {bad == 0 && blocks > 0, format("%zu blocks checked, %zu inconsistent", blocks, bad)};
}

Outcome sweep_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given (--cli)"};
  const fs::path dir = fs::temp_directory_path() / "tfr_acceptance_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (std::size_t k = 0; k < 2; ++k) {
    SynthSpec spec;
    spec.duration_seconds = 0.5;
    spec.random_atoms = 4;
    spec.seed = 700 + k;
    spec.normalize_peak = 0.8;
    write_wav(dir / ("input" + std::to_string(k) + ".wav"), synth_signal(spec), SampleFormat::pcm16);
  }
  std::ofstream(dir / "manifest.json") << R"({
  "task": "denoise",
  "levels": [5, 10],
  "seed": 2024,
  "files": ["input0.wav", "input1.wav"]
})";
  auto run = [&](const std::string& out) {
    const std::string cmd = "\"" + cli + "\" sweep --manifest \"" + (dir / "manifest.json").string() + "\" --out \"" +
                            (dir / out).string() + "\"";
    return std::system(cmd.c_str());
  };
  if (run("a.csv") != 0 || run("b.csv") != 0) return {false, "sweep command failed"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string a = slurp(dir / "a.csv");
  const std::string b = slurp(dir / "b.csv");
  const auto lines = std::count(a.begin(), a.end(), '\n');
  fs::remove_all(dir);
  return {!a.empty() && a == b && lines == 3 + 4 + 4,
          format("%zu bytes, %ld lines, identical: %s", a.size(), static_cast<long>(lines), a == b ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  bool strict = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if (arg == "--strict") {
      strict = true;
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--cli PATH] [--only N[,N...]] [--strict]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"tight-frame identities", tight_frames},
      {"projection optimality", projection_optimality},
      {"shrinkage conformance", shrinkage_conformance},
      {"solver sanity", solver_sanity},
      {"exact-sparse declipping", sparse_declipping},
      {"denoising surrogate", denoising_surrogate},
      {"analysis/synthesis agreement", model_agreement},
      {"pattern selection", pattern_selection},
      {"declip consistency", declip_consistency},
      {"sweep determinism", [&] { return sweep_determinism(cli); }},
  };

  int failed = 0;
  int ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ++ran;
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d %-30s %s  %s\n", id, criteria[k].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return strict && failed > 0 ? 1 : 0;
}
