// tfrestore: degrade, restore and score audio from the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tfr/evaluation.hpp"
#include "tfr/experiment.hpp"
#include "tfr/restoration.hpp"
#include "tfr/wav.hpp"

namespace {

using namespace tfr;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

WavFile load_file(const std::string& path) {
  WavFile wav = read_wav(path);
  for (const auto& w : wav.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  return wav;
}

Signal load(const std::string& path) { return load_file(path).signal; }

SampleFormat parse_format(const std::string& s) {
  if (s == "pcm16") return SampleFormat::pcm16;
  if (s == "float32") return SampleFormat::float32;
  throw ParameterError("unknown sample format: " + s);
}

struct DegradeArgs {
  std::string task = "noise";
  std::string in;
  std::string out;
  std::optional<double> snr;
  std::optional<double> sdr;
  std::optional<double> tau;
  std::uint64_t seed = 0;
  std::string format = "float32";
};

int run_degrade(const DegradeArgs& a) {
  const Signal x = load(a.in);
  const Task task = parse_task(a.task);
  if (task == Task::denoise) {
    if (!a.snr) throw ParameterError("--task noise needs --snr");
    const NoisySignal y = add_noise(x, *a.snr, a.seed);
    write_wav(a.out, y.signal, parse_format(a.format));
    std::printf("sigma=%.17g\n", y.sigma);
  } else {
    if (a.tau.has_value() == a.sdr.has_value()) throw ParameterError("--task clip needs exactly one of --sdr, --tau");
    const ClippedSignal y = a.tau ? ClippedSignal{clip_to_tau(x, *a.tau), *a.tau, 0.0} : clip_to_sdr(x, *a.sdr);
    write_wav(a.out, y.signal, parse_format(a.format));
    std::printf("tau=%.17g\n", y.tau);
  }
  return 0;
}

struct RestoreArgs {
  std::string task = "denoise";
  std::string in;
  std::string out;
  std::optional<std::string> flavor;
  std::optional<std::string> model;
  std::optional<std::string> preset;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::optional<double> clip_delta;
  std::optional<std::string> config;
  std::optional<std::string> patterns;
  std::optional<std::size_t> threads;
  std::optional<std::string> trace;
  std::string format = "float32";
};

template <class Config>
void configure(Config& cfg, const RestoreArgs& a) {
  if (a.preset) apply_preset(cfg, parse_preset(*a.preset));
  if (a.config) apply_config_text(read_text(*a.config), cfg);
  if (a.flavor) cfg.flavor = parse_flavor(*a.flavor);
  if (a.model) cfg.model = parse_model(*a.model);
  if (a.patterns) cfg.patterns = load_pattern_file(*a.patterns);
  if (a.threads) cfg.threads = *a.threads;
  cfg.record_trace = a.trace.has_value();
}

int run_restore(const RestoreArgs& a) {
  const WavFile file = load_file(a.in);
  const Signal& y = file.signal;
  std::ofstream trace;
  if (a.trace) {
    trace.open(*a.trace);
    if (!trace) throw std::runtime_error("cannot write " + *a.trace);
    trace << "block,iteration,mu,residual_norm,ratio\n";
  }
  RunOptions options;
  if (a.trace) {
    options.on_block = [&](const BlockRecord& r) {
      char buf[160];
      for (const auto& t : r.solver->trace) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%.10g\n", r.index, t.iteration, t.mu, t.residual_norm,
                      t.ratio);
        trace << buf;
      }
    };
  }

  RestorationReport report;
  if (parse_task(a.task) == Task::denoise) {
    DenoiseConfig cfg;
    configure(cfg, a);
    if (a.sigma) cfg.sigma = *a.sigma;
    report = denoise(y, cfg, options);
  } else {
    DeclipConfig cfg;
    configure(cfg, a);
    if (a.tau) {
      cfg.tau = *a.tau;
    } else {
      cfg.tau = 0.0;
      for (double v : y.samples) cfg.tau = std::max(cfg.tau, std::abs(v));
      std::cerr << "clip level taken from the input peak: tau=" << cfg.tau << "\n";
    }
    // Stored samples are quantized, so exact equality with tau is too strict.
    if (a.clip_delta) {
      cfg.clip_delta = *a.clip_delta;
    } else if (cfg.clip_delta == clip_equality_tolerance) {
      cfg.clip_delta = file.format == SampleFormat::pcm16 ? 1.0 / 32768.0 : 1e-6 * std::max(cfg.tau, 1.0);
    }
    report = declip(y, cfg, options);
  }
  write_wav(a.out, report.output, parse_format(a.format));
  std::cerr << "blocks=" << report.blocks << " iterations=" << report.total_iterations
            << " unconverged=" << report.unconverged_blocks << " projection_warnings=" << report.projection_warnings
            << (report.wiener_applied ? " wiener=on" : "") << "\n";
  return 0;
}

int run_eval(const std::string& ref_path, const std::string& est_path, const std::string& metric, std::size_t skip) {
  const Signal ref = load(ref_path);
  const Signal est = load(est_path);
  if (metric != "snr" && metric != "sdr") throw ParameterError("unknown metric: " + metric);
  std::printf("%s=%.4f\n", metric.c_str(), snr_interior(ref, est, skip));
  return 0;
}

int run_sweep(const std::string& manifest_path, const std::optional<std::string>& out,
              std::optional<std::size_t> threads) {
  const std::filesystem::path path(manifest_path);
  ExperimentManifest m = parse_manifest(read_text(manifest_path), path.parent_path());
  if (threads) m.threads = *threads;
  const ExperimentResult result = run_experiment(m);
  if (out) {
    std::ofstream f(*out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + *out);
    f << result.csv;
  } else {
    std::cout << result.csv;
  }
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.error.empty() ? 0 : 1;
  if (failed > 0) std::cerr << failed << " row(s) failed; see the error column\n";
  return 0;
}

int run_patterns_list(const std::string& preset) {
  const auto patterns = parse_preset(preset) == Preset::music ? default_music_patterns() : default_speech_patterns();
  std::cout << format_patterns(patterns);
  return 0;
}

int run_patterns_validate(const std::string& path) {
  const auto patterns = load_pattern_file(path);
  for (const auto& p : patterns) {
    std::printf("%s %zux%zu nonzeros=%zu\n", p.name().c_str(), 2 * p.frequency_extent() + 1,
                2 * p.time_extent() + 1, p.nonzeros());
  }
  std::printf("%zu pattern(s) ok\n", patterns.size());
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& out, const std::string& format) {
  const Signal x = synth_signal(parse_synth_spec(read_text(spec_path)));
  write_wav(out, x, parse_format(format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse and cosparse audio restoration (denoising and declipping)"};
  app.require_subcommand(1);

  DegradeArgs degrade_args;
  auto* degrade = app.add_subcommand("degrade", "Add white noise or hard-clip a WAV file");
  degrade->add_option("--task", degrade_args.task, "noise or clip")->check(CLI::IsMember({"noise", "clip"}));
  degrade->add_option("--in", degrade_args.in, "Clean input WAV")->required();
  degrade->add_option("--out", degrade_args.out, "Degraded output WAV")->required();
  degrade->add_option("--snr", degrade_args.snr, "Target input SNR in dB (noise)");
  degrade->add_option("--sdr", degrade_args.sdr, "Target input SDR in dB (clip)");
  degrade->add_option("--tau", degrade_args.tau, "Clip level (clip)");
  degrade->add_option("--seed", degrade_args.seed, "Noise seed");
  degrade->add_option("--format", degrade_args.format, "pcm16 or float32");

  RestoreArgs restore_args;
  auto* restore = app.add_subcommand("restore", "Denoise or declip a WAV file");
  restore->add_option("--task", restore_args.task, "denoise or declip")
      ->check(CLI::IsMember({"denoise", "declip", "noise", "clip"}));
  restore->add_option("--in", restore_args.in, "Degraded input WAV")->required();
  restore->add_option("--out", restore_args.out, "Restored output WAV")->required();
  restore->add_option("--flavor", restore_args.flavor, "plain or social");
  restore->add_option("--model", restore_args.model, "analysis or synthesis");
  restore->add_option("--preset", restore_args.preset, "music or speech");
  restore->add_option("--sigma", restore_args.sigma, "Noise standard deviation (denoise)");
  restore->add_option("--tau", restore_args.tau, "Clip level (declip; default: input peak)");
  restore->add_option("--clip-delta", restore_args.clip_delta,
                      "Samples within this distance of +-tau count as clipped (default: one quantization step)");
  restore->add_option("--config", restore_args.config, "key = value settings file");
  restore->add_option("--patterns", restore_args.patterns, "Pattern file for the social flavor");
  restore->add_option("--threads", restore_args.threads, "Worker threads (0 = all cores)");
  restore->add_option("--trace", restore_args.trace, "Write per-iteration solver records to this CSV");
  restore->add_option("--format", restore_args.format, "pcm16 or float32");

  std::string ref_path;
  std::string est_path;
  std::string metric = "snr";
  std::size_t skip = 0;
  auto* eval = app.add_subcommand("eval", "Score an estimate against a reference");
  eval->add_option("--ref", ref_path, "Reference WAV")->required();
  eval->add_option("--est", est_path, "Estimate WAV")->required();
  eval->add_option("--metric", metric, "snr or sdr")->check(CLI::IsMember({"snr", "sdr"}));
  eval->add_option("--skip", skip, "Samples ignored at each end");

  std::string manifest;
  std::optional<std::string> sweep_out;
  std::optional<std::size_t> sweep_threads;
  auto* sweep = app.add_subcommand("sweep", "Run a degradation sweep described by a JSON manifest");
  sweep->add_option("--manifest", manifest, "Manifest JSON")->required();
  sweep->add_option("--out", sweep_out, "CSV output (default: stdout)");
  sweep->add_option("--threads", sweep_threads, "Rows restored concurrently");

  std::string preset = "music";
  std::string pattern_file;
  auto* patterns = app.add_subcommand("patterns", "List or validate pattern sets");
  patterns->require_subcommand(1);
  auto* list = patterns->add_subcommand("list", "Print a default pattern set");
  list->add_option("--preset", preset, "music or speech")->check(CLI::IsMember({"music", "speech"}));
  auto* validate = patterns->add_subcommand("validate", "Parse and check a pattern file");
  validate->add_option("file", pattern_file, "Pattern file")->required();

  std::string spec_path;
  std::string synth_out;
  std::string synth_format = "float32";
  auto* synth = app.add_subcommand("synth", "Write a sum of DFT-bin sinusoids");
  synth->add_option("--spec", spec_path, "Synth spec JSON")->required();
  synth->add_option("--out", synth_out, "Output WAV")->required();
  synth->add_option("--format", synth_format, "pcm16 or float32");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*degrade) return run_degrade(degrade_args);
    if (*restore) return run_restore(restore_args);
    if (*eval) return run_eval(ref_path, est_path, metric, skip);
    if (*sweep) return run_sweep(manifest, sweep_out, sweep_threads);
    if (*list) return run_patterns_list(preset);
    if (*validate) return run_patterns_validate(pattern_file);
    if (*synth) return run_synth(spec_path, synth_out, synth_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
