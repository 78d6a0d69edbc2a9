#include "tfr/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"
#include "tfr/wav.hpp"

namespace tfr {

namespace {

using nlohmann::json;

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "on" : "off";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  throw ParseError(0, "manifest config values must be strings, numbers or booleans");
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string level_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t input, std::size_t level) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(input), static_cast<std::uint32_t>(level)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Signal load_input(const ManifestInput& input) {
  if (input.synth) return synth_signal(*input.synth);
  const WavFile wav = read_wav(*input.path);
  return wav.signal;
}

template <class Config>
Config make_config(const ExperimentManifest& m, bool nested) {
  Config cfg;
  apply_config_text(m.config_text, cfg);
  if (m.flavor) cfg.flavor = *m.flavor;
  if (m.model) cfg.model = *m.model;
  if (nested) cfg.threads = 1;
  return cfg;
}

ExperimentRow run_row(const ExperimentManifest& m, std::size_t input_index, std::size_t level_index, bool nested) {
  const ManifestInput& input = m.inputs[input_index];
  ExperimentRow row;
  row.file = input.name;
  row.level = m.levels[level_index];
  try {
    Signal x = load_input(input);
    const std::uint64_t seed = row_seed(m.seed, input_index, level_index);
    Signal degraded;
    RestorationReport report;
    std::size_t margin = 0;
    const auto start = std::chrono::steady_clock::now();
    if (m.task == Task::denoise) {
      auto cfg = make_config<DenoiseConfig>(m, nested);
      NoisySignal noisy = add_noise(x, row.level, seed);
      cfg.sigma = noisy.sigma;
      degraded = std::move(noisy.signal);
      margin = cfg.frame_length;
      report = denoise(degraded, cfg);
    } else {
      auto cfg = make_config<DeclipConfig>(m, nested);
      double peak = 0.0;
      for (double v : x.samples) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) {
        for (double& v : x.samples) v /= peak;
      }
      ClippedSignal clipped = clip_to_sdr(x, row.level);
      cfg.tau = clipped.tau;
      degraded = std::move(clipped.signal);
      margin = cfg.frame_length;
      report = declip(degraded, cfg);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.input_db = snr_interior(x, degraded, margin);
    row.output_db = snr_interior(x, report.output, margin);
    row.delta_db = row.output_db - row.input_db;
    const double duration = static_cast<double>(x.samples.size()) / x.sample_rate;
    row.runtime_ratio = duration > 0.0 ? elapsed / duration : 0.0;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  ExperimentManifest m;
  try {
    const json j = json::parse(json_text);
    m.task = parse_task(j.at("task").get<std::string>());
    m.levels = j.value("levels", std::vector<double>{});
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("flavor")) m.flavor = parse_flavor(j.at("flavor").get<std::string>());
    if (j.contains("model")) m.model = parse_model(j.at("model").get<std::string>());
    m.report_runtime = j.value("report_runtime", false);
    m.threads = j.value("threads", std::size_t{0});
    if (j.contains("config")) {
      for (const auto& [key, value] : j.at("config").items()) {
        std::string v = config_value(value);
        if (key == "patterns") v = (base_dir / v).string();
        m.config_text += key + " = " + v + "\n";
      }
    }
    for (const auto& f : j.value("files", json::array())) {
      ManifestInput input;
      if (f.is_string()) {
        input.name = f.get<std::string>();
        input.path = base_dir / input.name;
      } else if (f.contains("synth")) {
        input.synth = parse_synth_spec(f.at("synth").dump());
        input.name = f.value("name", "synth" + std::to_string(m.inputs.size()));
      } else {
        input.name = f.at("path").get<std::string>();
        input.path = base_dir / input.name;
        input.name = f.value("name", input.name);
      }
      m.inputs.push_back(std::move(input));
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  }
  // Catch bad overrides before any work starts.
  if (m.task == Task::denoise) {
    DenoiseConfig probe;
    apply_config_text(m.config_text, probe);
  } else {
    DeclipConfig probe;
    apply_config_text(m.config_text, probe);
  }
  return m;
}

ExperimentResult run_experiment(const ExperimentManifest& m) {
  const std::size_t count = m.inputs.size() * m.levels.size();
  const bool nested = detail::worker_count(m.threads, count) > 1;
  ExperimentResult result;
  result.rows.resize(count);
  detail::parallel_for(count, m.threads, [&](std::size_t k) {
    result.rows[k] = run_row(m, k / m.levels.size(), k % m.levels.size(), nested);
  });

  const std::string metric = m.task == Task::denoise ? "snr" : "sdr";
  const RestorationConfig resolved = m.task == Task::denoise
                                        ? static_cast<RestorationConfig>(make_config<DenoiseConfig>(m, false))
                                        : static_cast<RestorationConfig>(make_config<DeclipConfig>(m, false));
  const std::string flavor(to_string(resolved.flavor));
  const std::string model(to_string(resolved.model));

  std::ostringstream csv;
  csv << "# task=" << to_string(m.task) << " metric=" << metric << " seed=" << m.seed << "\n";
  csv << "# " << metric << " = 10 log10(|x|^2 / |x - y|^2) over samples [L, N - L), no gain fitting\n";
  csv << "kind,file,level_db,flavor,model,metric,input_db,output_db,delta_db";
  if (m.report_runtime) csv << ",runtime_ratio";
  csv << ",error\n";

  auto line = [&](const std::string& kind, const std::string& file, double level, const std::string& in,
                  const std::string& out, const std::string& delta, const std::string& runtime,
                  const std::string& error) {
    csv << kind << ',' << csv_field(file) << ',' << level_text(level) << ',' << flavor << ',' << model << ','
        << metric << ',' << in << ',' << out << ',' << delta;
    if (m.report_runtime) csv << ',' << runtime;
    csv << ',' << csv_field(error) << '\n';
  };

  for (const auto& r : result.rows) {
    if (r.error.empty()) {
      line("data", r.file, r.level, fixed(r.input_db), fixed(r.output_db), fixed(r.delta_db), fixed(r.runtime_ratio),
           "");
    } else {
      line("data", r.file, r.level, "", "", "", "", r.error);
    }
  }

  for (std::size_t l = 0; l < m.levels.size(); ++l) {
    std::vector<const ExperimentRow*> ok;
    for (std::size_t i = 0; i < m.inputs.size(); ++i) {
      const auto& r = result.rows[i * m.levels.size() + l];
      if (r.error.empty()) ok.push_back(&r);
    }
    if (ok.empty()) {
      line("mean", "", m.levels[l], "", "", "", "", "no successful rows");
      line("std", "", m.levels[l], "", "", "", "", "no successful rows");
      continue;
    }
    auto stats = [&](double ExperimentRow::*field) {
      double mean = 0.0;
      for (const auto* r : ok) mean += r->*field;
      mean /= static_cast<double>(ok.size());
      double var = 0.0;
      for (const auto* r : ok) var += (r->*field - mean) * (r->*field - mean);
      const double sd = ok.size() > 1 ? std::sqrt(var / static_cast<double>(ok.size() - 1)) : 0.0;
      return std::pair{mean, sd};
    };
    const auto in = stats(&ExperimentRow::input_db);
    const auto out = stats(&ExperimentRow::output_db);
    const auto delta = stats(&ExperimentRow::delta_db);
    const auto rt = stats(&ExperimentRow::runtime_ratio);
    line("mean", "", m.levels[l], fixed(in.first), fixed(out.first), fixed(delta.first), fixed(rt.first), "");
    line("std", "", m.levels[l], fixed(in.second), fixed(out.second), fixed(delta.second), fixed(rt.second), "");
  }
  result.csv = csv.str();
  return result;
}

}  // namespace tfr
