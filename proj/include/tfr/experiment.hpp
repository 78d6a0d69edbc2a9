#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tfr/evaluation.hpp"
#include "tfr/restoration.hpp"

namespace tfr {

/// One input of a sweep: a WAV path or a synthetic signal.
struct ManifestInput {
  std::string name;
  std::optional<std::filesystem::path> path;
  std::optional<SynthSpec> synth;
};

struct ExperimentManifest {
  Task task = Task::denoise;
  std::vector<ManifestInput> inputs;
  /// Input SNR (denoise) or SDR (declip) levels in dB.
  std::vector<double> levels;
  std::uint64_t seed = 0;
  /// Override the config text when set.
  std::optional<Flavor> flavor;
  std::optional<Model> model;
  /// key = value overrides applied on top of the defaults.
  std::string config_text;
  /// Wall-clock columns make the CSV machine dependent, so they are opt-in.
  bool report_runtime = false;
  /// Rows restored concurrently; 0 uses the hardware concurrency.
  std::size_t threads = 0;
};

/// JSON manifest:
///   { "task": "denoise"|"declip", "levels": [...], "seed": n,
///     "flavor": ..., "model": ..., "report_runtime": bool, "threads": n,
///     "config": { "key": value, ... },
///     "files": [ "a.wav", { "name": "s1", "synth": { ...synth spec... } } ] }
/// Relative paths resolve against `base_dir`. Errors raise ParseError (line 0).
[[nodiscard]] ExperimentManifest parse_manifest(const std::string& json_text,
                                                const std::filesystem::path& base_dir = {});

struct ExperimentRow {
  std::string file;
  double level = 0.0;
  double input_db = 0.0;
  double output_db = 0.0;
  double delta_db = 0.0;
  double runtime_ratio = 0.0;
  /// Empty on success.
  std::string error;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::string csv;
};

/// Degrade, restore and score every (input, level) pair. Metrics skip the first
/// and last L samples. Per-level mean and standard deviation rows follow the
/// data rows. A failing row records its error and the sweep continues.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentManifest& manifest);

}  // namespace tfr
