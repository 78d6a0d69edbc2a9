#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfr/frames.hpp"

namespace tfr {

enum class SampleFormat { pcm16, float32 };

/// A decoded RIFF/WAVE file, mixed down to mono.
struct WavFile {
  Signal signal;
  SampleFormat format = SampleFormat::pcm16;
  unsigned channels = 1;
  /// Non-fatal notes such as a multichannel mixdown.
  std::vector<std::string> warnings;
};

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Little-endian PCM 16-bit or IEEE float 32-bit, plain or extensible format
/// chunk. PCM samples are scaled by 1/32768.
[[nodiscard]] WavFile decode_wav(const std::vector<std::uint8_t>& bytes);
[[nodiscard]] WavFile read_wav(const std::filesystem::path& path);

/// Mono output. PCM16 clamps to [-1, 1) and rounds to the nearest step.
[[nodiscard]] std::vector<std::uint8_t> encode_wav(const Signal& signal, SampleFormat format);
void write_wav(const std::filesystem::path& path, const Signal& signal, SampleFormat format = SampleFormat::float32);

}  // namespace tfr
