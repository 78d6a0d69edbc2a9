#include "tfr/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tfr {

namespace {

constexpr std::uint16_t format_pcm = 1;
constexpr std::uint16_t format_float = 3;
constexpr std::uint16_t format_extensible = 0xFFFE;

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes, std::size_t begin, std::size_t end)
      : bytes_(bytes), pos_(begin), end_(end) {}

  [[nodiscard]] std::size_t remaining() const { return end_ - pos_; }
  [[nodiscard]] std::size_t position() const { return pos_; }

  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::string tag() {
    need(4);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  void need(std::size_t n) const {
    if (end_ - pos_ < n) throw WavError("truncated WAV data");
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
  std::size_t end_;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

WavFile decode_wav(const std::vector<std::uint8_t>& bytes) {
  static_assert(std::endian::native == std::endian::little, "float decoding assumes a little-endian host");
  Reader top(bytes, 0, bytes.size());
  if (top.tag() != "RIFF") throw WavError("not a RIFF file");
  top.u32();
  if (top.tag() != "WAVE") throw WavError("not a WAVE file");

  bool have_format = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  std::size_t data_begin = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  while (top.remaining() >= 8 && !have_data) {
    const std::string id = top.tag();
    const std::uint32_t size = top.u32();
    const std::size_t begin = top.position();
    if (size > top.remaining()) throw WavError("chunk '" + id + "' runs past the end of the file");
    if (id == "fmt ") {
      Reader f(bytes, begin, begin + size);
      format = f.u16();
      channels = f.u16();
      rate = f.u32();
      f.u32();
      f.u16();
      bits = f.u16();
      if (format == format_extensible) {
        if (f.remaining() < 2 + 22) throw WavError("short extensible format chunk");
        f.skip(2 + 6);
        format = f.u16();
      }
      have_format = true;
    } else if (id == "data") {
      data_begin = begin;
      data_size = size;
      have_data = true;
    }
    // Odd-sized chunks carry a pad byte, which some writers omit at the end.
    std::size_t advance = size + (size & 1U);
    if (advance > top.remaining()) advance = size;
    top.skip(advance);
  }
  if (!have_format) throw WavError("missing fmt chunk");
  if (!have_data) throw WavError("missing data chunk");
  if (channels == 0) throw WavError("zero channels");

  WavFile out;
  if (format == format_pcm && bits == 16) {
    out.format = SampleFormat::pcm16;
  } else if (format == format_float && bits == 32) {
    out.format = SampleFormat::float32;
  } else {
    throw WavError("unsupported sample format (" + std::to_string(format) + ", " + std::to_string(bits) +
                   " bits); expected PCM 16-bit or float 32-bit");
  }
  out.channels = channels;
  out.signal.sample_rate = rate;

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  out.signal.samples.assign(frames, 0.0);
  const std::uint8_t* p = bytes.data() + data_begin;
  for (std::size_t n = 0; n < frames; ++n) {
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c, p += width) {
      if (out.format == SampleFormat::pcm16) {
        const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        sum += static_cast<double>(v) / 32768.0;
      } else {
        float v = 0.0f;
        std::memcpy(&v, p, 4);
        sum += static_cast<double>(v);
      }
    }
    out.signal.samples[n] = sum / channels;
  }
  if (channels > 1) {
    out.warnings.push_back("mixed " + std::to_string(channels) + " channels down to mono by averaging");
  }
  return out;
}

WavFile read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const Signal& signal, SampleFormat format) {
  const std::size_t width = format == SampleFormat::pcm16 ? 2 : 4;
  const std::size_t data_size = signal.samples.size() * width;
  if (data_size > 0xFFFFFFFFULL - 36) throw WavError("signal too long for a RIFF file");

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::pcm16 ? format_pcm : format_float);
  put_u16(out, 1);
  put_u32(out, signal.sample_rate);
  put_u32(out, static_cast<std::uint32_t>(signal.sample_rate * width));
  put_u16(out, static_cast<std::uint16_t>(width));
  put_u16(out, static_cast<std::uint16_t>(8 * width));
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_size));
  for (double v : signal.samples) {
    if (format == SampleFormat::pcm16) {
      const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      const auto f = static_cast<float>(v);
      std::uint32_t bitsv = 0;
      std::memcpy(&bitsv, &f, 4);
      put_u32(out, bitsv);
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Signal& signal, SampleFormat format) {
  const auto bytes = encode_wav(signal, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WavError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WavError("write failed for " + path.string());
}

}  // namespace tfr
