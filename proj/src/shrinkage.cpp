#include "tfr/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tfr/kernels.hpp"

namespace tfr {

Pattern::Pattern(std::string name, BinaryMatrix mask) : name_(std::move(name)), mask_(std::move(mask)) {
  if (mask_.rows() % 2 == 0 || mask_.cols() % 2 == 0) {
    throw ParameterError("pattern '" + name_ + "' must have odd dimensions");
  }
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] > 1) throw ParameterError("pattern '" + name_ + "' has a non-binary entry");
    nonzeros_ += mask_[i];
  }
  if (nonzeros_ == 0) throw ParameterError("pattern '" + name_ + "' is empty");
}

Pattern make_pattern(std::string name, const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ParameterError("pattern '" + name + "' has no entries");
  BinaryMatrix mask(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != mask.cols()) throw ParameterError("pattern '" + name + "' rows differ in length");
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      if (rows[r][c] != 0 && rows[r][c] != 1) throw ParameterError("pattern '" + name + "' has a non-binary entry");
      mask(r, c) = static_cast<std::uint8_t>(rows[r][c]);
    }
  }
  return Pattern(std::move(name), std::move(mask));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct PendingBlock {
  std::string name;
  std::size_t name_line = 0;
  std::vector<std::vector<int>> rows;
};

Pattern finish_block(PendingBlock& block) {
  if (block.rows.empty()) throw ParseError(block.name_line, "pattern '" + block.name + "' has no rows");
  const std::size_t rows = block.rows.size();
  const std::size_t cols = block.rows.front().size();
  if (rows % 2 == 0 || cols % 2 == 0) {
    throw ParseError(block.name_line, "pattern '" + block.name + "' has even dimensions " + std::to_string(rows) +
                                          "x" + std::to_string(cols));
  }
  try {
    return make_pattern(block.name, block.rows);
  } catch (const ParameterError& e) {
    throw ParseError(block.name_line, e.what());
  }
}

}  // namespace

std::vector<Pattern> load_patterns(std::string_view text) {
  std::vector<Pattern> out;
  std::optional<PendingBlock> block;
  std::istringstream lines{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) {
      if (block) {
        out.push_back(finish_block(*block));
        block.reset();
      }
      continue;
    }
    if (line.front() == '#') continue;

    if (!block) {
      if (line.substr(0, 5) != "name " && line != "name") throw ParseError(line_no, "expected 'name <label>'");
      const auto label = trim(line.substr(4));
      if (label.empty()) throw ParseError(line_no, "pattern label is empty");
      block = PendingBlock{std::string(label), line_no, {}};
      continue;
    }

    std::vector<int> row;
    std::istringstream tokens{std::string(line)};
    std::string token;
    while (tokens >> token) {
      if (token == "0") {
        row.push_back(0);
      } else if (token == "1") {
        row.push_back(1);
      } else {
        throw ParseError(line_no, "expected 0 or 1, got '" + token + "'");
      }
    }
    if (!block->rows.empty() && row.size() != block->rows.front().size()) {
      throw ParseError(line_no, "row has " + std::to_string(row.size()) + " entries, expected " +
                                    std::to_string(block->rows.front().size()));
    }
    block->rows.push_back(std::move(row));
  }
  if (block) out.push_back(finish_block(*block));
  return out;
}

std::vector<Pattern> load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open pattern file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_patterns(buffer.str());
}

std::string format_patterns(std::span<const Pattern> patterns) {
  std::string out;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    if (k > 0) out += '\n';
    const auto& p = patterns[k];
    out += "name " + p.name() + '\n';
    for (std::size_t r = 0; r < p.mask().rows(); ++r) {
      for (std::size_t c = 0; c < p.mask().cols(); ++c) {
        if (c > 0) out += ' ';
        out += p.mask()(r, c) != 0 ? '1' : '0';
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<Pattern> default_patterns(std::size_t time_span, std::size_t frequency_half_extent) {
  if (time_span < 3 || time_span % 2 == 0) throw ParameterError("pattern time span must be odd and >= 3");
  const std::size_t rows = 2 * frequency_half_extent + 1;
  const std::size_t cols = time_span;
  const auto F = static_cast<long>(frequency_half_extent);
  const auto T = static_cast<long>(time_span / 2);

  auto blank = [&] { return BinaryMatrix(rows, cols); };
  std::vector<Pattern> out;

  auto horizontal = blank();
  for (std::size_t c = 0; c < cols; ++c) horizontal(F, c) = 1;
  out.emplace_back("horizontal", std::move(horizontal));

  auto vertical = blank();
  for (std::size_t r = 0; r < rows; ++r) vertical(r, T) = 1;
  out.emplace_back("vertical", std::move(vertical));

  // Past frames and the centre only, so energy never leaks backwards from an onset.
  auto causal = blank();
  for (long c = 0; c <= T; ++c) causal(F, c) = 1;
  out.emplace_back("causal", std::move(causal));

  auto diagonal = [&](int direction) {
    auto m = blank();
    for (long c = 0; c < static_cast<long>(cols); ++c) {
      const double slope = T == 0 ? 0.0 : static_cast<double>(F) / static_cast<double>(T);
      const long centre = F + direction * std::lround(static_cast<double>(c - T) * slope);
      for (long r = centre - 1; r <= centre + 1; ++r) {
        if (r >= 0 && r < static_cast<long>(rows)) m(r, c) = 1;
      }
    }
    return m;
  };
  out.emplace_back("diagonal_up", diagonal(1));
  out.emplace_back("diagonal_down", diagonal(-1));

  auto square = blank();
  for (long r = F - 1; r <= F + 1; ++r) {
    for (long c = T - 1; c <= T + 1; ++c) {
      if (r >= 0 && r < static_cast<long>(rows)) square(r, c) = 1;
    }
  }
  out.emplace_back("square", std::move(square));
  return out;
}

std::vector<Pattern> default_music_patterns() { return default_patterns(21); }
std::vector<Pattern> default_speech_patterns() { return default_patterns(13); }

TFMatrix hard_threshold(const TFMatrix& z, std::size_t k) {
  const std::size_t n = z.size();
  if (k > n) {
    throw ParameterError("hard threshold keeps " + std::to_string(k) + " of only " + std::to_string(n) + " entries");
  }
  TFMatrix out(z.rows(), z.cols());
  if (k == 0) return out;
  if (k == n) return z;

  std::vector<double> magnitude(n);
  kernels::squared_magnitude(z.values(), magnitude);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto larger = [&](std::size_t a, std::size_t b) {
    return magnitude[a] != magnitude[b] ? magnitude[a] > magnitude[b] : a < b;
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), larger);
  for (std::size_t i = 0; i < k; ++i) out[order[i]] = z[order[i]];
  return out;
}

namespace {

// Half-sample symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
std::size_t mirror(long index, std::size_t n) {
  const long period = 2 * static_cast<long>(n);
  long m = index % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < static_cast<long>(n) ? m : period - 1 - m);
}

// Writes the patch energies of z into `energy` (same shape). `power` and
// `extended` are caller-owned work arrays so the hot loop does not allocate.
void patch_energy_into(const TFMatrix& z, const Pattern& pattern, std::span<double> energy,
                       std::vector<double>& power, std::vector<double>& extended) {
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  const std::size_t F = pattern.frequency_extent();
  const auto T = static_cast<long>(pattern.time_extent());
  const std::size_t span = rows + 2 * F;

  power.resize(z.size());
  kernels::squared_magnitude(z.values(), power);

  // Each column of |Z|^2 extended by F mirrored rows on both sides, so every
  // frequency offset becomes one contiguous slice.
  extended.resize(span * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const double* src = power.data() + c * rows;
    double* dst = extended.data() + c * span;
    std::copy(src, src + rows, dst + F);
    for (std::size_t i = 0; i < F; ++i) {
      dst[i] = src[mirror(static_cast<long>(i) - static_cast<long>(F), rows)];
      dst[F + rows + i] = src[mirror(static_cast<long>(rows + i), rows)];
    }
  }

  const auto& mask = pattern.mask();
  std::ranges::fill(energy, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    auto target = energy.subspan(j * rows, rows);
    for (std::size_t mc = 0; mc < mask.cols(); ++mc) {
      const std::size_t source = mirror(static_cast<long>(j) + static_cast<long>(mc) - T, cols);
      const double* column = extended.data() + source * span;
      for (std::size_t mr = 0; mr < mask.rows(); ++mr) {
        if (mask(mr, mc) != 0) kernels::accumulate(target, {column + mr, rows});
      }
    }
  }
}

struct EnergyScratch {
  std::vector<double> power;
  std::vector<double> extended;
  std::vector<double> energy;
};

EnergyScratch& energy_scratch() {
  thread_local EnergyScratch s;
  return s;
}

}  // namespace

RealMatrix patch_energy(const TFMatrix& z, const Pattern& pattern) {
  RealMatrix energy(z.rows(), z.cols());
  auto& s = energy_scratch();
  patch_energy_into(z, pattern, energy.values(), s.power, s.extended);
  return energy;
}

TFMatrix pew(const TFMatrix& z, const Pattern& pattern, double mu) {
  if (!(mu >= 0.0)) throw ParameterError("PEW threshold must be non-negative");
  TFMatrix out = z;
  if (mu == 0.0 || z.empty()) return out;
  auto& s = energy_scratch();
  s.energy.resize(z.size());
  patch_energy_into(z, pattern, s.energy, s.power, s.extended);
  kernels::apply_energy_gain(out.values(), s.energy, mu * mu);
  return out;
}

const Pattern& ShrinkageFamily::pattern() const {
  if (!pattern_) throw ParameterError("plain shrinkage has no pattern");
  return *pattern_;
}

TFMatrix shrink(const ShrinkageFamily& family, const TFMatrix& z, double mu) {
  if (!family.is_plain()) return pew(z, family.pattern(), mu);
  if (!(mu >= 0.0) || std::floor(mu) != mu) {
    throw ParameterError("plain shrinkage needs a non-negative integer threshold, got " + std::to_string(mu));
  }
  const std::size_t total = z.size();
  const double removed = std::min(mu, static_cast<double>(total));
  return hard_threshold(z, total - static_cast<std::size_t>(removed));
}

void MuSchedule::validate() const {
  if (!(mu0 >= 0.0)) throw ParameterError("initial threshold must be non-negative");
  if (rule == ScheduleRule::geometric && !(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("geometric schedule ratio must lie in [0, 1]");
  }
}

double next_mu(const MuSchedule& schedule, double mu) {
  if (schedule.rule == ScheduleRule::linear_decrement) return std::max(mu - 1.0, 0.0);
  return schedule.alpha * mu;
}

}  // namespace tfr
