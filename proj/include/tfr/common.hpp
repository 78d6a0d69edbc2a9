#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfr {

using Complex = std::complex<double>;

/// Bad argument values: frame lengths, thresholds, clip levels, config fields.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes that do not match the operator they are fed to.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A requested degradation level or search target cannot be met.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Malformed text input (pattern files, config files). Carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// How a complex time-domain estimate is mapped back to real samples.
///
/// `re_minus_im` keeps Re(v) - Im(v) (the default of the restoration pipelines),
/// `re_only` keeps Re(v). Both coincide when the estimate is real.
enum class RealMode { re_minus_im, re_only };

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace tfr
