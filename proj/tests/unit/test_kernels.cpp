#include <doctest.h>

#include <random>
#include <vector>

#include "tfr/kernels.hpp"

using namespace tfr;
using namespace tfr::kernels;

namespace {

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { force_isa(saved); }
};

std::vector<Complex> complex_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& c : v) c = {d(rng), d(rng)};
  return v;
}

std::vector<double> real_data(std::size_t n, std::uint64_t seed, bool with_zeros = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (with_zeros && i % 7 == 0) ? 0.0 : std::abs(d(rng)) * 3.0;
  return v;
}

template <class Fn>
auto run_with(Isa isa, Fn&& fn) {
  force_isa(isa);
  return fn();
}

}  // namespace

TEST_CASE("scalar path is always available") {
  CHECK(isa_available(Isa::scalar));
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 variant not available on this machine or build; equivalence not exercised");
    return;
  }
  IsaGuard guard;
  // Odd lengths exercise the vector tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 2051u}) {
    const auto a = complex_data(n, 1 + n);
    const auto b = complex_data(n, 2 + n);
    const auto e = real_data(n, 3 + n, true);
    const auto r = real_data(n, 4 + n);

    auto both = [&](auto fn) { return std::pair{run_with(Isa::scalar, fn), run_with(Isa::avx2, fn)}; };

    const auto [mag_s, mag_v] = both([&] {
      std::vector<double> out(n);
      squared_magnitude(a, out);
      return out;
    });
    CHECK(mag_s == mag_v);

    const auto [acc_s, acc_v] = both([&] {
      std::vector<double> out = r;
      accumulate(out, e);
      return out;
    });
    CHECK(acc_s == acc_v);

    for (double mu2 : {0.0, 0.5, 4.0}) {
      const auto [gain_s, gain_v] = both([&] {
        std::vector<Complex> z = a;
        apply_energy_gain(z, e, mu2);
        return z;
      });
      CHECK(gain_s == gain_v);
    }

    const auto [diff_s, diff_v] = both([&] {
      std::vector<Complex> acc = a;
      add_difference(acc, b, a);
      return acc;
    });
    CHECK(diff_s == diff_v);

    const auto [axpy_s, axpy_v] = both([&] {
      std::vector<Complex> acc = a;
      axpy(acc, -0.37, b);
      return acc;
    });
    CHECK(axpy_s == axpy_v);

    for (auto mode : {RealMode::re_minus_im, RealMode::re_only}) {
      const auto [re_s, re_v] = both([&] {
        std::vector<double> out(n);
        realify(a, out, mode);
        return out;
      });
      CHECK(re_s == re_v);
    }

    // Reductions differ only by summation order.
    const auto [ss_s, ss_v] = both([&] { return sum_squares(std::span<const Complex>(a)); });
    CHECK(ss_s == doctest::Approx(ss_v).epsilon(1e-12));
    const auto [sr_s, sr_v] = both([&] { return sum_squares(std::span<const double>(r)); });
    CHECK(sr_s == doctest::Approx(sr_v).epsilon(1e-12));
    const auto [dc_s, dc_v] = both([&] { return diff_sum_squares(std::span<const Complex>(a), std::span<const Complex>(b)); });
    CHECK(dc_s == doctest::Approx(dc_v).epsilon(1e-12));
    const auto [dr_s, dr_v] = both([&] { return diff_sum_squares(std::span<const double>(r), std::span<const double>(e)); });
    CHECK(dr_s == doctest::Approx(dr_v).epsilon(1e-12));
  }
}

TEST_CASE("kernel reference semantics") {
  IsaGuard guard;
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!isa_available(isa)) continue;
    force_isa(isa);
    std::vector<Complex> z{{3, 4}, {1, 0}, {0, 2}};
    std::vector<double> energy{25.0, 0.0, 1.0};
    apply_energy_gain(z, energy, 5.0);
    CHECK(z[0].real() == doctest::Approx(3.0 * 0.8));
    CHECK(z[1] == Complex{});
    CHECK(z[2] == Complex{});  // 1 - 5/1 < 0

    std::vector<double> out(3);
    squared_magnitude(std::vector<Complex>{{3, 4}, {1, 1}, {0, 0}}, out);
    CHECK(out == std::vector<double>{25, 2, 0});
  }
}
