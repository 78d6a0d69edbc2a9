#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "kernel_table.hpp"
#include "tfr/kernels.hpp"

namespace tfr::kernels {
namespace {

using detail::KernelTable;

bool cpu_has_avx2() noexcept {
#if defined(TFR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& table_for(Isa isa) noexcept {
#if defined(TFR_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table();
#endif
  (void)isa;
  return detail::scalar_table();
}

Isa startup_isa() noexcept {
  if (const char* env = std::getenv("TFR_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct Dispatch {
  std::atomic<Isa> isa{startup_isa()};
  std::atomic<const KernelTable*> table{&table_for(isa.load())};
};

Dispatch& dispatch() noexcept {
  static Dispatch d;
  return d;
}

const KernelTable& active() noexcept { return *dispatch().table.load(std::memory_order_relaxed); }

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("kernel operands differ in length");
}

}  // namespace

Isa active_isa() noexcept { return dispatch().isa.load(); }

bool isa_available(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ParameterError("instruction set not available: " + std::string(isa_name(isa)));
  }
  dispatch().isa.store(isa);
  dispatch().table.store(&table_for(isa));
}

void squared_magnitude(std::span<const Complex> in, std::span<double> out) {
  require_same(in.size(), out.size());
  active().squared_magnitude(in.data(), out.data(), in.size());
}

void accumulate(std::span<double> dst, std::span<const double> src) {
  require_same(dst.size(), src.size());
  active().accumulate(dst.data(), src.data(), dst.size());
}

void apply_energy_gain(std::span<Complex> z, std::span<const double> energy, double mu2) {
  require_same(z.size(), energy.size());
  active().apply_energy_gain(z.data(), energy.data(), mu2, z.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

double sum_squares(std::span<const Complex> x) {
  return active().sum_squares(reinterpret_cast<const double*>(x.data()), 2 * x.size());
}

double diff_sum_squares(std::span<const Complex> a, std::span<const Complex> b) {
  require_same(a.size(), b.size());
  return active().diff_sum_squares_real(reinterpret_cast<const double*>(a.data()),
                                        reinterpret_cast<const double*>(b.data()), 2 * a.size());
}

double diff_sum_squares(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size());
  return active().diff_sum_squares_real(a.data(), b.data(), a.size());
}

void add_difference(std::span<Complex> acc, std::span<const Complex> a, std::span<const Complex> b) {
  require_same(acc.size(), a.size());
  require_same(acc.size(), b.size());
  active().add_difference(acc.data(), a.data(), b.data(), acc.size());
}

void axpy(std::span<Complex> dst, double alpha, std::span<const Complex> src) {
  require_same(dst.size(), src.size());
  active().axpy(dst.data(), alpha, src.data(), dst.size());
}

void realify(std::span<const Complex> in, std::span<double> out, RealMode mode) {
  require_same(in.size(), out.size());
  active().realify(in.data(), out.data(), mode, in.size());
}

}  // namespace tfr::kernels
