#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "twosex/kernels.hpp"

namespace twosex::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(TWOSEX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("TWOSEX_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::Scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  active().store(isa, std::memory_order_relaxed);
  return isa;
}

void axpy(Isa isa, double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
#if defined(TWOSEX_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::axpy(alpha, x.data(), y.data(), x.size());
#endif
  (void)isa;
  scalar::axpy(alpha, x.data(), y.data(), x.size());
}

double dot(Isa isa, std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
#if defined(TWOSEX_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::dot(x.data(), y.data(), x.size());
#endif
  (void)isa;
  return scalar::dot(x.data(), y.data(), x.size());
}

void matvec(Isa isa, std::span<const double> a, std::size_t rows, std::size_t cols,
            std::size_t stride, std::span<const double> x, std::span<double> y) {
  assert(cols <= stride && x.size() >= cols && y.size() >= rows);
  assert(rows == 0 || a.size() >= (rows - 1) * stride + cols);
#if defined(TWOSEX_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::matvec(a.data(), rows, cols, stride, x.data(), y.data());
#endif
  (void)isa;
  scalar::matvec(a.data(), rows, cols, stride, x.data(), y.data());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  axpy(active_isa(), alpha, x, y);
}

double dot(std::span<const double> x, std::span<const double> y) { return dot(active_isa(), x, y); }

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols, std::size_t stride,
            std::span<const double> x, std::span<double> y) {
  matvec(active_isa(), a, rows, cols, stride, x, y);
}

}  // namespace twosex::kernels
