#include <doctest.h>

#include <cmath>
#include <vector>

#include "twosex/kernels.hpp"
#include "twosex/random.hpp"

using namespace twosex;
using kernels::Isa;

namespace {

std::vector<double> random_vector(RandomStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * 2.0 - 1.0;
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{1, 1, 1, 1, 1};
  kernels::axpy(Isa::Scalar, 2.0, x, y);
  CHECK(y == std::vector<double>{3, 5, 7, 9, 11});
  CHECK(kernels::dot(Isa::Scalar, x, x) == 55.0);

  // 2x3 matrix with stride 4.
  const std::vector<double> a{1, 2, 3, -9, 4, 5, 6, -9};
  std::vector<double> out(2);
  kernels::matvec(Isa::Scalar, a, 2, 3, 4, std::vector<double>{1, 0, -1}, out);
  CHECK(out == std::vector<double>{-2, -2});
}

TEST_CASE("AVX2 kernels are equivalent to the scalar reference") {
  if (kernels::detected_isa() != Isa::Avx2) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  RandomStream rng(42);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 16u, 33u, 257u}) {
    CAPTURE(n);
    const auto x = random_vector(rng, n);
    const auto base = random_vector(rng, n);
    auto ys = base, yv = base;
    kernels::axpy(Isa::Scalar, 0.37, x, ys);
    kernels::axpy(Isa::Avx2, 0.37, x, yv);
    for (std::size_t k = 0; k < n; ++k) CHECK(yv[k] == doctest::Approx(ys[k]).epsilon(1e-14));

    const double ds = kernels::dot(Isa::Scalar, x, base);
    const double dv = kernels::dot(Isa::Avx2, x, base);
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + static_cast<double>(n)));
  }
  for (std::size_t rows : {1u, 3u, 4u, 5u, 20u, 81u})
    for (std::size_t cols : {1u, 4u, 6u, 20u, 81u}) {
      CAPTURE(rows);
      CAPTURE(cols);
      const std::size_t stride = cols + 3;
      const auto a = random_vector(rng, rows * stride);
      const auto x = random_vector(rng, cols);
      std::vector<double> ys(rows), yv(rows);
      kernels::matvec(Isa::Scalar, a, rows, cols, stride, x, ys);
      kernels::matvec(Isa::Avx2, a, rows, cols, stride, x, yv);
      for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(ys[r] - yv[r]) <= 1e-13 * static_cast<double>(cols));
    }
}

TEST_CASE("ISA override falls back when unsupported") {
  const Isa before = kernels::active_isa();
  CHECK(kernels::set_active_isa(Isa::Scalar) == Isa::Scalar);
  CHECK(kernels::active_isa() == Isa::Scalar);
  CHECK(kernels::set_active_isa(Isa::Avx2) == kernels::detected_isa());
  kernels::set_active_isa(before);
}
