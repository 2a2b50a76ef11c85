#pragma once

#include <cstddef>

namespace twosex::kernels {

namespace scalar {
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
            const double* x, double* y);
}  // namespace scalar

#if defined(TWOSEX_HAVE_AVX2)
namespace avx2 {
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
            const double* x, double* y);
}  // namespace avx2
#endif

}  // namespace twosex::kernels
