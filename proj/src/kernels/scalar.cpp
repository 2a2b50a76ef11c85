#include "kernels_impl.hpp"

namespace twosex::kernels::scalar {

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

void matvec(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * stride, x, cols);
}

}  // namespace twosex::kernels::scalar
