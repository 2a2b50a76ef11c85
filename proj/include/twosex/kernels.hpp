#pragma once

// Dense double-precision kernels used by the chain recursions and the
// transition-row convolutions. A scalar reference implementation is always
// available; an AVX2/FMA variant is selected at runtime when the CPU has it.

#include <cstddef>
#include <span>
#include <string_view>

namespace twosex::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();

/// ISA currently used by the dispatching entry points. Defaults to
/// detected_isa(), or Scalar when TWOSEX_ISA=scalar is set in the environment.
Isa active_isa();

/// Forces an ISA. Requesting one the CPU lacks falls back to Scalar.
/// Returns the ISA actually selected.
Isa set_active_isa(Isa isa);

/// y += alpha * x. Sizes must match.
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Returns sum_k x[k] * y[k].
double dot(std::span<const double> x, std::span<const double> y);

/// y = A x for a row-major `rows` x `cols` matrix with row stride `stride`.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols, std::size_t stride,
            std::span<const double> x, std::span<double> y);

/// Per-ISA entry points, for equivalence testing. Calling an ISA the CPU does
/// not support is undefined; check detected_isa() first.
void axpy(Isa isa, double alpha, std::span<const double> x, std::span<double> y);
double dot(Isa isa, std::span<const double> x, std::span<const double> y);
void matvec(Isa isa, std::span<const double> a, std::size_t rows, std::size_t cols,
            std::size_t stride, std::span<const double> x, std::span<double> y);

}  // namespace twosex::kernels
