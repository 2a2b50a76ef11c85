#include "twosex/chains.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "twosex/error.hpp"
#include "twosex/kernels.hpp"

namespace twosex {

ChainBoundTable::ChainBoundTable(const TruncatedTransitionMatrix& matrix, Count horizon)
    : cap_(matrix.cap()),
      horizon_(horizon),
      method_(matrix.method()),
      reps_(matrix.reps()),
      seed_(matrix.seed()) {
  if (horizon < 0) throw ModelError("chain horizon must be >= 0");
  const auto m = static_cast<std::size_t>(cap_);
  const auto steps = static_cast<std::size_t>(horizon + 1);
  hat_.assign(steps * m, 0.0);
  tilde_.assign(steps * m, 0.0);
  gap_.assign(steps * m, 0.0);

  // Transitions among transient states 1..M, row-major, plus the absorbing and
  // overflow columns.
  std::vector<double> inner(m * m);
  std::vector<double> to_zero(m), over(m);
  for (Count i = 1; i <= cap_; ++i) {
    const auto row = matrix.row(i);
    const auto r = static_cast<std::size_t>(i - 1);
    std::copy(row.begin() + 1, row.end(), inner.begin() + static_cast<std::ptrdiff_t>(r * m));
    to_zero[r] = row[0];
    over[r] = matrix.overflow(i);
  }

  std::vector<double> survive(m), tmp(m);
  for (std::size_t n = 1; n < steps; ++n) {
    const std::span<const double> hat_prev(hat_.data() + (n - 1) * m, m);
    const std::span<const double> tilde_prev(tilde_.data() + (n - 1) * m, m);
    const std::span<const double> gap_prev(gap_.data() + (n - 1) * m, m);
    double* hat_next = hat_.data() + n * m;
    double* tilde_next = tilde_.data() + n * m;
    double* gap_next = gap_.data() + n * m;

    // Ghat_i(n) = P_i0 + sum_j P_ij Ghat_j(n-1)
    kernels::matvec(inner, m, m, m, hat_prev, tmp);
    for (std::size_t r = 0; r < m; ++r) hat_next[r] = std::min(1.0, to_zero[r] + tmp[r]);

    // Gtilde_i(n) = 1 - sum_j P_ij (1 - Gtilde_j(n-1))
    for (std::size_t r = 0; r < m; ++r) survive[r] = 1.0 - tilde_prev[r];
    kernels::matvec(inner, m, m, m, survive, tmp);
    for (std::size_t r = 0; r < m; ++r) tilde_next[r] = std::clamp(1.0 - tmp[r], 0.0, 1.0);

    // D_i(n) = o_i + sum_j P_ij D_j(n-1), the difference of the two recursions.
    kernels::matvec(inner, m, m, m, gap_prev, tmp);
    for (std::size_t r = 0; r < m; ++r) gap_next[r] = over[r] + tmp[r];
  }
}

std::size_t ChainBoundTable::offset(Count i, Count n) const {
  if (i < 1 || i > cap_) {
    throw ModelError("state " + std::to_string(i) + " outside 1.." + std::to_string(cap_));
  }
  if (n < 0 || n > horizon_) throw ModelError("generation outside the computed horizon");
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(cap_) + static_cast<std::size_t>(i - 1);
}

double g_hat(const TruncatedTransitionMatrix& matrix, Count i, Count n) {
  if (i < 1 || i > matrix.cap()) throw ModelError("g_hat: state exceeds the cap");
  return ChainBoundTable(matrix, n).hat(i, n);
}

double g_tilde(const TruncatedTransitionMatrix& matrix, Count i, Count n) {
  if (i < 1 || i > matrix.cap()) throw ModelError("g_tilde: state exceeds the cap");
  return ChainBoundTable(matrix, n).tilde(i, n);
}

double truncation_constant(double r, Count n) {
  return (r - std::pow(r, static_cast<double>(n))) / (1.0 - r);
}

TruncationCertificate truncation_error(Count i, Count n, double r, Count cap) {
  if (!(r > 0.0 && r < 1.0)) throw OutOfScopeError("truncation certificate needs 0 < r < 1");
  if (n < 2) throw ModelError("truncation certificate holds for n >= 2");
  if (i < 1 || cap < i) throw ModelError("truncation certificate needs 1 <= i <= M");
  const double scale = static_cast<double>(i) / static_cast<double>(cap);
  return {scale * truncation_constant(r, n), scale * truncation_constant(r, n + 1)};
}

Count choose_cap(Count i, Count n, double r, double target_gap) {
  if (!(r > 0.0 && r < 1.0)) throw OutOfScopeError("choosing a cap needs 0 < r < 1");
  if (!(target_gap > 0.0)) throw ModelError("target gap must be positive");
  if (i < 1) throw ModelError("initial state must be >= 1");
  const double total = static_cast<double>(i) * (truncation_constant(r, n) + truncation_constant(r, n + 1));
  auto ok = [&](Count m) { return total / static_cast<double>(m) <= target_gap; };
  Count m = std::max<Count>(i, static_cast<Count>(std::ceil(total / target_gap)));
  while (m > i && ok(m - 1)) --m;
  while (!ok(m)) ++m;
  return m;
}

}  // namespace twosex
