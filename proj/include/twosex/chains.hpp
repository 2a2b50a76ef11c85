#pragma once

#include <vector>

#include "twosex/engine.hpp"
#include "twosex/types.hpp"

namespace twosex {

/// Lower (hat) and upper (tilde) bounds on P_i(T <= n) from the two chains
/// obtained by stopping the process once it exceeds the cap M: the hat chain
/// sticks at M, the tilde chain jumps to 0.
class ChainBoundTable {
 public:
  ChainBoundTable(const TruncatedTransitionMatrix& matrix, Count horizon);

  Count cap() const noexcept { return cap_; }
  Count horizon() const noexcept { return horizon_; }
  TransitionMethod method() const noexcept { return method_; }
  /// Bounds rest on an estimated matrix; certificates refer to that chain.
  bool estimated() const noexcept { return method_ == TransitionMethod::MonteCarlo; }
  Count reps() const noexcept { return reps_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double hat(Count i, Count n) const { return hat_[offset(i, n)]; }
  double tilde(Count i, Count n) const { return tilde_[offset(i, n)]; }
  /// tilde - hat, accumulated by its own recursion (no cancellation).
  double gap(Count i, Count n) const { return gap_[offset(i, n)]; }

 private:
  std::size_t offset(Count i, Count n) const;

  Count cap_;
  Count horizon_;
  TransitionMethod method_;
  Count reps_;
  std::uint64_t seed_;
  std::vector<double> hat_;
  std::vector<double> tilde_;
  std::vector<double> gap_;
};

/// Lower bound Ghat_i(n) on P_i(T <= n).
double g_hat(const TruncatedTransitionMatrix& matrix, Count i, Count n);

/// Upper bound Gtilde_i(n) on P_i(T <= n).
double g_tilde(const TruncatedTransitionMatrix& matrix, Count i, Count n);

struct TruncationCertificate {
  double hat = 0.0;    ///< bounds G - Ghat: i c_n(r) / M
  double tilde = 0.0;  ///< bounds Gtilde - G: i c_{n+1}(r) / M
};

/// c_n(r) = (r - r^n) / (1 - r).
double truncation_constant(double r, Count n);

/// Certified distance between each chain bound and the true cdf; n >= 2.
TruncationCertificate truncation_error(Count i, Count n, double r, Count cap);

/// Smallest cap M >= i whose certified total gap i (c_n + c_{n+1}) / M is at
/// most target_gap.
Count choose_cap(Count i, Count n, double r, double target_gap);

}  // namespace twosex
