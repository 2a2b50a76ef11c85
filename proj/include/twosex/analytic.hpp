#pragma once

#include <functional>
#include <vector>

#include "twosex/engine.hpp"
#include "twosex/types.hpp"

namespace twosex {

/// Bounds on a tail probability P_i(T > n). Raw values are the formulas as
/// written; lower/upper are clamped to [0, 1].
struct TailBound {
  Count i = 0;
  Count n = 0;
  double lower = 0.0;
  double upper = 1.0;
  double raw_lower = 0.0;
  double raw_upper = 1.0;
  /// raw_upper - raw_lower.
  double gap = 0.0;
  bool lower_clamped = false;
  bool upper_clamped = false;
};

/// Bounds on E_i[T], in generations.
struct MeanBound {
  Count i = 0;
  double lower = 1.0;
  double upper = 0.0;
  double raw_lower = 0.0;
  bool lower_clamped = false;
  // Constants used.
  double r = 0.0;
  double mu_s = 0.0;
  double sigma2_s = 0.0;
  double b_s = 0.0;
  /// r came from the mu_f envelope rather than a closed form.
  bool envelope_based = false;
};

/// Upper Agresti factor Qbar_i(mu, p0) at generation n. Equals 1 unless i = 1.
double agresti_upper_factor(double mu, double p0, Count i, Count n);

/// Lower Agresti factor Qlow_i(mu, sigma2) at generation n; negative values are
/// returned as computed.
double agresti_lower_factor(double mu, double sigma2, Count i, Count n);

/// Qlow_i(mu, sigma2) mu^n <= P_i(T_a > n) <= Qbar_i(mu, p0) i mu^n for an
/// asexual process with offspring mean mu < 1.
TailBound asexual_tail_bounds(double mu, double p0, double sigma2, Count i, Count n);

/// Tail bounds for the two-sex process with i = spec.initial: lower from the
/// siblings-mating-only envelope, upper from females-generate-females.
TailBound bgwp_tail_bounds(const ProcessSpec& spec, Count n, const SupportOptions& options = {});

/// Mean extinction-time bounds for an asexual process, i >= 3.
MeanBound mean_time_bounds_asexual(double mu, double sigma2, Count i);

/// Mean extinction-time bounds for the two-sex process, spec.initial >= 3.
MeanBound mean_time_bounds(const ProcessSpec& spec, const SupportOptions& options = {});

/// (pgf composed n times, evaluated at 0)^i: P_i(T <= n) for an asexual process.
double pgf_extinction_cdf(const std::function<double(double)>& pgf, Count i, Count n);

/// Exact P(T > n) for a single-ancestor asexual process with MG(b, c) offspring.
double mg_tail(double b, double c, Count n);

struct MgExampleRow {
  Count n = 0;
  double lower = 0.0;  ///< siblings-mating-only tail
  double upper = 0.0;  ///< females-generate-females tail
};

/// Closed-form sandwich for the independent-MG / promiscuous example.
struct MgExampleReport {
  double b_s = 0.0;
  double mu_f = 0.0;
  double mu_s = 0.0;
  double u_f = 0.0;
  double u_s = 0.0;
  std::vector<MgExampleRow> rows;
  double mean_lower = 0.0;
  double mean_upper = 0.0;
};

MgExampleReport mg_example_report(double b_f, double c_f, double b_m, double c_m, Count n_max);

}  // namespace twosex
