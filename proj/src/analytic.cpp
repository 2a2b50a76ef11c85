#include "twosex/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twosex/error.hpp"

namespace twosex {

namespace {

void require_subcritical_mean(double mu, const char* what) {
  if (!std::isfinite(mu)) throw ModelError(std::string(what) + ": mean is not finite");
  if (!(mu > 0.0 && mu < 1.0)) throw ModelError(std::string(what) + " needs 0 < mu < 1");
}

double power(double base, Count n) { return std::pow(base, static_cast<double>(n)); }

TailBound clamp_tail(Count i, Count n, double raw_lower, double raw_upper) {
  TailBound b;
  b.i = i;
  b.n = n;
  b.raw_lower = raw_lower;
  b.raw_upper = raw_upper;
  b.gap = raw_upper - raw_lower;
  b.lower = std::clamp(raw_lower, 0.0, 1.0);
  b.upper = std::clamp(raw_upper, 0.0, 1.0);
  b.lower_clamped = b.lower != raw_lower;
  b.upper_clamped = b.upper != raw_upper;
  return b;
}

}  // namespace

double agresti_upper_factor(double mu, double p0, Count i, Count n) {
  if (std::isnan(mu) || std::isnan(p0)) throw ModelError("c1 undefined: NaN input");
  require_subcritical_mean(mu, "upper Agresti factor");
  if (i < 1 || n < 0) throw ModelError("upper Agresti factor needs i >= 1 and n >= 0");
  if (i != 1) return 1.0;
  const double denom = mu + p0 - 1.0;
  const double c1 = denom > 0.0 ? std::max(2.0, mu / denom) : 2.0;
  const double decay = 1.0 - power(mu, n);
  return 1.0 - decay / (c1 * (1.0 - mu) + decay);
}

double agresti_lower_factor(double mu, double sigma2, Count i, Count n) {
  require_subcritical_mean(mu, "lower Agresti factor");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ModelError("lower Agresti factor needs a finite positive variance");
  }
  if (i < 1 || n < 0) throw ModelError("lower Agresti factor needs i >= 1 and n >= 0");
  const double c2 = mu * (1.0 - mu) / sigma2;
  const double mun = power(mu, n);
  const double denom = 1.0 - (1.0 - c2) * mun;
  return c2 / denom - (1.0 - mun) / denom * static_cast<double>(i - 1) / 2.0;
}

TailBound asexual_tail_bounds(double mu, double p0, double sigma2, Count i, Count n) {
  const double mun = power(mu, n);
  const double lower = agresti_lower_factor(mu, sigma2, i, n) * mun;
  const double upper = agresti_upper_factor(mu, p0, i, n) * static_cast<double>(i) * mun;
  return clamp_tail(i, n, lower, upper);
}

TailBound bgwp_tail_bounds(const ProcessSpec& spec, Count n, const SupportOptions& options) {
  if (n < 0) throw ModelError("generation n must be >= 0");
  const OffspringMoments m = spec.law.moments();
  if (!(m.mu_f < 1.0)) {
    throw OutOfScopeError("mean female offspring " + std::to_string(m.mu_f) +
                          " >= 1: tail bounds cover only subcritical female envelopes; critical and "
                          "supercritical envelopes are not supported");
  }
  const Count i = spec.initial;
  const MatedSiblingLaw h = mated_sibling_law(spec.law, spec.rule, options);

  // Degenerate envelopes have exact tails: with mean 0 nothing survives a generation.
  double upper = 0.0;
  if (m.mu_f > 0.0) upper = agresti_upper_factor(m.mu_f, m.p_f0, i, n) * static_cast<double>(i) * power(m.mu_f, n);
  else upper = n == 0 ? 1.0 : 0.0;

  double lower = 0.0;
  if (h.mu_s > 0.0 && h.sigma2_s > 0.0) lower = agresti_lower_factor(h.mu_s, h.sigma2_s, i, n) * power(h.mu_s, n);
  else lower = n == 0 ? 1.0 : 0.0;

  return clamp_tail(i, n, lower, upper);
}

MeanBound mean_time_bounds_asexual(double mu, double sigma2, Count i) {
  if (i < 3) throw ModelError("mean extinction-time bounds hold for i >= 3");
  require_subcritical_mean(mu, "mean-time bound");
  if (!(sigma2 > 0.0)) throw ModelError("mean-time bound needs a positive offspring variance");
  const double li = std::log(static_cast<double>(i));
  const double abs_log_mu = std::abs(std::log(mu));
  const double b = (1.0 - mu) * mu / sigma2;
  MeanBound out;
  out.i = i;
  out.r = mu;
  out.mu_s = mu;
  out.sigma2_s = sigma2;
  out.b_s = b;
  out.raw_lower = ((li - std::log(li)) / abs_log_mu - 1.0) * (1.0 - 1.0 / (static_cast<double>(i) * b));
  out.lower = std::max(1.0, out.raw_lower);
  out.lower_clamped = out.lower != out.raw_lower;
  out.upper = li / abs_log_mu + (2.0 - mu) / (1.0 - mu);
  return out;
}

MeanBound mean_time_bounds(const ProcessSpec& spec, const SupportOptions& options) {
  const Count i = spec.initial;
  if (i < 3) throw ModelError("mean extinction-time bounds hold for i >= 3 (got i = " + std::to_string(i) + ")");
  const GrowthRate g = growth_rate(spec);
  if (!(g.value < 1.0)) {
    throw OutOfScopeError("growth rate r = " + std::to_string(g.value) + " >= 1: process is not subcritical");
  }
  if (!(g.value > 0.0)) throw ModelError("mean-time bounds need r > 0");
  const MatedSiblingLaw h = mated_sibling_law(spec.law, spec.rule, options);

  MeanBound out;
  out.i = i;
  out.r = g.value;
  out.envelope_based = g.provenance != GrowthRate::Provenance::ClosedForm;
  out.mu_s = h.mu_s;
  out.sigma2_s = h.sigma2_s;

  const double li = std::log(static_cast<double>(i));
  if (h.mu_s > 0.0 && h.sigma2_s > 0.0) {
    out.b_s = (1.0 - h.mu_s) * h.mu_s / h.sigma2_s;
    out.raw_lower = ((li - std::log(li)) / std::abs(std::log(h.mu_s)) - 1.0) *
                    (1.0 - 1.0 / (static_cast<double>(i) * out.b_s));
  } else {
    out.raw_lower = 1.0;  // T >= 1 always.
  }
  out.lower = std::max(1.0, out.raw_lower);
  out.lower_clamped = out.lower != out.raw_lower;

  const double r = g.value;
  const double log_route = li / std::abs(std::log(r)) + (2.0 - r) / (1.0 - r);
  const double markov_route = static_cast<double>(i) / (1.0 - r);
  out.upper = std::min(log_route, markov_route);
  return out;
}

double pgf_extinction_cdf(const std::function<double(double)>& pgf, Count i, Count n) {
  if (i < 1 || n < 0) throw ModelError("pgf extinction cdf needs i >= 1 and n >= 0");
  double x = 0.0;
  for (Count k = 0; k < n; ++k) x = pgf(x);
  return power(x, i);
}

double mg_tail(double b, double c, Count n) {
  if (!(b > 0.0 && c > 0.0 && b + c <= 1.0)) throw ModelError("MG(b, c) needs b > 0, c > 0, b + c <= 1");
  if (n < 0) throw ModelError("generation n must be >= 0");
  const double mu = b / ((1.0 - c) * (1.0 - c));
  if (!(mu < 1.0)) throw OutOfScopeError("MG offspring mean >= 1: closed-form tail needs a subcritical law");
  const double u = (1.0 - b - c) / (c * (1.0 - c));
  const double mun = power(mu, n);
  return (u - 1.0) / (u - mun) * mun;
}

MgExampleReport mg_example_report(double b_f, double c_f, double b_m, double c_m, Count n_max) {
  // Validate both laws through the offspring module.
  (void)OffspringLaw::independent_mg({b_f, c_f}, {b_m, c_m});
  if (n_max < 0) throw ModelError("n_max must be >= 0");
  MgExampleReport r;
  r.b_s = b_f * b_m / (1.0 - c_m);
  r.mu_f = b_f / ((1.0 - c_f) * (1.0 - c_f));
  r.mu_s = r.b_s / ((1.0 - c_f) * (1.0 - c_f));
  if (!(r.mu_f < 1.0)) throw OutOfScopeError("mu_f >= 1: the example's sandwich needs a subcritical female law");
  r.u_f = (1.0 - b_f - c_f) / (c_f * (1.0 - c_f));
  r.u_s = (1.0 - r.b_s - c_f) / (c_f * (1.0 - c_f));
  for (Count n = 0; n <= n_max; ++n) r.rows.push_back({n, mg_tail(r.b_s, c_f, n), mg_tail(b_f, c_f, n)});
  r.mean_lower = (1.0 - 1.0 / r.u_s) / (1.0 - r.mu_s);
  r.mean_upper = 1.0 / (1.0 - r.mu_f);
  return r;
}

}  // namespace twosex
