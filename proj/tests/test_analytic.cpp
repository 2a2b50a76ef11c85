#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twosex/analytic.hpp"
#include "twosex/error.hpp"

using namespace twosex;

namespace {

ProcessSpec trinomial(Count i) { return ProcessSpec(OffspringLaw::sex_multinomial(3, 0.25), MatingRule::promiscuous(), i); }

double asexual_pgf(double x) { return 0.6 + 0.3 * x + 0.1 * x * x; }

}  // namespace

TEST_CASE("Agresti factors at worked values") {
  CHECK(agresti_upper_factor(0.5, 0.6, 1, 1) == doctest::Approx(0.8333333333333334));
  CHECK(agresti_upper_factor(0.5, 0.6, 3, 1) == 1.0);
  CHECK(agresti_upper_factor(0.5, 0.6, 1, 0) == 1.0);
  CHECK(agresti_lower_factor(0.5, 1.0, 1, 1) == doctest::Approx(0.4));
  CHECK(agresti_lower_factor(0.5, 1.0, 1, 0) == doctest::Approx(1.0));
  // c1 falls back to 2 when mu + p0 <= 1.
  CHECK(agresti_upper_factor(0.5, 0.3, 1, 1) == doctest::Approx(1.0 - 0.5 / (2 * 0.5 + 0.5)));
}

TEST_CASE("Agresti factor domain errors") {
  CHECK_THROWS_AS(agresti_upper_factor(1.0, 0.5, 1, 1), ModelError);
  CHECK_THROWS_AS(agresti_upper_factor(0.0, 0.5, 1, 1), ModelError);
  CHECK_THROWS_AS(agresti_upper_factor(std::nan(""), 0.5, 1, 1), ModelError);
  CHECK_THROWS_AS(agresti_lower_factor(0.5, 0.0, 1, 1), ModelError);
  CHECK_THROWS_AS(agresti_lower_factor(0.5, 1.0, 0, 1), ModelError);
}

TEST_CASE("asexual tail bounds and clamping") {
  const auto b = asexual_tail_bounds(0.5, 0.6, 1.0, 1, 1);
  CHECK(b.lower == doctest::Approx(0.2));
  CHECK(b.upper == doctest::Approx(0.4166666666666667));
  CHECK_FALSE(b.lower_clamped);
  CHECK(b.gap == doctest::Approx(b.raw_upper - b.raw_lower));

  // Large i drives the raw lower bound negative and the raw upper bound above 1.
  const auto wide = asexual_tail_bounds(0.5, 0.6, 0.45, 10, 1);
  CHECK(wide.raw_lower < 0.0);
  CHECK(wide.lower == 0.0);
  CHECK(wide.lower_clamped);
  CHECK(wide.raw_upper > 1.0);
  CHECK(wide.upper == 1.0);
  CHECK(wide.upper_clamped);
}

TEST_CASE("asexual bounds contain exact tails from pgf iteration") {
  for (Count i : {1, 2, 3, 5, 8}) {
    for (Count n = 0; n <= 25; ++n) {
      const double exact = 1.0 - pgf_extinction_cdf(asexual_pgf, i, n);
      const auto b = asexual_tail_bounds(0.5, 0.6, 0.45, i, n);
      CAPTURE(i);
      CAPTURE(n);
      CHECK(b.lower <= exact + 1e-15);
      CHECK(exact <= b.upper + 1e-15);
    }
  }
}

TEST_CASE("pgf extinction cdf") {
  CHECK(pgf_extinction_cdf(asexual_pgf, 1, 0) == 0.0);
  CHECK(pgf_extinction_cdf(asexual_pgf, 1, 1) == doctest::Approx(0.6));
  CHECK(pgf_extinction_cdf(asexual_pgf, 2, 1) == doctest::Approx(0.36));
  CHECK(pgf_extinction_cdf(asexual_pgf, 1, 2) == doctest::Approx(asexual_pgf(0.6)));
  const auto g = [](double x) { return std::pow(0.25 * x + 0.75, 3); };
  // Values from exact rational iteration.
  CHECK(pgf_extinction_cdf(g, 2, 2) == doctest::Approx(0.391945).epsilon(1e-5));
  CHECK(pgf_extinction_cdf(g, 10, 10) == doctest::Approx(0.754713).epsilon(1e-5));
  CHECK_THROWS_AS(pgf_extinction_cdf(g, 0, 2), ModelError);
}

TEST_CASE("two-sex tail bounds") {
  const auto spec = trinomial(2);
  for (Count n : {1, 2, 5, 7, 10, 20}) {
    const auto b = bgwp_tail_bounds(spec, n);
    const double fgfp_tail = 1.0 - pgf_extinction_cdf([](double x) { return std::pow(0.25 * x + 0.75, 3); }, 2, n);
    CAPTURE(n);
    CHECK(b.lower <= b.upper);
    CHECK(fgfp_tail <= b.upper + 1e-15);
    // The gap shrinks at least as fast as the female envelope.
    CHECK(b.gap / std::pow(0.75, static_cast<double>(n)) <= 3.0);
  }
  CHECK(bgwp_tail_bounds(spec, 0).upper == 1.0);

  const auto dead = ProcessSpec(OffspringLaw::tabulated({{{0, 2}, 1.0}}), MatingRule::promiscuous(), 3);
  CHECK(bgwp_tail_bounds(dead, 0).lower == 1.0);
  CHECK(bgwp_tail_bounds(dead, 1).upper == 0.0);
  CHECK(bgwp_tail_bounds(dead, 1).lower == 0.0);

  const auto super = ProcessSpec(OffspringLaw::sex_multinomial(3, 0.4), MatingRule::promiscuous(), 2);
  CHECK_THROWS_AS(bgwp_tail_bounds(super, 3), OutOfScopeError);
  CHECK_THROWS_AS(bgwp_tail_bounds(spec, -1), ModelError);
}

TEST_CASE("mean extinction time bounds") {
  const auto a = mean_time_bounds_asexual(0.5, 1.0, 3);
  CHECK(a.raw_lower == doctest::Approx(-0.14976005540405476).epsilon(1e-12));
  CHECK(a.lower == 1.0);
  CHECK(a.lower_clamped);
  CHECK(a.upper == doctest::Approx(4.584962500721156).epsilon(1e-12));
  CHECK_THROWS_AS(mean_time_bounds_asexual(0.5, 1.0, 2), ModelError);

  const auto m = mean_time_bounds(trinomial(10));
  CHECK(m.r == doctest::Approx(0.75));
  CHECK(m.upper == doctest::Approx(13.003922779651095).epsilon(1e-12));
  CHECK(m.lower <= m.upper);
  CHECK_FALSE(m.envelope_based);
  CHECK(m.mu_s == doctest::Approx(0.703125));

  // For i = 3 the Markov route i/(1-r) = 12 is not the smaller one.
  const auto three = mean_time_bounds(trinomial(3));
  CHECK(three.upper == doctest::Approx(std::log(3.0) / std::abs(std::log(0.75)) + 1.25 / 0.25));

  CHECK_THROWS_AS(mean_time_bounds(trinomial(2)), ModelError);
  const auto super = ProcessSpec(OffspringLaw::sex_multinomial(3, 0.4), MatingRule::identity(), 3);
  CHECK_THROWS_AS(mean_time_bounds(super), OutOfScopeError);
}

TEST_CASE("MG closed-form tail") {
  CHECK(mg_tail(0.25, 0.25, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(mg_tail(0.25, 0.25, 0) == doctest::Approx(1.0));
  for (auto [b, c] : {std::pair{0.25, 0.25}, std::pair{0.1, 0.5}, std::pair{0.3, 0.2}}) {
    const ModifiedGeometric mg{b, c};
    const Count k_max = mg.support_cap(1e-18);
    for (Count n = 0; n <= 30; ++n) {
      CAPTURE(n);
      const double series = oracle::series_tail([&](Count k) { return mg.pmf(k); }, k_max, n);
      CHECK(std::abs(mg_tail(b, c, n) - series) < 1e-12);
    }
  }
  CHECK_THROWS_AS(mg_tail(0.5, 0.5, 1), OutOfScopeError);
  CHECK_THROWS_AS(mg_tail(0.0, 0.5, 1), ModelError);
  CHECK_THROWS_AS(mg_tail(0.6, 0.5, 1), ModelError);
}

TEST_CASE("MG example report") {
  const auto r = mg_example_report(0.25, 0.25, 0.25, 0.25, 10);
  CHECK(r.b_s == doctest::Approx(1.0 / 12.0));
  CHECK(r.mu_f == doctest::Approx(4.0 / 9.0));
  CHECK(r.mu_s == doctest::Approx(4.0 / 27.0));
  CHECK(r.u_f == doctest::Approx(8.0 / 3.0));
  CHECK(r.u_s == doctest::Approx(32.0 / 9.0));
  CHECK(r.mean_lower == doctest::Approx(0.84375));
  CHECK(r.mean_upper == doctest::Approx(1.8));
  REQUIRE(r.rows.size() == 11);
  for (const auto& row : r.rows) CHECK(row.lower <= row.upper);
  CHECK_THROWS_AS(mg_example_report(0.5, 0.3, 0.25, 0.25, 3), OutOfScopeError);
}
