#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "twosex/error.hpp"
#include "twosex/engine.hpp"

using namespace twosex;

namespace {

ProcessSpec trinomial(Count i) { return ProcessSpec(OffspringLaw::sex_multinomial(3, 0.25), MatingRule::promiscuous(), i); }

OffspringLaw point(Count f, Count m) { return OffspringLaw::tabulated({{{f, m}, 1.0}}); }

}  // namespace

TEST_CASE("process spec validation") {
  CHECK_THROWS_AS(ProcessSpec(point(1, 1), MatingRule::identity(), 0), ModelError);
}

TEST_CASE("step") {
  RandomStream rng(1);
  CHECK(step(trinomial(1), 0, rng) == 0);
  CHECK(step(ProcessSpec(point(2, 0), MatingRule::identity(), 1), 1, rng) == 2);
  CHECK(step(ProcessSpec(point(2, 0), MatingRule::promiscuous(), 1), 1, rng) == 0);
}

TEST_CASE("generation evaluation on shared offspring") {
  const std::vector<FemaleMale> pairs{{2, 0}, {1, 3}};
  const auto prom = MatingRule::promiscuous();
  CHECK(evaluate_generation(prom, pairs, Process::Fgfp) == 3);
  CHECK(evaluate_generation(prom, pairs, Process::Bgwp) == 3);
  CHECK(evaluate_generation(prom, pairs, Process::Smop) == 1);
  const auto id = MatingRule::identity();
  for (auto p : {Process::Fgfp, Process::Bgwp, Process::Smop}) CHECK(evaluate_generation(id, pairs, p) == 3);
  for (auto p : {Process::Fgfp, Process::Bgwp, Process::Smop}) CHECK(evaluate_generation(prom, {}, p) == 0);
  RandomStream rng(3);
  CHECK(associated_step(trinomial(1), 0, rng, Process::Smop) == 0);
}

TEST_CASE("coupled trajectories are ordered SMOP <= BGWP <= FGFP") {
  const auto spec = ProcessSpec(OffspringLaw::sex_multinomial(3, 0.3), MatingRule::promiscuous(), 6);
  Count violations = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    RandomStream rng = RandomStream::derive(11, k);
    for (const auto& g : simulate_coupled(spec, 25, rng))
      if (!(g.smop <= g.bgwp && g.bgwp <= g.fgfp)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("identity mating makes the coupled paths coincide") {
  const auto spec = ProcessSpec(OffspringLaw::sex_multinomial(3, 0.3), MatingRule::identity(), 4);
  for (std::uint64_t k = 0; k < 200; ++k) {
    RandomStream rng = RandomStream::derive(5, k);
    for (const auto& g : simulate_coupled(spec, 15, rng)) {
      CHECK(g.smop == g.bgwp);
      CHECK(g.bgwp == g.fgfp);
    }
  }
}

TEST_CASE("extinction time sampling") {
  RandomStream rng(0);
  const auto dies = sample_extinction_time(ProcessSpec(point(0, 0), MatingRule::promiscuous(), 1), 10, rng);
  CHECK(dies.extinct());
  CHECK(dies.generation == 1);
  const auto lives = sample_extinction_time(ProcessSpec(point(1, 0), MatingRule::identity(), 1), 10, rng);
  CHECK_FALSE(lives.extinct());
  CHECK(lives.generation == 10);
  CHECK_THROWS_AS(sample_extinction_time(trinomial(1), 0, rng), ModelError);
}

TEST_CASE("empirical cdf basics and determinism") {
  const auto dead = ProcessSpec(point(0, 0), MatingRule::promiscuous(), 3);
  const auto e = empirical_cdf(dead, 3, 50, 9);
  CHECK(e.cdf[0] == 0.0);
  CHECK(e.cdf[1] == 1.0);
  CHECK(e.mean_time == 1.0);

  const auto zero = empirical_cdf(trinomial(2), 0, 100, 1);
  REQUIRE(zero.cdf.size() == 1);
  CHECK(zero.cdf[0] == 0.0);

  const auto a = empirical_cdf(trinomial(3), 8, 2000, 77);
  const auto b = empirical_cdf(trinomial(3), 8, 2000, 77);
  CHECK(a.cdf == b.cdf);
  CHECK(a.mean_time == b.mean_time);
  SimulationOptions threaded;
  threaded.threads = 4;
  const auto c = empirical_cdf(trinomial(3), 8, 2000, 77, threaded);
  CHECK(a.cdf == c.cdf);
  CHECK(a.mean_time == c.mean_time);
  for (std::size_t n = 1; n < a.cdf.size(); ++n) CHECK(a.cdf[n] >= a.cdf[n - 1]);
  CHECK(a.rng_scheme == std::string(kRngScheme));
}

TEST_CASE("empirical cdf sits between the asexual envelopes") {
  // Envelope values from pgf iteration: i=2, n=5 -> [0.759383, 0.801183];
  // i=5, n=7 -> [0.701688, 0.773598].
  const auto two = empirical_cdf(trinomial(2), 5, 100000, 2024);
  CHECK(two.cdf[5] >= 0.759383 - 3 * two.std_error[5]);
  CHECK(two.cdf[5] <= 0.801183 + 3 * two.std_error[5]);
  const auto five = empirical_cdf(trinomial(5), 7, 100000, 2025);
  CHECK(five.cdf[7] >= 0.701688 - 3 * five.std_error[7]);
  CHECK(five.cdf[7] <= 0.773598 + 3 * five.std_error[7]);
}

TEST_CASE("population means respect E_i[Z_k] <= i r^k") {
  const auto means = empirical_population_means(trinomial(4), 8, 100000, 31);
  for (std::size_t k = 0; k < means.mean.size(); ++k) {
    CAPTURE(k);
    CHECK(means.mean[k] <= 4.0 * std::pow(0.75, static_cast<double>(k)) + 3 * means.std_error[k]);
  }
}

TEST_CASE("growth rate") {
  const auto g = growth_rate(trinomial(1));
  CHECK(g.value == doctest::Approx(0.75));
  CHECK(g.provenance == GrowthRate::Provenance::ClosedForm);

  // mu_f = 0.8, mu_m = 0.5 under polygamous k = 1 -> r = 0.5.
  const auto law = OffspringLaw::tabulated({{{0, 0}, 0.3}, {{1, 1}, 0.4}, {{2, 0}, 0.2}, {{0, 1}, 0.1}});
  REQUIRE(law.moments().mu_f == doctest::Approx(0.8));
  REQUIRE(law.moments().mu_m == doctest::Approx(0.5));
  CHECK(growth_rate(ProcessSpec(law, MatingRule::polygamous(1), 1)).value == doctest::Approx(0.5));
  CHECK(growth_rate(ProcessSpec(law, MatingRule::polygamous(2), 1)).value == doctest::Approx(0.8));
  CHECK(growth_rate(ProcessSpec(law, MatingRule::identity(), 1)).value == doctest::Approx(0.8));

  const auto custom = MatingRule::custom("min(x,y)", [](Count x, Count y) { return std::min(x, y); });
  const auto env = growth_rate(ProcessSpec(law, custom, 1));
  CHECK(env.provenance == GrowthRate::Provenance::UpperEnvelope);
  CHECK(env.value == doctest::Approx(0.8));

  const auto est = estimate_growth_rate(trinomial(1), 6, 20000, 4);
  CHECK(est.provenance == GrowthRate::Provenance::Estimated);
  CHECK(est.value <= 0.75 + 4 * est.std_error);
}

TEST_CASE("default horizon") {
  const Count h = default_horizon(10, 0.75);
  CHECK(10 * std::pow(0.75, h) < 1e-6);
  CHECK(10 * std::pow(0.75, h - 1) >= 1e-6);
  CHECK_THROWS_AS(default_horizon(1, 1.0), ModelError);
}

TEST_CASE("exact transition row for the trinomial example") {
  const auto row = transition_row_exact(trinomial(1), 1, 20);
  CHECK(row.probabilities[0] == doctest::Approx(0.4375).epsilon(1e-14));
  CHECK(row.probabilities[1] == doctest::Approx(0.421875).epsilon(1e-14));
  CHECK(row.probabilities[2] == doctest::Approx(0.140625).epsilon(1e-14));
  CHECK(row.overflow == 0.0);
  CHECK(std::accumulate(row.probabilities.begin() + 3, row.probabilities.end(), 0.0) == 0.0);

  const auto immortal = transition_row_exact(ProcessSpec(point(1, 0), MatingRule::identity(), 1), 1, 3);
  CHECK(immortal.probabilities[1] == 1.0);
  CHECK_THROWS_AS(transition_row_exact(trinomial(1), 5, 4), ModelError);
}

TEST_CASE("exact rows match brute-force enumeration of offspring tuples") {
  const std::vector<oracle::Outcome> law{{0, 3, 0.421875}, {1, 2, 0.421875}, {2, 1, 0.140625}, {3, 0, 0.015625}};
  const auto tri = trinomial(1);
  for (const auto& rule : {MatingRule::promiscuous(), MatingRule::polygamous(1), MatingRule::identity()}) {
    const ProcessSpec spec(tri.law, rule, 1);
    const auto matrix = transition_matrix_exact(spec, 7);
    for (Count i = 1; i <= 6; ++i) {
      CAPTURE(rule.name());
      CAPTURE(i);
      double overflow = 0;
      const auto expected = oracle::brute_force_row(law, [&](Count x, Count y) { return rule(x, y); }, i, 7, overflow);
      for (Count j = 0; j <= 7; ++j) CHECK(std::abs(matrix.p(i, j) - expected[static_cast<std::size_t>(j)]) < 1e-14);
      CHECK(std::abs(matrix.overflow(i) - overflow) < 1e-14);
      const auto single = transition_row_exact(spec, i, 7);
      for (Count j = 0; j <= 7; ++j) CHECK(single.probabilities[static_cast<std::size_t>(j)] == matrix.p(i, j));
    }
  }
}

TEST_CASE("exact rows for a correlated tabulated law match brute force") {
  const std::vector<oracle::Outcome> law{{0, 0, 0.2}, {1, 0, 0.25}, {0, 2, 0.15}, {2, 1, 0.3}, {1, 3, 0.1}};
  std::vector<WeightedOutcome> table;
  for (const auto& o : law) table.push_back({{o.f, o.m}, o.p});
  const ProcessSpec spec(OffspringLaw::tabulated(table), MatingRule::polygamous(2), 1);
  const auto matrix = transition_matrix_exact(spec, 6);
  for (Count i = 1; i <= 5; ++i) {
    double overflow = 0;
    const auto expected = oracle::brute_force_row(law, [&](Count x, Count y) { return spec.rule(x, y); }, i, 6, overflow);
    for (Count j = 0; j <= 6; ++j) CHECK(std::abs(matrix.p(i, j) - expected[static_cast<std::size_t>(j)]) < 1e-14);
    CHECK(std::abs(matrix.overflow(i) - overflow) < 1e-14);
  }
}

TEST_CASE("exact row 1 equals the mated-sibling law; rows normalize") {
  for (const auto& spec : {trinomial(1), ProcessSpec(OffspringLaw::independent_mg({0.25, 0.25}, {0.3, 0.4}),
                                                     MatingRule::promiscuous(), 1)}) {
    const auto matrix = transition_matrix_exact(spec, 12);
    const auto h = mated_sibling_law(spec.law, spec.rule);
    for (Count j = 0; j <= 12; ++j) {
      const double hj = static_cast<std::size_t>(j) < h.pmf.size() ? h.pmf[static_cast<std::size_t>(j)] : 0.0;
      CHECK(std::abs(matrix.p(1, j) - hj) < 1e-12);
    }
    for (Count i = 1; i <= 12; ++i) {
      const auto row = matrix.row(i);
      const double total = std::accumulate(row.begin(), row.end(), 0.0) + matrix.overflow(i);
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("Monte Carlo rows") {
  RandomStream rng(5);
  const auto row = transition_row_mc(trinomial(1), 1, 20, 10000, rng);
  const double se = std::sqrt(0.4375 * 0.5625 / 10000);
  CHECK(std::abs(row.probabilities[0] - 0.4375) < 3 * se);
  CHECK(std::accumulate(row.probabilities.begin(), row.probabilities.end(), 0.0) + row.overflow ==
        doctest::Approx(1.0).epsilon(1e-15));

  const auto dead = transition_matrix_mc(ProcessSpec(point(0, 0), MatingRule::promiscuous(), 1), 5, 100, 3);
  for (Count i = 1; i <= 5; ++i) CHECK(dead.p(i, 0) == 1.0);
  CHECK(dead.method() == TransitionMethod::MonteCarlo);
  CHECK(dead.reps() == 100);
}

TEST_CASE("Monte Carlo rows converge to exact rows") {
  const auto spec = trinomial(1);
  const auto exact = transition_matrix_exact(spec, 20);
  const Count reps = 1000000;
  for (Count i : {1, 4}) {
    RandomStream rng = RandomStream::derive(8, static_cast<std::uint64_t>(i));
    const auto row = transition_row_mc(spec, i, 20, reps, rng);
    for (Count j = 0; j <= 20; ++j) {
      const double p = exact.p(i, j);
      const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(reps));
      CHECK(std::abs(row.probabilities[static_cast<std::size_t>(j)] - p) < 5 * se + 1e-12);
    }
  }
}

TEST_CASE("matrix validation") {
  TransitionRow bad;
  bad.probabilities = {0.5, 0.4};
  CHECK_THROWS_AS(TruncatedTransitionMatrix(1, {bad}, TransitionMethod::UserSupplied), ModelError);
  bad.overflow = 0.1;
  const TruncatedTransitionMatrix ok(1, {bad}, TransitionMethod::UserSupplied);
  CHECK(ok.overflow(1) == 0.1);
  CHECK_THROWS_AS((void)ok.p(2, 0), ModelError);
}
