#include "twosex/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "twosex/error.hpp"

namespace twosex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double binomial_pmf(Count n, Count k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 1000) {
    double coef = 1.0;
    for (Count j = 1; j <= k; ++j) coef = coef * static_cast<double>(n - k + j) / static_cast<double>(j);
    return coef * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
  }
  const double log_coef = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0);
  return std::exp(log_coef + static_cast<double>(k) * std::log(p) +
                  static_cast<double>(n - k) * std::log1p(-p));
}

void validate_mg(const ModifiedGeometric& g, const char* which) {
  if (!(g.b > 0.0) || !(g.c > 0.0) || !(g.b + g.c <= 1.0)) {
    throw ModelError(std::string("modified geometric law for ") + which +
                     " needs b > 0, c > 0 and b + c <= 1");
  }
}

std::vector<double> mg_marginal(const ModifiedGeometric& g, const SupportOptions& options) {
  const Count cap = g.support_cap(0.5 * options.tail_tolerance);
  if (cap > options.max_support) {
    throw TruncationError("modified geometric tail needs support cap " + std::to_string(cap) +
                              " (allowed " + std::to_string(options.max_support) + ")",
                          cap, options.max_support);
  }
  std::vector<double> out(static_cast<std::size_t>(cap + 1));
  for (Count k = 0; k <= cap; ++k) out[static_cast<std::size_t>(k)] = g.pmf(k);
  return out;
}

std::size_t invert(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(idx, cumulative.size() - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// ModifiedGeometric

double ModifiedGeometric::pmf(Count k) const {
  if (k < 0) return 0.0;
  if (k == 0) return zero_mass();
  return b * std::pow(c, static_cast<double>(k - 1));
}

double ModifiedGeometric::variance() const {
  // E[xi(xi-1)] = 2 b c / (1-c)^3.
  const double m = mean();
  const double factorial2 = 2.0 * b * c / ((1.0 - c) * (1.0 - c) * (1.0 - c));
  return factorial2 + m - m * m;
}

double ModifiedGeometric::tail(Count k) const {
  if (k < 0) return 1.0;
  return b * std::pow(c, static_cast<double>(k)) / (1.0 - c);
}

Count ModifiedGeometric::support_cap(double tolerance) const {
  if (tail(0) < tolerance) return 0;
  auto guess = static_cast<Count>(std::ceil(std::log(tolerance * (1.0 - c) / b) / std::log(c)));
  guess = std::max<Count>(guess, 0);
  while (guess > 0 && tail(guess - 1) < tolerance) --guess;
  while (!(tail(guess) < tolerance)) ++guess;
  return guess;
}

Count ModifiedGeometric::sample(RandomStream& rng) const {
  if (rng.uniform() < zero_mass()) return 0;
  // Given xi >= 1, P(xi > j) = c^j.
  const double v = rng.uniform_open_zero();
  return 1 + static_cast<Count>(std::floor(std::log(v) / std::log(c)));
}

// ---------------------------------------------------------------------------
// OffspringLaw

OffspringLaw OffspringLaw::independent_mg(ModifiedGeometric female, ModifiedGeometric male) {
  validate_mg(female, "females");
  validate_mg(male, "males");
  return OffspringLaw(IndependentMg{female, male});
}

OffspringLaw OffspringLaw::sex_multinomial(Count litter, double alpha) {
  if (litter < 1) throw ModelError("sex-multinomial law needs litter >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ModelError("sex-multinomial law needs 0 < alpha < 1");
  OffspringLaw law(SexMultinomial{litter, alpha});
  double acc = 0.0;
  law.cumulative_.reserve(static_cast<std::size_t>(litter + 1));
  for (Count k = 0; k <= litter; ++k) {
    acc += binomial_pmf(litter, k, alpha);
    law.cumulative_.push_back(acc);
  }
  return law;
}

OffspringLaw OffspringLaw::tabulated(std::vector<WeightedOutcome> outcomes) {
  if (outcomes.empty()) throw ModelError("tabulated law needs at least one outcome");
  std::map<std::pair<Count, Count>, double> merged;
  double total = 0.0;
  for (const auto& o : outcomes) {
    if (o.outcome.females < 0 || o.outcome.males < 0) throw ModelError("tabulated outcome counts must be >= 0");
    if (!std::isfinite(o.probability) || o.probability < 0.0) {
      throw ModelError("tabulated probabilities must be finite and >= 0");
    }
    merged[{o.outcome.females, o.outcome.males}] += o.probability;
    total += o.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ModelError("tabulated probabilities sum to " + std::to_string(total) + ", not 1 within 1e-9");
  }
  Tabulated table;
  for (const auto& [fm, p] : merged) {
    if (p > 0.0) table.outcomes.push_back({{fm.first, fm.second}, p / total});
  }
  OffspringLaw law(std::move(table));
  law.renormalized_ = total != 1.0;
  double acc = 0.0;
  for (const auto& o : std::get<Tabulated>(law.law_).outcomes) {
    acc += o.probability;
    law.cumulative_.push_back(acc);
  }
  return law;
}

double OffspringLaw::pmf(Count females, Count males) const {
  if (females < 0 || males < 0) return 0.0;
  return std::visit(Overloaded{
                        [&](const IndependentMg& g) { return g.female.pmf(females) * g.male.pmf(males); },
                        [&](const SexMultinomial& s) {
                          return females + males == s.litter ? binomial_pmf(s.litter, females, s.alpha) : 0.0;
                        },
                        [&](const Tabulated& t) {
                          for (const auto& o : t.outcomes)
                            if (o.outcome == FemaleMale{females, males}) return o.probability;
                          return 0.0;
                        },
                    },
                    law_);
}

FemaleMale OffspringLaw::sample(RandomStream& rng) const {
  return std::visit(Overloaded{
                        [&](const IndependentMg& g) {
                          const Count f = g.female.sample(rng);
                          return FemaleMale{f, g.male.sample(rng)};
                        },
                        [&](const SexMultinomial& s) {
                          const auto f = static_cast<Count>(invert(cumulative_, rng.uniform()));
                          return FemaleMale{f, s.litter - f};
                        },
                        [&](const Tabulated& t) { return t.outcomes[invert(cumulative_, rng.uniform())].outcome; },
                    },
                    law_);
}

OffspringMoments OffspringLaw::moments() const {
  return std::visit(Overloaded{
                        [](const IndependentMg& g) {
                          return OffspringMoments{g.female.mean(), g.male.mean(), g.female.variance(),
                                                  g.male.variance(), g.female.zero_mass()};
                        },
                        [](const SexMultinomial& s) {
                          const auto l = static_cast<double>(s.litter);
                          const double var = l * s.alpha * (1.0 - s.alpha);
                          return OffspringMoments{l * s.alpha, l * (1.0 - s.alpha), var, var,
                                                  std::pow(1.0 - s.alpha, l)};
                        },
                        [](const Tabulated& t) {
                          OffspringMoments m;
                          double ff = 0.0, mm = 0.0;
                          for (const auto& o : t.outcomes) {
                            const auto f = static_cast<double>(o.outcome.females);
                            const auto y = static_cast<double>(o.outcome.males);
                            m.mu_f += o.probability * f;
                            m.mu_m += o.probability * y;
                            ff += o.probability * f * f;
                            mm += o.probability * y * y;
                            if (o.outcome.females == 0) m.p_f0 += o.probability;
                          }
                          m.var_f = std::max(0.0, ff - m.mu_f * m.mu_f);
                          m.var_m = std::max(0.0, mm - m.mu_m * m.mu_m);
                          return m;
                        },
                    },
                    law_);
}

double OffspringLaw::female_pgf(double x) const {
  return std::visit(Overloaded{
                        [&](const IndependentMg& g) { return g.female.pgf(x); },
                        [&](const SexMultinomial& s) {
                          return std::pow(s.alpha * x + 1.0 - s.alpha, static_cast<double>(s.litter));
                        },
                        [&](const Tabulated& t) {
                          double acc = 0.0;
                          for (const auto& o : t.outcomes)
                            acc += o.probability * std::pow(x, static_cast<double>(o.outcome.females));
                          return acc;
                        },
                    },
                    law_);
}

std::vector<double> OffspringLaw::female_marginal(const SupportOptions& options) const {
  return std::visit(Overloaded{
                        [&](const IndependentMg& g) { return mg_marginal(g.female, options); },
                        [&](const SexMultinomial& s) {
                          std::vector<double> out(static_cast<std::size_t>(s.litter + 1));
                          for (Count k = 0; k <= s.litter; ++k)
                            out[static_cast<std::size_t>(k)] = binomial_pmf(s.litter, k, s.alpha);
                          return out;
                        },
                        [&](const Tabulated& t) {
                          std::vector<double> out;
                          for (const auto& o : t.outcomes) {
                            const auto f = static_cast<std::size_t>(o.outcome.females);
                            if (out.size() <= f) out.resize(f + 1, 0.0);
                            out[f] += o.probability;
                          }
                          return out;
                        },
                    },
                    law_);
}

std::vector<double> OffspringLaw::male_marginal(const SupportOptions& options) const {
  return std::visit(Overloaded{
                        [&](const IndependentMg& g) { return mg_marginal(g.male, options); },
                        [&](const SexMultinomial& s) {
                          std::vector<double> out(static_cast<std::size_t>(s.litter + 1));
                          for (Count k = 0; k <= s.litter; ++k)
                            out[static_cast<std::size_t>(k)] = binomial_pmf(s.litter, s.litter - k, s.alpha);
                          return out;
                        },
                        [&](const Tabulated& t) {
                          std::vector<double> out;
                          for (const auto& o : t.outcomes) {
                            const auto m = static_cast<std::size_t>(o.outcome.males);
                            if (out.size() <= m) out.resize(m + 1, 0.0);
                            out[m] += o.probability;
                          }
                          return out;
                        },
                    },
                    law_);
}

JointPmf OffspringLaw::enumerate(const SupportOptions& options) const {
  JointPmf joint;
  auto resize = [&joint](Count mf, Count mm) {
    joint.max_females = mf;
    joint.max_males = mm;
    joint.mass.assign(static_cast<std::size_t>((mf + 1) * (mm + 1)), 0.0);
  };
  auto cell = [&joint](Count f, Count m) -> double& {
    return joint.mass[static_cast<std::size_t>(f * (joint.max_males + 1) + m)];
  };

  std::visit(Overloaded{
                 [&](const IndependentMg& g) {
                   const auto pf = mg_marginal(g.female, options);
                   const auto pm = mg_marginal(g.male, options);
                   resize(static_cast<Count>(pf.size()) - 1, static_cast<Count>(pm.size()) - 1);
                   for (std::size_t f = 0; f < pf.size(); ++f)
                     for (std::size_t m = 0; m < pm.size(); ++m)
                       cell(static_cast<Count>(f), static_cast<Count>(m)) = pf[f] * pm[m];
                   const double tf = g.female.tail(joint.max_females);
                   const double tm = g.male.tail(joint.max_males);
                   joint.dropped_mass = tf + tm - tf * tm;
                 },
                 [&](const SexMultinomial& s) {
                   resize(s.litter, s.litter);
                   for (Count k = 0; k <= s.litter; ++k) cell(k, s.litter - k) = binomial_pmf(s.litter, k, s.alpha);
                 },
                 [&](const Tabulated& t) {
                   Count mf = 0, mm = 0;
                   for (const auto& o : t.outcomes) {
                     mf = std::max(mf, o.outcome.females);
                     mm = std::max(mm, o.outcome.males);
                   }
                   resize(mf, mm);
                   for (const auto& o : t.outcomes) cell(o.outcome.females, o.outcome.males) += o.probability;
                 },
             },
             law_);
  return joint;
}

// ---------------------------------------------------------------------------
// MatedSiblingLaw

double MatedSiblingLaw::pgf(double x) const {
  double acc = 0.0;
  for (auto it = pmf.rbegin(); it != pmf.rend(); ++it) acc = acc * x + *it;
  return acc;
}

MatedSiblingLaw mated_sibling_law(const OffspringLaw& law, const MatingRule& rule, const SupportOptions& options) {
  MatedSiblingLaw out;
  auto add = [&](Count f, Count m, double p) {
    if (p == 0.0) return;
    const Count h = rule(f, m);
    if (h < 0) throw ModelError("mating rule returned a negative number of mating units");
    const auto idx = static_cast<std::size_t>(h);
    if (out.pmf.size() <= idx) out.pmf.resize(idx + 1, 0.0);
    out.pmf[idx] += p;
  };

  if (law.independent_sexes()) {
    // Separable: never materialize the full grid.
    const auto pf = law.female_marginal(options);
    const auto pm = law.male_marginal(options);
    for (std::size_t f = 0; f < pf.size(); ++f)
      for (std::size_t m = 0; m < pm.size(); ++m) add(static_cast<Count>(f), static_cast<Count>(m), pf[f] * pm[m]);
    const auto& g = std::get<IndependentMg>(law.variant());
    const double tf = g.female.tail(static_cast<Count>(pf.size()) - 1);
    const double tm = g.male.tail(static_cast<Count>(pm.size()) - 1);
    out.dropped_mass = tf + tm - tf * tm;
  } else {
    const JointPmf joint = law.enumerate(options);
    for (Count f = 0; f <= joint.max_females; ++f)
      for (Count m = 0; m <= joint.max_males; ++m) add(f, m, joint.at(f, m));
    out.dropped_mass = joint.dropped_mass;
  }
  double second = 0.0;
  for (std::size_t k = 0; k < out.pmf.size(); ++k) {
    const auto h = static_cast<double>(k);
    out.mu_s += out.pmf[k] * h;
    second += out.pmf[k] * h * h;
  }
  out.sigma2_s = std::max(0.0, second - out.mu_s * out.mu_s);
  return out;
}

}  // namespace twosex
