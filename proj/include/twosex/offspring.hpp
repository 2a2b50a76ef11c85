#pragma once

#include <span>
#include <variant>
#include <vector>

#include "twosex/mating.hpp"
#include "twosex/random.hpp"
#include "twosex/types.hpp"

namespace twosex {

/// Enumeration limits for laws with unbounded support.
struct SupportOptions {
  /// A marginal is cut at the smallest K whose tail mass is below half of this,
  /// so the joint mass dropped stays below it.
  double tail_tolerance = 1e-12;
  /// Largest support index an enumeration may reach before giving up.
  Count max_support = 8192;
};

/// MG(b, c): P(k) = b c^(k-1) for k >= 1, remaining mass at 0.
struct ModifiedGeometric {
  double b = 0.0;
  double c = 0.0;

  double pmf(Count k) const;
  double zero_mass() const { return 1.0 - b / (1.0 - c); }
  double mean() const { return b / ((1.0 - c) * (1.0 - c)); }
  double variance() const;
  double pgf(double x) const { return zero_mass() + b * x / (1.0 - c * x); }
  /// P(xi > k).
  double tail(Count k) const;
  /// Smallest K with tail(K) < tolerance.
  Count support_cap(double tolerance) const;
  Count sample(RandomStream& rng) const;
};

struct IndependentMg {
  ModifiedGeometric female;
  ModifiedGeometric male;
};

/// Litter of fixed size L; each offspring is female with probability alpha.
struct SexMultinomial {
  Count litter = 3;
  double alpha = 0.5;
};

struct WeightedOutcome {
  FemaleMale outcome;
  double probability = 0.0;
};

/// Finite table of (females, males) outcomes.
struct Tabulated {
  std::vector<WeightedOutcome> outcomes;
};

struct OffspringMoments {
  double mu_f = 0.0;
  double mu_m = 0.0;
  double var_f = 0.0;
  double var_m = 0.0;
  double p_f0 = 0.0;
};

/// Dense joint pmf on {0..max_females} x {0..max_males}, row-major by females.
struct JointPmf {
  Count max_females = 0;
  Count max_males = 0;
  std::vector<double> mass;
  /// Probability outside the grid (truncated tails).
  double dropped_mass = 0.0;

  double at(Count f, Count m) const {
    return mass[static_cast<std::size_t>(f * (max_males + 1) + m)];
  }
};

/// Joint law of (females, males) produced by one mating unit. Immutable.
class OffspringLaw {
 public:
  using Variant = std::variant<IndependentMg, SexMultinomial, Tabulated>;

  static OffspringLaw independent_mg(ModifiedGeometric female, ModifiedGeometric male);
  static OffspringLaw sex_multinomial(Count litter, double alpha);
  /// Probabilities must sum to 1 within 1e-9; they are then renormalized and
  /// duplicate outcomes merged.
  static OffspringLaw tabulated(std::vector<WeightedOutcome> outcomes);

  const Variant& variant() const noexcept { return law_; }
  /// True when a tabulated law's input probabilities did not sum exactly to 1.
  bool renormalized() const noexcept { return renormalized_; }
  /// Females and males are independent (enables separable enumeration).
  bool independent_sexes() const noexcept { return std::holds_alternative<IndependentMg>(law_); }

  double pmf(Count females, Count males) const;
  FemaleMale sample(RandomStream& rng) const;
  OffspringMoments moments() const;
  /// E[x^f].
  double female_pgf(double x) const;

  /// Marginal pmfs, truncated per `options` for unbounded supports.
  std::vector<double> female_marginal(const SupportOptions& options = {}) const;
  std::vector<double> male_marginal(const SupportOptions& options = {}) const;

  JointPmf enumerate(const SupportOptions& options = {}) const;

 private:
  explicit OffspringLaw(Variant law) : law_(std::move(law)) {}

  Variant law_;
  bool renormalized_ = false;
  // Inversion tables: SexMultinomial over females, Tabulated over outcomes.
  std::vector<double> cumulative_;
};

/// Law of h = zeta(f, m): the offspring of the siblings-mating-only process.
struct MatedSiblingLaw {
  std::vector<double> pmf;
  double mu_s = 0.0;
  double sigma2_s = 0.0;
  double dropped_mass = 0.0;

  double pgf(double x) const;
};

MatedSiblingLaw mated_sibling_law(const OffspringLaw& law, const MatingRule& rule,
                                  const SupportOptions& options = {});

}  // namespace twosex
