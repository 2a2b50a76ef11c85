#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twosex/mating.hpp"
#include "twosex/offspring.hpp"
#include "twosex/random.hpp"
#include "twosex/types.hpp"

namespace twosex {

/// Complete two-sex process: offspring law, mating rule, initial mating units.
struct ProcessSpec {
  ProcessSpec(OffspringLaw law, MatingRule rule, Count initial);

  OffspringLaw law;
  MatingRule rule;
  Count initial;
};

/// The two-sex process and its two asexual envelopes.
enum class Process {
  Bgwp,  ///< zeta applied to generation totals
  Fgfp,  ///< females generate females: zeta ignored
  Smop,  ///< siblings mating only: zeta applied per mating unit
};

/// Next generation size of `which` given the offspring drawn by each of the
/// current mating units.
Count evaluate_generation(const MatingRule& rule, std::span<const FemaleMale> offspring, Process which);

/// One generation of the two-sex process from z mating units; 0 is absorbing.
Count step(const ProcessSpec& spec, Count z, RandomStream& rng);

/// One generation of the process named by `which` from z units.
Count associated_step(const ProcessSpec& spec, Count z, RandomStream& rng, Process which);

struct CoupledGeneration {
  Count smop = 0;
  Count bgwp = 0;
  Count fgfp = 0;
};

/// Runs all three processes from spec.initial on shared offspring draws: unit j
/// of every process in generation n uses the same (f, m) pair. Entry 0 is the
/// initial state.
std::vector<CoupledGeneration> simulate_coupled(const ProcessSpec& spec, Count generations, RandomStream& rng);

struct ExtinctionSample {
  enum class Outcome { Extinct, Censored };
  Outcome outcome = Outcome::Censored;
  /// Extinction generation (>= 1), or the horizon when censored.
  Count generation = 0;

  bool extinct() const noexcept { return outcome == Outcome::Extinct; }
};

/// Population beyond which a path is treated as surviving (censored).
inline constexpr Count kDefaultPopulationLimit = 10'000'000;

ExtinctionSample sample_extinction_time(const ProcessSpec& spec, Count horizon, RandomStream& rng,
                                        Count population_limit = kDefaultPopulationLimit);

/// Smallest n with i r^n < 1e-6. Requires 0 < r < 1.
Count default_horizon(Count initial, double r);

struct SimulationOptions {
  /// Simulation horizon; 0 picks max(n_max, default_horizon) when r < 1 is known.
  Count horizon = 0;
  Count population_limit = kDefaultPopulationLimit;
  unsigned threads = 1;
};

/// Monte Carlo estimate of P_i(T <= n) for n = 0..n_max, and of E_i[T].
struct EmpiricalCdf {
  Count initial = 0;
  Count reps = 0;
  Count horizon = 0;
  std::uint64_t seed = 0;
  std::string rng_scheme;
  std::vector<double> cdf;
  std::vector<double> std_error;
  Count censored = 0;
  /// Mean of T with censored paths counted at the horizon; a lower estimate
  /// whenever censored > 0.
  double mean_time = 0.0;
  double mean_std_error = 0.0;
};

/// Replicate k runs on RandomStream::derive(master_seed, k), so results do not
/// depend on the thread count.
EmpiricalCdf empirical_cdf(const ProcessSpec& spec, Count n_max, Count reps, std::uint64_t master_seed,
                           const SimulationOptions& options = {});

/// Monte Carlo E_i[Z_k] for k = 0..generations with standard errors.
struct PopulationMeans {
  std::vector<double> mean;
  std::vector<double> std_error;
};
PopulationMeans empirical_population_means(const ProcessSpec& spec, Count generations, Count reps,
                                           std::uint64_t master_seed);

struct GrowthRate {
  enum class Provenance { ClosedForm, UpperEnvelope, Estimated };
  double value = 0.0;
  Provenance provenance = Provenance::UpperEnvelope;
  Count i_max = 0;
  Count reps = 0;
  double std_error = 0.0;
};

std::string provenance_name(GrowthRate::Provenance p);

/// r = sup_i r_i. Closed form for built-in rules; mu_f envelope otherwise.
GrowthRate growth_rate(const ProcessSpec& spec);

/// Monte Carlo estimates of r_i = E[Z_1 | Z_0 = i] / i for i = 1..i_max.
/// Diagnostic only: the maximum over finitely many i need not bound sup r_i.
GrowthRate estimate_growth_rate(const ProcessSpec& spec, Count i_max, Count reps, std::uint64_t master_seed);

/// One row of the truncated one-step transition law from state i.
struct TransitionRow {
  std::vector<double> probabilities;  ///< P_ij, j = 0..cap
  double overflow = 0.0;              ///< P_i(Z_1 > cap)
  double dropped_mass = 0.0;          ///< lost to support truncation (exact rows)
};

enum class TransitionMethod { Exact, MonteCarlo, UserSupplied };

std::string method_name(TransitionMethod m);

/// Rows for states 1..cap over targets 0..cap, plus per-row overflow mass.
class TruncatedTransitionMatrix {
 public:
  /// Validates entries >= 0 and row + overflow + dropped summing to 1 within 1e-9.
  TruncatedTransitionMatrix(Count cap, std::vector<TransitionRow> rows, TransitionMethod method,
                            Count reps = 0, std::uint64_t seed = 0);

  Count cap() const noexcept { return cap_; }
  TransitionMethod method() const noexcept { return method_; }
  Count reps() const noexcept { return reps_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double p(Count i, Count j) const { return probabilities_[index(i) * stride() + static_cast<std::size_t>(j)]; }
  double overflow(Count i) const { return overflow_[index(i)]; }
  double dropped_mass(Count i) const { return dropped_[index(i)]; }
  /// P_ij for j = 0..cap.
  std::span<const double> row(Count i) const {
    return std::span<const double>(probabilities_).subspan(index(i) * stride(), stride());
  }

 private:
  std::size_t stride() const noexcept { return static_cast<std::size_t>(cap_ + 1); }
  std::size_t index(Count i) const;

  Count cap_;
  TransitionMethod method_;
  Count reps_;
  std::uint64_t seed_;
  std::vector<double> probabilities_;
  std::vector<double> overflow_;
  std::vector<double> dropped_;
};

/// Exact row by convolving the offspring law i times and pushing the summed
/// (females, males) through zeta.
TransitionRow transition_row_exact(const ProcessSpec& spec, Count i, Count cap, const SupportOptions& options = {});

/// All rows 1..cap; convolutions are shared between consecutive states.
TruncatedTransitionMatrix transition_matrix_exact(const ProcessSpec& spec, Count cap,
                                                  const SupportOptions& options = {});

/// Frequency estimate of the row from `reps` one-generation draws.
TransitionRow transition_row_mc(const ProcessSpec& spec, Count i, Count cap, Count reps, RandomStream& rng);

/// Row i uses RandomStream::derive(master_seed, i).
TruncatedTransitionMatrix transition_matrix_mc(const ProcessSpec& spec, Count cap, Count reps,
                                               std::uint64_t master_seed);

}  // namespace twosex
