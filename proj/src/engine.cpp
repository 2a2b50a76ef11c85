#include "twosex/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "twosex/error.hpp"
#include "twosex/kernels.hpp"

namespace twosex {

ProcessSpec::ProcessSpec(OffspringLaw law_, MatingRule rule_, Count initial_)
    : law(std::move(law_)), rule(std::move(rule_)), initial(initial_) {
  if (initial < 1) throw ModelError("initial number of mating units must be >= 1");
}

// ---------------------------------------------------------------------------
// Simulation

Count evaluate_generation(const MatingRule& rule, std::span<const FemaleMale> offspring, Process which) {
  switch (which) {
    case Process::Bgwp: {
      FemaleMale total;
      for (const auto& o : offspring) {
        total.females += o.females;
        total.males += o.males;
      }
      return offspring.empty() ? 0 : rule(total.females, total.males);
    }
    case Process::Fgfp: {
      Count total = 0;
      for (const auto& o : offspring) total += o.females;
      return total;
    }
    case Process::Smop: {
      Count total = 0;
      for (const auto& o : offspring) total += rule(o.females, o.males);
      return total;
    }
  }
  return 0;
}

Count step(const ProcessSpec& spec, Count z, RandomStream& rng) {
  if (z <= 0) return 0;
  FemaleMale total;
  for (Count j = 0; j < z; ++j) {
    const FemaleMale o = spec.law.sample(rng);
    total.females += o.females;
    total.males += o.males;
  }
  return spec.rule(total.females, total.males);
}

Count associated_step(const ProcessSpec& spec, Count z, RandomStream& rng, Process which) {
  if (z <= 0) return 0;
  std::vector<FemaleMale> offspring(static_cast<std::size_t>(z));
  for (auto& o : offspring) o = spec.law.sample(rng);
  return evaluate_generation(spec.rule, offspring, which);
}

std::vector<CoupledGeneration> simulate_coupled(const ProcessSpec& spec, Count generations, RandomStream& rng) {
  std::vector<CoupledGeneration> path;
  path.reserve(static_cast<std::size_t>(generations + 1));
  path.push_back({spec.initial, spec.initial, spec.initial});
  std::vector<FemaleMale> offspring;
  for (Count n = 1; n <= generations; ++n) {
    const CoupledGeneration& prev = path.back();
    const Count need = std::max({prev.smop, prev.bgwp, prev.fgfp});
    offspring.resize(static_cast<std::size_t>(need));
    for (auto& o : offspring) o = spec.law.sample(rng);
    const std::span<const FemaleMale> draws(offspring);
    CoupledGeneration next;
    next.smop = evaluate_generation(spec.rule, draws.first(static_cast<std::size_t>(prev.smop)), Process::Smop);
    next.bgwp = evaluate_generation(spec.rule, draws.first(static_cast<std::size_t>(prev.bgwp)), Process::Bgwp);
    next.fgfp = evaluate_generation(spec.rule, draws.first(static_cast<std::size_t>(prev.fgfp)), Process::Fgfp);
    path.push_back(next);
  }
  return path;
}

ExtinctionSample sample_extinction_time(const ProcessSpec& spec, Count horizon, RandomStream& rng,
                                        Count population_limit) {
  if (horizon < 1) throw ModelError("simulation horizon must be >= 1");
  Count z = spec.initial;
  for (Count n = 1; n <= horizon; ++n) {
    z = step(spec, z, rng);
    if (z == 0) return {ExtinctionSample::Outcome::Extinct, n};
    if (z > population_limit) break;
  }
  return {ExtinctionSample::Outcome::Censored, horizon};
}

Count default_horizon(Count initial, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ModelError("default horizon needs 0 < r < 1");
  const double target = 1e-6;
  auto n = static_cast<Count>(std::max(0.0, std::floor(std::log(target / static_cast<double>(initial)) / std::log(r))));
  auto bound = [&](Count k) { return static_cast<double>(initial) * std::pow(r, static_cast<double>(k)); };
  while (n > 0 && bound(n - 1) < target) --n;
  while (!(bound(n) < target)) ++n;
  return n;
}

namespace {

Count resolve_horizon(const ProcessSpec& spec, Count n_max, const SimulationOptions& options) {
  if (options.horizon > 0) return std::max(options.horizon, std::max<Count>(n_max, 1));
  const double r = growth_rate(spec).value;
  Count h = 1000;
  if (r == 0.0) h = 1;
  else if (r < 1.0) h = default_horizon(spec.initial, r);
  return std::max({h, n_max, Count{1}});
}

// Runs body(k) for k in [0, count) split into contiguous blocks.
template <typename Body>
void parallel_for(Count count, unsigned threads, Body body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (Count k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::jthread> workers;
  const Count block = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const Count begin = static_cast<Count>(w) * block;
    const Count end = std::min(count, begin + block);
    if (begin >= end) break;
    workers.emplace_back([begin, end, &body] {
      for (Count k = begin; k < end; ++k) body(k);
    });
  }
}

}  // namespace

EmpiricalCdf empirical_cdf(const ProcessSpec& spec, Count n_max, Count reps, std::uint64_t master_seed,
                           const SimulationOptions& options) {
  if (reps < 1) throw ModelError("replicate count must be >= 1");
  if (n_max < 0) throw ModelError("n_max must be >= 0");
  EmpiricalCdf out;
  out.initial = spec.initial;
  out.reps = reps;
  out.seed = master_seed;
  out.rng_scheme = std::string(kRngScheme);
  out.horizon = resolve_horizon(spec, n_max, options);

  std::vector<ExtinctionSample> samples(static_cast<std::size_t>(reps));
  parallel_for(reps, options.threads, [&](Count k) {
    RandomStream rng = RandomStream::derive(master_seed, static_cast<std::uint64_t>(k));
    samples[static_cast<std::size_t>(k)] = sample_extinction_time(spec, out.horizon, rng, options.population_limit);
  });

  std::vector<Count> extinct_at(static_cast<std::size_t>(n_max + 1), 0);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& s : samples) {
    if (s.extinct()) {
      if (s.generation <= n_max) ++extinct_at[static_cast<std::size_t>(s.generation)];
    } else {
      ++out.censored;
    }
    const auto t = static_cast<double>(s.generation);
    sum += t;
    sum_sq += t * t;
  }
  const auto n = static_cast<double>(reps);
  out.cdf.resize(extinct_at.size());
  out.std_error.resize(extinct_at.size());
  Count running = 0;
  for (std::size_t k = 0; k < extinct_at.size(); ++k) {
    running += extinct_at[k];
    const double p = static_cast<double>(running) / n;
    out.cdf[k] = p;
    out.std_error[k] = std::sqrt(p * (1.0 - p) / n);
  }
  out.mean_time = sum / n;
  const double var = reps > 1 ? std::max(0.0, (sum_sq - n * out.mean_time * out.mean_time) / (n - 1.0)) : 0.0;
  out.mean_std_error = std::sqrt(var / n);
  return out;
}

PopulationMeans empirical_population_means(const ProcessSpec& spec, Count generations, Count reps,
                                           std::uint64_t master_seed) {
  if (reps < 1) throw ModelError("replicate count must be >= 1");
  const auto len = static_cast<std::size_t>(generations + 1);
  std::vector<double> sum(len, 0.0), sum_sq(len, 0.0);
  for (Count k = 0; k < reps; ++k) {
    RandomStream rng = RandomStream::derive(master_seed, static_cast<std::uint64_t>(k));
    Count z = spec.initial;
    for (std::size_t g = 0; g < len; ++g) {
      if (g > 0) z = step(spec, z, rng);
      const auto v = static_cast<double>(z);
      sum[g] += v;
      sum_sq[g] += v * v;
    }
  }
  PopulationMeans out;
  const auto n = static_cast<double>(reps);
  for (std::size_t g = 0; g < len; ++g) {
    const double mean = sum[g] / n;
    const double var = reps > 1 ? std::max(0.0, (sum_sq[g] - n * mean * mean) / (n - 1.0)) : 0.0;
    out.mean.push_back(mean);
    out.std_error.push_back(std::sqrt(var / n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Growth rates

std::string provenance_name(GrowthRate::Provenance p) {
  switch (p) {
    case GrowthRate::Provenance::ClosedForm: return "closed-form";
    case GrowthRate::Provenance::UpperEnvelope: return "upper-envelope(mu_f)";
    case GrowthRate::Provenance::Estimated: return "estimated";
  }
  return "unknown";
}

GrowthRate growth_rate(const ProcessSpec& spec) {
  const OffspringMoments m = spec.law.moments();
  GrowthRate g;
  switch (spec.rule.kind()) {
    case MatingRule::Kind::Promiscuous:
    case MatingRule::Kind::Identity:
      g.value = m.mu_f;
      g.provenance = GrowthRate::Provenance::ClosedForm;
      break;
    case MatingRule::Kind::Polygamous:
      g.value = std::min(m.mu_f, static_cast<double>(spec.rule.k()) * m.mu_m);
      g.provenance = GrowthRate::Provenance::ClosedForm;
      break;
    case MatingRule::Kind::Custom:
      g.value = m.mu_f;
      g.provenance = GrowthRate::Provenance::UpperEnvelope;
      break;
  }
  return g;
}

GrowthRate estimate_growth_rate(const ProcessSpec& spec, Count i_max, Count reps, std::uint64_t master_seed) {
  if (i_max < 1 || reps < 2) throw ModelError("growth-rate estimation needs i_max >= 1 and reps >= 2");
  GrowthRate best;
  best.provenance = GrowthRate::Provenance::Estimated;
  best.i_max = i_max;
  best.reps = reps;
  best.value = -1.0;
  for (Count i = 1; i <= i_max; ++i) {
    RandomStream rng = RandomStream::derive(master_seed, static_cast<std::uint64_t>(i));
    double sum = 0.0, sum_sq = 0.0;
    for (Count k = 0; k < reps; ++k) {
      const auto v = static_cast<double>(step(spec, i, rng)) / static_cast<double>(i);
      sum += v;
      sum_sq += v * v;
    }
    const auto n = static_cast<double>(reps);
    const double mean = sum / n;
    if (mean > best.value) {
      best.value = mean;
      best.std_error = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Transition matrices

std::string method_name(TransitionMethod m) {
  switch (m) {
    case TransitionMethod::Exact: return "exact";
    case TransitionMethod::MonteCarlo: return "monte-carlo";
    case TransitionMethod::UserSupplied: return "user-supplied";
  }
  return "unknown";
}

TruncatedTransitionMatrix::TruncatedTransitionMatrix(Count cap, std::vector<TransitionRow> rows,
                                                     TransitionMethod method, Count reps, std::uint64_t seed)
    : cap_(cap), method_(method), reps_(reps), seed_(seed) {
  if (cap < 1) throw ModelError("transition matrix cap must be >= 1");
  if (static_cast<Count>(rows.size()) != cap) throw ModelError("transition matrix needs one row per state 1..cap");
  probabilities_.reserve(rows.size() * stride());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const TransitionRow& row = rows[r];
    if (row.probabilities.size() != stride()) throw ModelError("transition row must cover targets 0..cap");
    double total = row.overflow + row.dropped_mass;
    for (double p : row.probabilities) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ModelError("transition probabilities must be finite and >= 0");
      total += p;
    }
    if (!(row.overflow >= 0.0) || !(row.dropped_mass >= 0.0) || std::abs(total - 1.0) > 1e-9) {
      throw ModelError("transition row " + std::to_string(r + 1) + " does not sum to 1 within 1e-9");
    }
    probabilities_.insert(probabilities_.end(), row.probabilities.begin(), row.probabilities.end());
    overflow_.push_back(row.overflow);
    dropped_.push_back(row.dropped_mass);
  }
}

std::size_t TruncatedTransitionMatrix::index(Count i) const {
  if (i < 1 || i > cap_) {
    throw ModelError("state " + std::to_string(i) + " outside 1.." + std::to_string(cap_));
  }
  return static_cast<std::size_t>(i - 1);
}

namespace {

// Trailing entries of a truncated distribution whose cumulative mass is below
// this are discarded after each convolution.
constexpr double kTrimFraction = 1e-3;

std::vector<double> convolve(std::span<const double> a, std::span<const double> unit) {
  std::vector<double> out(a.size() + unit.size() - 1, 0.0);
  for (std::size_t k = 0; k < unit.size(); ++k) {
    if (unit[k] == 0.0) continue;
    kernels::axpy(unit[k], a, std::span<double>(out).subspan(k, a.size()));
  }
  return out;
}

void trim_tail(std::vector<double>& v, double budget) {
  double trimmed = 0.0;
  while (v.size() > 1 && trimmed + v.back() < budget) {
    trimmed += v.back();
    v.pop_back();
  }
}

// Law of the totals (sum f, sum m) over i offspring draws, built up one unit
// at a time.
class UnitSum {
 public:
  UnitSum(const OffspringLaw& law, const SupportOptions& options)
      : separable_(law.independent_sexes()), trim_budget_(options.tail_tolerance * kTrimFraction) {
    if (separable_) {
      unit_f_ = law.female_marginal(options);
      unit_m_ = law.male_marginal(options);
      sum_f_ = unit_f_;
      sum_m_ = unit_m_;
    } else {
      unit_ = law.enumerate(options);
      rows_ = static_cast<std::size_t>(unit_.max_females + 1);
      cols_ = static_cast<std::size_t>(unit_.max_males + 1);
      grid_ = unit_.mass;
    }
  }

  void add_unit() {
    if (separable_) {
      sum_f_ = convolve(sum_f_, unit_f_);
      sum_m_ = convolve(sum_m_, unit_m_);
      trim_tail(sum_f_, trim_budget_);
      trim_tail(sum_m_, trim_budget_);
      return;
    }
    const std::size_t urows = static_cast<std::size_t>(unit_.max_females + 1);
    const std::size_t ucols = static_cast<std::size_t>(unit_.max_males + 1);
    const std::size_t nrows = rows_ + urows - 1;
    const std::size_t ncols = cols_ + ucols - 1;
    std::vector<double> next(nrows * ncols, 0.0);
    for (std::size_t a = 0; a < urows; ++a)
      for (std::size_t b = 0; b < ucols; ++b) {
        const double p = unit_.mass[a * ucols + b];
        if (p == 0.0) continue;
        for (std::size_t r = 0; r < rows_; ++r) {
          kernels::axpy(p, std::span<const double>(grid_).subspan(r * cols_, cols_),
                        std::span<double>(next).subspan((r + a) * ncols + b, cols_));
        }
      }
    grid_ = std::move(next);
    rows_ = nrows;
    cols_ = ncols;
    trim_grid();
  }

  TransitionRow push(const MatingRule& rule, Count cap) const {
    TransitionRow row;
    row.probabilities.assign(static_cast<std::size_t>(cap + 1), 0.0);
    auto add = [&](Count x, Count y, double p) {
      if (p == 0.0) return;
      const Count j = rule(x, y);
      if (j < 0) throw ModelError("mating rule returned a negative number of mating units");
      if (j <= cap) row.probabilities[static_cast<std::size_t>(j)] += p;
      else row.overflow += p;
    };
    if (separable_) {
      for (std::size_t x = 0; x < sum_f_.size(); ++x) {
        if (sum_f_[x] == 0.0) continue;
        for (std::size_t y = 0; y < sum_m_.size(); ++y)
          add(static_cast<Count>(x), static_cast<Count>(y), sum_f_[x] * sum_m_[y]);
      }
    } else {
      for (std::size_t x = 0; x < rows_; ++x)
        for (std::size_t y = 0; y < cols_; ++y) add(static_cast<Count>(x), static_cast<Count>(y), grid_[x * cols_ + y]);
    }
    const double total =
        std::accumulate(row.probabilities.begin(), row.probabilities.end(), 0.0) + row.overflow;
    row.dropped_mass = std::max(0.0, 1.0 - total);
    return row;
  }

 private:
  void trim_grid() {
    double trimmed = 0.0;
    auto row_mass = [&](std::size_t r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) s += grid_[r * cols_ + c];
      return s;
    };
    auto col_mass = [&](std::size_t c) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) s += grid_[r * cols_ + c];
      return s;
    };
    while (rows_ > 1 && trimmed + row_mass(rows_ - 1) < trim_budget_) {
      trimmed += row_mass(rows_ - 1);
      --rows_;
    }
    std::size_t keep_cols = cols_;
    while (keep_cols > 1 && trimmed + col_mass(keep_cols - 1) < trim_budget_) {
      trimmed += col_mass(keep_cols - 1);
      --keep_cols;
    }
    std::vector<double> next(rows_ * keep_cols);
    for (std::size_t r = 0; r < rows_; ++r)
      std::copy_n(grid_.begin() + static_cast<std::ptrdiff_t>(r * cols_), keep_cols,
                  next.begin() + static_cast<std::ptrdiff_t>(r * keep_cols));
    grid_ = std::move(next);
    cols_ = keep_cols;
  }

  bool separable_;
  double trim_budget_;
  std::vector<double> unit_f_, unit_m_, sum_f_, sum_m_;
  JointPmf unit_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> grid_;
};

// Per-unit truncation scaled so that i-fold sums stay within 1e-9 of unit mass.
SupportOptions row_options(const SupportOptions& options, Count cap) {
  SupportOptions out = options;
  out.tail_tolerance = std::min(options.tail_tolerance, 1e-10 / static_cast<double>(cap));
  return out;
}

void check_row(const TransitionRow& row, Count i, const SupportOptions& options) {
  if (row.dropped_mass > 1e-9) {
    throw TruncationError("transition row " + std::to_string(i) + " lost " + std::to_string(row.dropped_mass) +
                              " probability to support truncation; raise the support cap",
                          options.max_support * 2, options.max_support);
  }
}

}  // namespace

TransitionRow transition_row_exact(const ProcessSpec& spec, Count i, Count cap, const SupportOptions& options) {
  if (cap < 1 || i < 1 || i > cap) throw ModelError("transition row needs 1 <= i <= cap");
  const SupportOptions opts = row_options(options, cap);
  UnitSum sum(spec.law, opts);
  for (Count k = 1; k < i; ++k) sum.add_unit();
  TransitionRow row = sum.push(spec.rule, cap);
  check_row(row, i, opts);
  return row;
}

TruncatedTransitionMatrix transition_matrix_exact(const ProcessSpec& spec, Count cap, const SupportOptions& options) {
  if (cap < 1) throw ModelError("transition matrix cap must be >= 1");
  const SupportOptions opts = row_options(options, cap);
  UnitSum sum(spec.law, opts);
  std::vector<TransitionRow> rows;
  rows.reserve(static_cast<std::size_t>(cap));
  for (Count i = 1; i <= cap; ++i) {
    if (i > 1) sum.add_unit();
    rows.push_back(sum.push(spec.rule, cap));
    check_row(rows.back(), i, opts);
  }
  return TruncatedTransitionMatrix(cap, std::move(rows), TransitionMethod::Exact);
}

TransitionRow transition_row_mc(const ProcessSpec& spec, Count i, Count cap, Count reps, RandomStream& rng) {
  if (cap < 1 || i < 1 || i > cap) throw ModelError("transition row needs 1 <= i <= cap");
  if (reps < 1) throw ModelError("replicate count must be >= 1");
  std::vector<Count> counts(static_cast<std::size_t>(cap + 1), 0);
  Count over = 0;
  for (Count k = 0; k < reps; ++k) {
    const Count j = step(spec, i, rng);
    if (j <= cap) ++counts[static_cast<std::size_t>(j)];
    else ++over;
  }
  TransitionRow row;
  const auto n = static_cast<double>(reps);
  for (Count c : counts) row.probabilities.push_back(static_cast<double>(c) / n);
  row.overflow = static_cast<double>(over) / n;
  return row;
}

TruncatedTransitionMatrix transition_matrix_mc(const ProcessSpec& spec, Count cap, Count reps,
                                               std::uint64_t master_seed) {
  std::vector<TransitionRow> rows;
  rows.reserve(static_cast<std::size_t>(cap));
  for (Count i = 1; i <= cap; ++i) {
    RandomStream rng = RandomStream::derive(master_seed, static_cast<std::uint64_t>(i));
    rows.push_back(transition_row_mc(spec, i, cap, reps, rng));
  }
  return TruncatedTransitionMatrix(cap, std::move(rows), TransitionMethod::MonteCarlo, reps, master_seed);
}

}  // namespace twosex
