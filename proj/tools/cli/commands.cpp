#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "twosex/analytic.hpp"
#include "twosex/chains.hpp"
#include "twosex/error.hpp"
#include "twosex/kernels.hpp"

namespace twosex::cli {

using nlohmann::json;

namespace {

constexpr Count kTableStates[] = {2, 5, 10};
constexpr Count kTableGenerations[] = {2, 5, 7, 10};

Cell maybe(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

void require_subcritical_females(const OffspringMoments& m) {
  if (!(m.mu_f < 1.0)) {
    throw OutOfScopeError("mean female offspring mu_f = " + std::to_string(m.mu_f) +
                          " >= 1; only subcritical female envelopes are supported");
  }
}

TruncatedTransitionMatrix build_matrix(const ProcessSpec& spec, const RunConfig& config) {
  if (config.cap < spec.initial) throw ConfigError("--cap must be >= the initial state " + std::to_string(spec.initial));
  if (config.method == MatrixMethod::Exact) return transition_matrix_exact(spec, config.cap);
  if (config.reps < 1) throw ConfigError("--reps must be >= 1");
  return transition_matrix_mc(spec, config.cap, config.reps, config.seed);
}

json matrix_meta(const ChainBoundTable& t) {
  json j = {{"cap", t.cap()}, {"method", method_name(t.method())}, {"kernel_isa", kernels::isa_name(kernels::active_isa())}};
  if (t.estimated()) {
    j["reps"] = t.reps();
    j["seed"] = t.seed();
    j["caveat"] = "certificates apply to the chain defined by the estimated matrix, not the true process";
  }
  return j;
}

json growth_meta(const GrowthRate& g) { return {{"value", g.value}, {"provenance", provenance_name(g.provenance)}}; }

json mean_meta(const MeanBound& b) {
  return {{"i", b.i},         {"lower", b.lower},       {"upper", b.upper},
          {"raw_lower", b.raw_lower}, {"lower_clamped", b.lower_clamped}, {"r", b.r},
          {"mu_s", b.mu_s},   {"sigma2_s", b.sigma2_s}, {"b_s", b.b_s},
          {"envelope_based", b.envelope_based}};
}

std::optional<TruncationCertificate> certificate(Count i, Count n, const GrowthRate& g, Count cap) {
  if (n < 2 || !(g.value > 0.0 && g.value < 1.0)) return std::nullopt;
  return truncation_error(i, n, g.value, cap);
}

}  // namespace

Report cmd_bounds(const RunConfig& config) {
  if (config.n_max < 0) throw ConfigError("--n-max must be >= 0");
  const ProcessSpec spec = config.process();
  const OffspringMoments m = spec.law.moments();
  require_subcritical_females(m);
  const Count i = spec.initial;
  const MatedSiblingLaw h = mated_sibling_law(spec.law, spec.rule);
  const GrowthRate g = growth_rate(spec);

  Report report = make_report("bounds", config);
  report.meta["moments"] = {{"mu_f", m.mu_f}, {"p_f0", m.p_f0}, {"var_f", m.var_f},
                            {"mu_s", h.mu_s}, {"sigma2_s", h.sigma2_s}};
  report.meta["growth_rate"] = growth_meta(g);
  report.meta["methods"] = {{"fgfp_cdf", "pgf iteration of the female marginal"},
                            {"smop_cdf", "pgf iteration of the mated-sibling law"},
                            {"tail_bounds", "Agresti factors on the FGFP (upper) and SMOP (lower) envelopes"}};
  if (spec.rule.kind() == MatingRule::Kind::Identity) {
    report.add_note("asexual reduction: identity mating makes SMOP, BGWP and FGFP coincide; upper and lower use the same law");
  }
  if (g.provenance != GrowthRate::Provenance::ClosedForm) {
    report.add_note("growth rate is the mu_f envelope; r-based bounds are envelope-based");
  }

  if (i >= 3 && g.value < 1.0 && g.value > 0.0) {
    report.meta["mean_bounds"] = mean_meta(mean_time_bounds(spec));
  } else if (config.want_mean) {
    throw ConfigError("mean extinction-time bounds hold for i >= 3 (got i = " + std::to_string(i) + ")");
  } else {
    report.add_note("mean-time bounds omitted: they hold for i >= 3");
  }

  std::unique_ptr<ChainBoundTable> chain;
  if (config.cap > 0) {
    chain = std::make_unique<ChainBoundTable>(build_matrix(spec, config), config.n_max);
    report.meta["chain"] = matrix_meta(*chain);
  }

  report.columns = {"n", "fgfp_cdf", "smop_cdf", "cdf_lower", "cdf_upper", "tail_lower", "tail_upper", "delta"};
  if (chain) {
    for (const char* c : {"g_hat", "g_tilde", "eps_hat", "eps_tilde"}) report.columns.emplace_back(c);
  }
  const auto female = [&](double x) { return spec.law.female_pgf(x); };
  const auto sibling = [&](double x) { return h.pgf(x); };
  for (Count n = 0; n <= config.n_max; ++n) {
    const TailBound tb = bgwp_tail_bounds(spec, n);
    std::vector<Cell> row = {n,
                             pgf_extinction_cdf(female, i, n),
                             pgf_extinction_cdf(sibling, i, n),
                             1.0 - tb.upper,
                             1.0 - tb.lower,
                             tb.lower,
                             tb.upper,
                             tb.gap};
    if (chain) {
      const auto cert = certificate(i, n, g, chain->cap());
      row.insert(row.end(), {chain->hat(i, n), chain->tilde(i, n), maybe(cert ? std::optional(cert->hat) : std::nullopt),
                             maybe(cert ? std::optional(cert->tilde) : std::nullopt)});
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

Report cmd_table1(double alpha, const RunConfig& base) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  if (!(3.0 * alpha < 1.0)) {
    throw OutOfScopeError("alpha = " + std::to_string(alpha) + " gives E[f] = 3 alpha >= 1: not subcritical");
  }
  RunConfig config = base;
  config.law = {{"type", "sex-multinomial"}, {"litter", 3}, {"alpha", alpha}};
  config.mating = {{"type", "promiscuous"}};
  config.initial = 1;
  if (config.cap == 0) config.cap = 20;
  if (config.cap < 10) throw ConfigError("--cap must be >= 10 to cover i = 10");
  if (config.reps < 1) throw ConfigError("--reps must be >= 1");

  const ProcessSpec spec = config.process();
  const MatedSiblingLaw h = mated_sibling_law(spec.law, spec.rule);
  const GrowthRate g = growth_rate(spec);
  const ChainBoundTable exact(transition_matrix_exact(spec, config.cap), 10);
  const ChainBoundTable mc(transition_matrix_mc(spec, config.cap, config.reps, config.seed), 10);

  Report report = make_report("table1", config);
  report.meta["growth_rate"] = growth_meta(g);
  report.meta["chain_exact"] = matrix_meta(exact);
  report.meta["chain_mc"] = matrix_meta(mc);
  report.columns = {"i",         "n",        "g_fgfp",  "g_hat_exact", "g_tilde_exact",
                    "g_hat_mc",  "g_tilde_mc", "g_smop", "eps_hat",     "eps_tilde"};
  const auto female = [&](double x) { return spec.law.female_pgf(x); };
  const auto sibling = [&](double x) { return h.pgf(x); };
  for (Count i : kTableStates)
    for (Count n : kTableGenerations) {
      const auto cert = truncation_error(i, n, g.value, config.cap);
      report.rows.push_back({i, n, pgf_extinction_cdf(female, i, n), exact.hat(i, n), exact.tilde(i, n),
                             mc.hat(i, n), mc.tilde(i, n), pgf_extinction_cdf(sibling, i, n), cert.hat, cert.tilde});
    }
  return report;
}

Report cmd_simulate(const RunConfig& config) {
  if (config.n_max < 0) throw ConfigError("--n-max must be >= 0");
  if (config.reps < 1) throw ConfigError("--reps must be >= 1");
  const ProcessSpec spec = config.process();
  const OffspringMoments m = spec.law.moments();
  const EmpiricalCdf emp = empirical_cdf(spec, config.n_max, config.reps, config.seed);

  Report report = make_report("simulate", config);
  report.meta["growth_rate"] = growth_meta(growth_rate(spec));
  report.meta["simulation"] = {{"reps", emp.reps},           {"horizon", emp.horizon},
                               {"censored", emp.censored},   {"mean_time", emp.mean_time},
                               {"mean_std_error", emp.mean_std_error}};
  if (emp.censored > 0) report.add_note("some paths were censored at the horizon; mean_time is a lower estimate");

  report.columns = {"n", "cdf", "std_error"};
  const bool analytic = m.mu_f < 1.0;
  std::optional<MatedSiblingLaw> h;
  if (analytic) {
    h = mated_sibling_law(spec.law, spec.rule);
    report.columns.emplace_back("fgfp_cdf");
    report.columns.emplace_back("smop_cdf");
  } else {
    report.add_note("mu_f >= 1: analytic comparison columns omitted");
  }
  std::unique_ptr<ChainBoundTable> chain;
  if (config.cap > 0) {
    chain = std::make_unique<ChainBoundTable>(build_matrix(spec, config), config.n_max);
    report.meta["chain"] = matrix_meta(*chain);
    report.columns.emplace_back("g_hat");
    report.columns.emplace_back("g_tilde");
  }
  const auto female = [&](double x) { return spec.law.female_pgf(x); };
  for (Count n = 0; n <= config.n_max; ++n) {
    const auto k = static_cast<std::size_t>(n);
    std::vector<Cell> row = {n, emp.cdf[k], emp.std_error[k]};
    if (analytic) {
      row.emplace_back(pgf_extinction_cdf(female, spec.initial, n));
      row.emplace_back(pgf_extinction_cdf([&](double x) { return h->pgf(x); }, spec.initial, n));
    }
    if (chain) {
      row.emplace_back(chain->hat(spec.initial, n));
      row.emplace_back(chain->tilde(spec.initial, n));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

Report cmd_check(const RunConfig& base) {
  RunConfig config = base;
  if (config.cap == 0) config.cap = 50;
  const MatingRule rule = rule_from_json(config.mating);
  const auto sup = check_superadditive(rule, config.cap);
  const auto dom = check_female_dominated(rule, config.cap);

  Report report = make_report("check", config);
  report.meta["rule"] = rule.name();
  report.columns = {"property", "holds", "grid_cap", "holds_analytically", "counterexample"};
  std::string sup_cx, dom_cx;
  if (sup.counterexample) {
    const auto& c = *sup.counterexample;
    sup_cx = "zeta(" + std::to_string(c.x1 + c.x2) + "," + std::to_string(c.y1 + c.y2) + ")=" +
             std::to_string(c.merged) + " < zeta(" + std::to_string(c.x1) + "," + std::to_string(c.y1) +
             ")+zeta(" + std::to_string(c.x2) + "," + std::to_string(c.y2) + ")=" + std::to_string(c.split);
  }
  if (dom.counterexample) {
    const auto& c = *dom.counterexample;
    dom_cx = "zeta(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")=" + std::to_string(c.value);
  }
  report.rows.push_back({std::string("superadditive"), sup.holds, sup.cap, sup.holds_analytically, sup_cx});
  report.rows.push_back({std::string("female_dominated"), dom.holds, dom.cap, dom.holds_analytically, dom_cx});
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extinction-time bounds and simulation for two-sex branching processes", "twosex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  struct Flags {
    std::string config_path;
    std::optional<double> alpha;
    std::optional<Count> initial;
    std::optional<Count> n_max;
    std::optional<Count> cap;
    std::optional<Count> reps;
    std::optional<std::uint64_t> seed;
    std::string method = "exact";
    std::string format = "csv";
    std::string out_path;
    bool mean = false;
  } flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON process configuration");
    sub->add_option("--alpha", flags.alpha, "female probability of the litter-3 sex-multinomial law");
    sub->add_option("--i", flags.initial, "initial number of mating units");
    sub->add_option("--n-max", flags.n_max, "largest generation reported");
    sub->add_option("--cap", flags.cap, "truncation cap M (or grid cap for check)");
    sub->add_option("--reps", flags.reps, "Monte Carlo replicates");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--method", flags.method, "transition matrix method")->check(CLI::IsMember({"exact", "mc"}));
    sub->add_option("--format", flags.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", flags.out_path, "output file (default stdout)");
  };
  auto* bounds = app.add_subcommand("bounds", "analytic and chain bounds on P(T <= n) and E[T]");
  auto* table1 = app.add_subcommand("table1", "reproduce the 12-cell litter-3 comparison table");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo extinction-time distribution");
  auto* check = app.add_subcommand("check", "grid checks of the mating rule's structural assumptions");
  for (auto* sub : {bounds, table1, simulate, check}) add_common(sub);
  bounds->add_flag("--mean", flags.mean, "require mean-time bounds (needs i >= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    RunConfig config = RunConfig::defaults();
    if (!flags.config_path.empty()) config = load_config(flags.config_path, config);
    if (flags.alpha && !table1->parsed()) {
      Count litter = 3;
      if (config.law.value("type", "") == "sex-multinomial") litter = config.law.value("litter", Count{3});
      config.law = {{"type", "sex-multinomial"}, {"litter", litter}, {"alpha", *flags.alpha}};
    }
    if (flags.initial) config.initial = *flags.initial;
    if (flags.n_max) config.n_max = *flags.n_max;
    if (flags.cap) config.cap = *flags.cap;
    if (flags.reps) config.reps = *flags.reps;
    if (flags.seed) config.seed = *flags.seed;
    config.method = flags.method == "mc" ? MatrixMethod::MonteCarlo : MatrixMethod::Exact;
    config.format = flags.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    config.out_path = flags.out_path;
    config.want_mean = flags.mean;

    Report report;
    if (bounds->parsed()) report = cmd_bounds(config);
    else if (table1->parsed()) report = cmd_table1(flags.alpha.value_or(0.25), config);
    else if (simulate->parsed()) report = cmd_simulate(config);
    else report = cmd_check(config);

    if (config.out_path.empty()) {
      write_report(report, config.format, out);
    } else {
      std::ofstream file(config.out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + config.out_path + "'");
      write_report(report, config.format, file);
      write_summary(report, out);
    }
    return kExitOk;
  } catch (const OutOfScopeError& e) {
    err << "twosex: out of scope: " << e.what() << '\n';
    return kExitOutOfScope;
  } catch (const ConfigError& e) {
    err << "twosex: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelError& e) {
    err << "twosex: invalid model: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TruncationError& e) {
    err << "twosex: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace twosex::cli
