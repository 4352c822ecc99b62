#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dl2u/dgp.hpp"
#include "dl2u/errors.hpp"
#include "dl2u/estimator.hpp"
#include "dl2u/ks.hpp"
#include "dl2u/oracles.hpp"

namespace dl2u::cli {

namespace {

// Values given explicitly on the command line; they win over --config.
struct Overrides {
  std::optional<std::int64_t> n;
  std::optional<double> c, d, alpha, y0, z0;
  std::optional<std::string> kn, rn, regime;

  std::optional<std::uint64_t> seed, rep;
  std::optional<std::int64_t> paths, reps;
  std::optional<double> alpha_level;

  std::optional<std::string> table_id;
  std::optional<std::int64_t> n_stat, n_expl;
  std::optional<double> const_kn, c1b, c2;

  std::optional<std::string> panel;
  std::optional<int> bins;
  std::optional<double> window_lo, window_hi;

  std::optional<std::int64_t> draws;
  bool homoskedastic = false;
  bool no_diagnostics = false;

  std::optional<unsigned> threads;
  std::string in;
  std::string out;
  std::string config;
};

void add_model_flags(CLI::App* sub, Overrides& o, bool with_n = true) {
  if (with_n) sub->add_option("--n", o.n, "sample size");
  sub->add_option("--c", o.c, "root drift constant, rho_n = 1 -/+ c/k_n");
  sub->add_option("--d", o.d, "volatility drift constant, phi_n = 1 - d/log r_n");
  sub->add_option("--alpha", o.alpha, "volatility shock s.d. (0 = homoskedastic)");
  sub->add_option("--kn", o.kn, "k_n sequence: const:<v> | log | pow:<a> | lin");
  sub->add_option("--rn", o.rn, "r_n sequence, same forms as --kn");
  sub->add_option("--regime", o.regime, "stat | expl");
  sub->add_option("--y0", o.y0, "initial value y_0");
  sub->add_option("--z0", o.z0, "initial log-variance z_0");
}

void add_common_flags(CLI::App* sub, Overrides& o, bool with_seed = true) {
  if (with_seed) sub->add_option("--seed", o.seed, "base seed (default: $DL2U_SEED or 0)");
  sub->add_option("--threads", o.threads, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "output file (default: stdout)");
  sub->add_option("--config", o.config, "metadata JSON of an earlier run");
}

void apply(const Overrides& o, CliConfig& cfg) {
  ModelParams& p = cfg.params;
  if (o.n) p.n = *o.n;
  if (o.c) p.c = *o.c;
  if (o.d) p.d = *o.d;
  if (o.alpha) p.alpha = *o.alpha;
  if (o.y0) p.y0 = *o.y0;
  if (o.z0) p.z0 = *o.z0;
  if (o.kn) p.kn = SequenceSpec::parse(*o.kn);
  if (o.rn) p.rn = SequenceSpec::parse(*o.rn);
  if (o.regime) p.regime = parse_regime(*o.regime);

  if (o.seed) cfg.seed = *o.seed;
  if (o.rep) cfg.rep = *o.rep;
  if (o.paths) cfg.paths = *o.paths;
  if (o.reps) cfg.reps = *o.reps;
  if (o.alpha_level) cfg.alpha_level = *o.alpha_level;

  if (o.table_id) cfg.table_id = *o.table_id;
  if (o.n_stat) cfg.table.n_near_stationary = *o.n_stat;
  if (o.n_expl) cfg.table.n_explosive = *o.n_expl;
  if (o.const_kn) cfg.table.constant_kn = *o.const_kn;
  if (o.c1b) cfg.table.table1_explosive_c = *o.c1b;
  if (o.c2) cfg.table.table2_c = *o.c2;
  if (o.reps) cfg.table.replications = *o.reps;
  if (o.paths) cfg.table.paths_per_test = *o.paths;

  if (o.bins) cfg.bins = *o.bins;
  if (o.window_lo) cfg.window_lo = *o.window_lo;
  if (o.window_hi) cfg.window_hi = *o.window_hi;

  if (o.draws) cfg.draws = *o.draws;
  if (o.homoskedastic) cfg.homoskedastic_only = true;
  if (o.no_diagnostics) cfg.diagnostics = false;

  if (o.threads) cfg.threads = *o.threads;
  cfg.in = o.in;
  cfg.out = o.out;
  cfg.table.seed = cfg.seed;
  cfg.table.threads = cfg.threads;
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes `body` to cfg.out (plus a .meta.json sidecar) or to `out`.
void emit(const CliConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.out.empty()) {
    out << body;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + cfg.out + "'");
  file << body;
  std::ofstream meta(cfg.out + ".meta.json", std::ios::binary);
  if (!meta) throw UsageError("cannot write '" + cfg.out + ".meta.json'");
  meta << config_to_json(cfg).dump(2) << '\n';
}

ExperimentSpec experiment_spec(const CliConfig& cfg) {
  ExperimentSpec spec;
  spec.params = cfg.params;
  spec.paths_per_test = cfg.paths;
  spec.replications = cfg.reps;
  spec.alpha_level = cfg.alpha_level;
  spec.seed_base = cfg.seed;
  return spec;
}

int cmd_simulate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const SimulatedPath path = simulate_path(cfg.params, RngSeed{cfg.seed, cfg.rep});
  std::ostringstream body;
  write_path_csv(body, path);
  if (cfg.out.empty()) err << config_to_json(cfg).dump() << '\n';
  emit(cfg, body.str(), out);
  return kExitOk;
}

int cmd_estimate(CliConfig cfg, std::ostream& out) {
  if (cfg.in.empty()) throw UsageError("estimate needs --in <path.csv>");
  std::ifstream is(cfg.in);
  if (!is) throw UsageError("cannot open '" + cfg.in + "'");
  const SimulatedPath path = read_path_csv(is);
  if (path.y.size() < 2) throw InputError("path file holds fewer than two observations");
  cfg.params.n = static_cast<std::int64_t>(path.y.size()) - 1;

  const OlsResult ols = ols_rho(path);
  const PivotValue pv = pivot(ols, cfg.params);
  json j = {{"rho_hat", ols.rho_hat},
            {"rho_n", rho_n(cfg.params)},
            {"deviation", rho_deviation(ols, rho_n(cfg.params))},
            {"pivot",
             {{"kind", pv.kind == PivotKind::NearStationaryT ? "T" : "S"}, {"value", pv.value}}},
            {"target", pv.target.name()},
            {"params", to_json(cfg.params)}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_experiment(const CliConfig& cfg, std::ostream& out) {
  const ExperimentSpec spec = experiment_spec(cfg);
  const ExperimentSummary summary = run_experiment(spec, cfg.threads);
  json j = to_json(summary);
  j["target"] = TargetLaw::for_params(cfg.params).name();
  j["config"] = config_to_json(cfg);
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_table(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const TableId id = parse_table_id(cfg.table_id);
  const std::vector<TableRow> rows = run_table(id, cfg.table);
  std::ostringstream body;
  write_table_csv(body, rows);
  if (cfg.out.empty()) err << config_to_json(cfg).dump() << '\n';
  emit(cfg, body.str(), out);
  return kExitOk;
}

int cmd_hist(const CliConfig& cfg, std::ostream& out) {
  if (cfg.bins < 1) throw UsageError("--bins must be positive");
  const ExperimentSpec spec = experiment_spec(cfg);
  validate(spec);
  const bool cauchy = cfg.params.regime == Regime::MildlyExplosive;
  const double lo = cfg.window_lo.value_or(cauchy ? 0.01 : 0.0);
  const double hi = cfg.window_hi.value_or(cauchy ? 0.99 : 1.0);
  const TargetLaw target = TargetLaw::for_params(cfg.params);

  const std::vector<double> pivots = replication_pivots(spec, 0);
  const Histogram h = histogram_from_sample(pivots, target, cfg.bins, lo, hi);
  json j = to_json(h);
  j["ks"] = to_json(ks_test(pivots, target));
  j["config"] = config_to_json(cfg);
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  if (cfg.draws < kMinOracleDraws) {
    throw UsageError("--draws must be at least " + std::to_string(kMinOracleDraws));
  }
  VerifyOptions opt;
  opt.draws = cfg.draws;
  opt.seed = cfg.seed;
  opt.homoskedastic_only = cfg.homoskedastic_only;
  opt.diagnostics = cfg.diagnostics;
  const VerifyReport report = run_verification(opt);
  json j = to_json(report);
  j["config"] = config_to_json(cfg);
  emit(cfg, j.dump(2) + "\n", out);
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
  if (cfg.command == "estimate") return cmd_estimate(cfg, out);
  if (cfg.command == "experiment") return cmd_experiment(cfg, out);
  if (cfg.command == "table") return cmd_table(cfg, out, err);
  if (cfg.command == "hist") return cmd_hist(cfg, out);
  if (cfg.command == "verify") return cmd_verify(cfg, out);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::string text(env);
    if (text.front() == '-') throw std::invalid_argument("negative");
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(kSeedEnv) + " must be a non-negative integer, got '" + env + "'");
  }
}

CliConfig default_config(const std::string& command, const std::string& panel) {
  CliConfig cfg;
  cfg.command = command;
  cfg.seed = default_seed();
  if (command == "hist") {
    cfg.panel = panel;
    ModelParams& p = cfg.params;
    p.d = 1.0;
    p.alpha = 0.5;
    if (panel == "left") {
      p.n = 1000;
      p.c = 1.0;
      p.regime = Regime::NearStationary;
    } else if (panel == "right") {
      p.n = 300;
      p.c = 0.5;
      p.regime = Regime::MildlyExplosive;
    } else {
      throw UsageError("--panel must be left or right");
    }
  }
  return cfg;
}

json config_to_json(const CliConfig& cfg) {
  json j = {{"command", cfg.command}};
  const std::string& c = cfg.command;
  if (c == "simulate" || c == "estimate" || c == "experiment" || c == "hist") {
    j["params"] = to_json(cfg.params);
  }
  if (c != "estimate") j["seed"] = cfg.seed;
  if (c == "simulate") j["rep"] = cfg.rep;
  if (c == "experiment" || c == "hist") {
    j["paths"] = cfg.paths;
    j["alpha_level"] = cfg.alpha_level;
  }
  if (c == "experiment") j["reps"] = cfg.reps;
  if (c == "table") {
    j["id"] = cfg.table_id;
    j["reps"] = cfg.table.replications;
    j["paths"] = cfg.table.paths_per_test;
    j["n_stat"] = cfg.table.n_near_stationary;
    j["n_expl"] = cfg.table.n_explosive;
    j["const_kn"] = cfg.table.constant_kn;
    j["c1b"] = cfg.table.table1_explosive_c;
    j["c2"] = cfg.table.table2_c;
  }
  if (c == "hist") {
    j["panel"] = cfg.panel;
    j["bins"] = cfg.bins;
    const bool cauchy = cfg.params.regime == Regime::MildlyExplosive;
    j["window_lo"] = cfg.window_lo.value_or(cauchy ? 0.01 : 0.0);
    j["window_hi"] = cfg.window_hi.value_or(cauchy ? 0.99 : 1.0);
  }
  if (c == "verify") {
    j["draws"] = cfg.draws;
    j["homoskedastic_only"] = cfg.homoskedastic_only;
    j["diagnostics"] = cfg.diagnostics;
  }
  return j;
}

void apply_config_json(const json& j, CliConfig& cfg) {
  try {
    if (j.contains("params")) cfg.params = params_from_json(j.at("params"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rep")) cfg.rep = j.at("rep").get<std::uint64_t>();
    if (j.contains("paths")) {
      cfg.paths = j.at("paths").get<std::int64_t>();
      cfg.table.paths_per_test = cfg.paths;
    }
    if (j.contains("reps")) {
      cfg.reps = j.at("reps").get<std::int64_t>();
      cfg.table.replications = cfg.reps;
    }
    if (j.contains("alpha_level")) cfg.alpha_level = j.at("alpha_level").get<double>();
    if (j.contains("id")) cfg.table_id = j.at("id").get<std::string>();
    if (j.contains("n_stat")) cfg.table.n_near_stationary = j.at("n_stat").get<std::int64_t>();
    if (j.contains("n_expl")) cfg.table.n_explosive = j.at("n_expl").get<std::int64_t>();
    if (j.contains("const_kn")) cfg.table.constant_kn = j.at("const_kn").get<double>();
    if (j.contains("c1b")) cfg.table.table1_explosive_c = j.at("c1b").get<double>();
    if (j.contains("c2")) cfg.table.table2_c = j.at("c2").get<double>();
    if (j.contains("panel")) cfg.panel = j.at("panel").get<std::string>();
    if (j.contains("bins")) cfg.bins = j.at("bins").get<int>();
    if (j.contains("window_lo")) cfg.window_lo = j.at("window_lo").get<double>();
    if (j.contains("window_hi")) cfg.window_hi = j.at("window_hi").get<double>();
    if (j.contains("draws")) cfg.draws = j.at("draws").get<std::int64_t>();
    if (j.contains("homoskedastic_only")) {
      cfg.homoskedastic_only = j.at("homoskedastic_only").get<bool>();
    }
    if (j.contains("diagnostics")) cfg.diagnostics = j.at("diagnostics").get<bool>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moderate-deviation autoregression toolkit: simulation, estimation, "
               "Monte Carlo tables, histograms and oracle checks.",
               "dl2u"};
  app.require_subcommand(0, 1);
  Overrides o;
  app.add_option("--config", o.config, "rerun from the metadata JSON of an earlier output");
  app.add_option("--out", o.out, "output file (default: stdout)");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "simulate one path as CSV t,y,sigma2,u");
  add_model_flags(sim, o);
  add_common_flags(sim, o);
  sim->add_option("--rep", o.rep, "stream index of the path");

  auto* est = app.add_subcommand("estimate", "OLS fit and pivot of a path CSV");
  add_model_flags(est, o, false);
  add_common_flags(est, o, false);
  est->add_option("--in", o.in, "path CSV as written by simulate")->required();

  auto* exp = app.add_subcommand("experiment", "R replications of a KS test over B pivots");
  add_model_flags(exp, o);
  add_common_flags(exp, o);
  exp->add_option("--paths", o.paths, "pivots per KS test (B)");
  exp->add_option("--reps", o.reps, "replications (R)");
  exp->add_option("--alpha-level", o.alpha_level, "KS significance level");

  auto* tab = app.add_subcommand("table", "reproduce a KS table as CSV kn,mean_ks,acceptance");
  add_common_flags(tab, o);
  tab->add_option("--id", o.table_id, "1a | 1b | 2a | 2b");
  tab->add_option("--reps", o.reps, "replications per row");
  tab->add_option("--paths", o.paths, "pivots per KS test");
  tab->add_option("--n-stat", o.n_stat, "sample size of the near-stationary tables");
  tab->add_option("--n-expl", o.n_expl, "sample size of the explosive tables");
  tab->add_option("--const-kn", o.const_kn, "k_n of the constant row");
  tab->add_option("--c1b", o.c1b, "c of table 1b");
  tab->add_option("--c2", o.c2, "c of tables 2a and 2b");

  auto* hist = app.add_subcommand("hist", "histogram of standardized pivots with target overlay");
  add_model_flags(hist, o);
  add_common_flags(hist, o);
  hist->add_option("--panel", o.panel, "left (N(0,2c)) | right (Cauchy)");
  hist->add_option("--bins", o.bins, "number of bins");
  hist->add_option("--paths", o.paths, "pivots in the histogram");
  hist->add_option("--window-lo", o.window_lo, "lower empirical quantile of the display window");
  hist->add_option("--window-hi", o.window_hi, "upper empirical quantile of the display window");

  auto* ver = app.add_subcommand("verify", "closed-form moment and convergence checks");
  add_common_flags(ver, o);
  ver->add_option("--draws", o.draws, "antithetic pairs per moment check (>= 100000)");
  ver->add_flag("--homoskedastic", o.homoskedastic, "alpha = 0 checks only");
  ver->add_flag("--no-diagnostics", o.no_diagnostics, "skip convergence and rate diagnostics");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::optional<json> config;
    if (!o.config.empty()) config = read_json_file(o.config);

    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    if (config) {
      const std::string stored = config->value("command", std::string());
      if (command.empty()) command = stored;
      const bool estimate_from_sim = command == "estimate" && stored == "simulate";
      if (!stored.empty() && stored != command && !estimate_from_sim) {
        throw UsageError("config was written by '" + stored + "', not '" + command + "'");
      }
    }
    if (command.empty()) {
      err << app.help();
      return kExitUsage;
    }

    std::string panel = "left";
    if (config && config->contains("panel")) panel = config->value("panel", panel);
    if (o.panel) panel = *o.panel;
    CliConfig cfg = default_config(command, panel);
    if (config) apply_config_json(*config, cfg);
    if (command == "estimate" && !config) {
      // Model parameters default to those recorded next to the path file.
      std::ifstream sidecar(o.in + ".meta.json");
      if (sidecar) {
        const json meta = read_json_file(o.in + ".meta.json");
        if (meta.contains("params")) cfg.params = params_from_json(meta.at("params"));
      }
    }
    apply(o, cfg);
    return dispatch(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DegeneratePathError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << '\n';
    return kExitOverflow;
  }
}

}  // namespace dl2u::cli
