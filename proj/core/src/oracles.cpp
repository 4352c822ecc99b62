#include "dl2u/oracles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dl2u/dgp.hpp"
#include "dl2u/errors.hpp"
#include "dl2u/estimator.hpp"
#include "dl2u/rng.hpp"

namespace dl2u {

namespace {

double dispersion(double phi, std::int64_t t) {
  return VolatilityScales(phi, 0.0, 1, 0.0, 1.0).A(t);
}

void require_draws(std::int64_t draws) {
  if (draws < kMinOracleDraws) {
    throw UsageError("oracle checks need at least " + std::to_string(kMinOracleDraws) +
                     " draws, got " + std::to_string(draws));
  }
}

void require_phi(double phi) {
  if (!(phi >= 0.0 && phi < 1.0)) throw DomainError("phi must lie in [0, 1)");
}

// Running mean / variance (Welford).
struct Accumulator {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const { return std::sqrt(variance() / static_cast<double>(count)); }
};

MomentCheck make_check(std::string label, const Accumulator& acc, double log_closed) {
  MomentCheck c;
  c.label = std::move(label);
  c.mc_estimate = acc.mean;
  c.closed_form = std::exp(log_closed);
  c.mc_std_error = acc.std_error();
  const double diff = c.mc_estimate - c.closed_form;
  if (c.mc_std_error > 0.0) {
    c.z_score = diff / c.mc_std_error;
  } else {
    c.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return c;
}

std::string fmt(const char* name, std::initializer_list<std::pair<const char*, double>> args) {
  std::ostringstream os;
  os << name << '(';
  bool first = true;
  for (const auto& [key, value] : args) {
    if (!first) os << ',';
    os << key << '=' << value;
    first = false;
  }
  os << ')';
  return os.str();
}

// Mean over `draws` simulated paths z_0..z_t of the antithetic average
// (statistic(z, +1) + statistic(z, -1)) / 2; the sign mirrors every eta.
template <typename F>
Accumulator antithetic(double alpha, double phi, std::int64_t t, std::int64_t draws,
                       std::uint64_t seed, std::uint64_t tag, F&& statistic) {
  GaussianStream eta(RngSeed{derive_seed(seed, tag), 0}, Series::Oracle);
  std::vector<double> z(static_cast<std::size_t>(t) + 1);
  Accumulator acc;
  for (std::int64_t i = 0; i < draws; ++i) {
    z[0] = 0.0;
    for (std::int64_t s = 1; s <= t; ++s) {
      z[static_cast<std::size_t>(s)] = phi * z[static_cast<std::size_t>(s - 1)] + alpha * eta();
    }
    acc.add(0.5 * (statistic(z, 1.0) + statistic(z, -1.0)));
  }
  return acc;
}

}  // namespace

bool MomentCheck::passed() const { return std::abs(z_score) <= kMomentZThreshold; }

double log_mean_sigma2(double alpha, double phi, std::int64_t t) {
  return alpha * alpha * dispersion(phi, t);
}

double log_fourth_moment(double alpha, double phi, std::int64_t t) {
  return 4.0 * alpha * alpha * dispersion(phi, t);
}

double log_cross_moment(double alpha, double phi, std::int64_t s, std::int64_t t) {
  if (s > t) throw UsageError("cross moment needs s <= t");
  const double a_s = dispersion(phi, s);
  const double decay = std::pow(phi, static_cast<double>(t - s));
  return alpha * alpha * (a_s + dispersion(phi, t) + 2.0 * decay * a_s);
}

double log_conditional_mean(double alpha, double phi, double z_prev) {
  return phi * z_prev + 0.5 * alpha * alpha;
}

MomentCheck check_mean_sigma2(double alpha, double phi, std::int64_t t, std::int64_t draws,
                              std::uint64_t seed) {
  require_draws(draws);
  require_phi(phi);
  if (t < 1) throw UsageError("t must be >= 1");
  const auto ti = static_cast<std::size_t>(t);
  const Accumulator acc = antithetic(alpha, phi, t, draws, seed, 1,
                                     [ti](const std::vector<double>& z, double sign) {
                                       return std::exp(sign * z[ti]);
                                     });
  return make_check(fmt("mean_sigma2", {{"alpha", alpha}, {"phi", phi}, {"t", double(t)}}), acc,
                    log_mean_sigma2(alpha, phi, t));
}

MomentCheck check_fourth_moment(double alpha, double phi, std::int64_t t, std::int64_t draws,
                                std::uint64_t seed) {
  require_draws(draws);
  require_phi(phi);
  if (t < 1) throw UsageError("t must be >= 1");
  const auto ti = static_cast<std::size_t>(t);
  const Accumulator acc = antithetic(alpha, phi, t, draws, seed, 2,
                                     [ti](const std::vector<double>& z, double sign) {
                                       return std::exp(2.0 * sign * z[ti]);
                                     });
  return make_check(fmt("fourth_moment", {{"alpha", alpha}, {"phi", phi}, {"t", double(t)}}), acc,
                    log_fourth_moment(alpha, phi, t));
}

MomentCheck check_cross_moment(double alpha, double phi, std::int64_t s, std::int64_t t,
                               std::int64_t draws, std::uint64_t seed) {
  require_draws(draws);
  require_phi(phi);
  if (s < 1 || s > t) throw UsageError("cross moment needs 1 <= s <= t");
  const auto si = static_cast<std::size_t>(s);
  const auto ti = static_cast<std::size_t>(t);
  const Accumulator acc = antithetic(alpha, phi, t, draws, seed, 3,
                                     [si, ti](const std::vector<double>& z, double sign) {
                                       return std::exp(sign * (z[si] + z[ti]));
                                     });
  return make_check(
      fmt("cross_moment", {{"alpha", alpha}, {"phi", phi}, {"s", double(s)}, {"t", double(t)}}),
      acc, log_cross_moment(alpha, phi, s, t));
}

MomentCheck check_conditional_mean(double alpha, double phi, double z_prev, std::int64_t draws,
                                   std::uint64_t seed) {
  require_draws(draws);
  require_phi(phi);
  GaussianStream eta(RngSeed{derive_seed(seed, 4), 0}, Series::Oracle);
  Accumulator acc;
  const double centre = phi * z_prev;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double shock = alpha * eta();
    acc.add(0.5 * (std::exp(centre + shock) + std::exp(centre - shock)));
  }
  return make_check(fmt("conditional_mean", {{"alpha", alpha}, {"phi", phi}, {"z", z_prev}}), acc,
                    log_conditional_mean(alpha, phi, z_prev));
}

std::vector<MomentCheck> check_conditional_mean_grid(double alpha, double phi,
                                                     const std::vector<double>& z_grid,
                                                     std::int64_t draws, std::uint64_t seed) {
  std::vector<MomentCheck> out;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    out.push_back(check_conditional_mean(alpha, phi, z_grid[i], draws, derive_seed(seed, i)));
  }
  return out;
}

Eq6Report check_eq6_convergence(const ModelParams& params, const std::vector<std::int64_t>& n_grid,
                                std::int64_t paths, std::uint64_t seed, double tolerance) {
  if (params.regime != Regime::NearStationary) {
    throw UsageError("Eq6 diagnostic needs the near-stationary regime");
  }
  if (n_grid.empty() || paths < 2) throw UsageError("Eq6 diagnostic needs a grid and >= 2 paths");
  Eq6Report report;
  report.target = 1.0 / (2.0 * params.c);
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    ModelParams p = params;
    p.n = n_grid[g];
    const VolatilityScales sc = scales(p);
    const PathCoefficients coef = resolve_coefficients(p);
    const std::uint64_t base = derive_seed(seed, 0x600 + g);
    Accumulator acc;
    for (std::int64_t j = 0; j < paths; ++j) {
      const SimulatedPath path = simulate_path(coef, p.n, RngSeed{base, std::uint64_t(j)});
      acc.add(normalized_sum_squares(path, p, sc));
    }
    report.entries.push_back({p.n, acc.mean, acc.std_error(), std::abs(acc.mean - report.target)});
  }
  const Eq6Entry& first = report.entries.front();
  const Eq6Entry& last = report.entries.back();
  report.passed = last.abs_error < first.abs_error && last.abs_error <= tolerance * report.target;
  return report;
}

WnVnReport check_wnvn(const ModelParams& params, std::int64_t paths, std::uint64_t seed) {
  if (params.regime != Regime::MildlyExplosive) {
    throw UsageError("(W_n, V_n) check needs the mildly explosive regime");
  }
  if (paths < 10) throw UsageError("(W_n, V_n) check needs at least 10 paths");
  const VolatilityScales sc = scales(params);
  const PathCoefficients coef = resolve_coefficients(params);
  const double log_rho = log_rho_n(params);
  const double log_norm = 0.5 * (sc.log_l_n() + std::log(eval_sequence(params.kn, params.n)));
  const auto n = static_cast<std::size_t>(params.n);

  // weight_w[j-1] = rho^{-j} / sqrt(l k), weight_v[j-1] = rho^{-(n-j+1)} / sqrt(l k)
  std::vector<double> weight_w(n), weight_v(n);
  for (std::size_t j = 1; j <= n; ++j) {
    weight_w[j - 1] = std::exp(-static_cast<double>(j) * log_rho - log_norm);
    weight_v[j - 1] = std::exp(-static_cast<double>(n - j + 1) * log_rho - log_norm);
  }

  std::vector<double> w(static_cast<std::size_t>(paths)), v(w.size());
  const std::uint64_t base = derive_seed(seed, 0x700);
  for (std::int64_t b = 0; b < paths; ++b) {
    const SimulatedPath path = simulate_path(coef, params.n, RngSeed{base, std::uint64_t(b)});
    double sw = 0.0, sv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sw += weight_w[j] * path.u[j];
      sv += weight_v[j] * path.u[j];
    }
    w[static_cast<std::size_t>(b)] = sw;
    v[static_cast<std::size_t>(b)] = sv;
  }

  const auto count = static_cast<double>(paths);
  auto moments = [count](const std::vector<double>& x, double& mean, double& var, double& m4) {
    mean = 0.0;
    for (double e : x) mean += e;
    mean /= count;
    double s2 = 0.0, s4 = 0.0;
    for (double e : x) {
      const double dev2 = (e - mean) * (e - mean);
      s2 += dev2;
      s4 += dev2 * dev2;
    }
    var = s2 / (count - 1.0);
    m4 = s4 / count;
  };
  double mw, vw, m4w, mv, vv, m4v;
  moments(w, mw, vw, m4w);
  moments(v, mv, vv, m4v);
  double cov = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) cov += (w[b] - mw) * (v[b] - mv);
  cov /= (count - 1.0);

  WnVnReport r;
  r.paths = paths;
  r.target_variance = 1.0 / (2.0 * params.c);
  r.var_w = vw;
  r.var_v = vv;
  r.se_var_w = std::sqrt(std::max(m4w - vw * vw, 0.0) / count);
  r.se_var_v = std::sqrt(std::max(m4v - vv * vv, 0.0) / count);
  r.correlation = cov / std::sqrt(vw * vv);
  r.se_correlation = 1.0 / std::sqrt(count);
  r.passed = std::abs(r.var_w - r.target_variance) <= kMomentZThreshold * r.se_var_w &&
             std::abs(r.var_v - r.target_variance) <= kMomentZThreshold * r.se_var_v &&
             std::abs(r.correlation) <= kMomentZThreshold * r.se_correlation;
  return r;
}

RateReport check_rate_condition(const ModelParams& params) {
  if (!(params.d > 0.0)) throw DomainError("d must be positive");
  const double k = eval_sequence(params.kn, params.n);
  const double log_r = std::log(eval_sequence(params.rn, params.n));
  const double n = static_cast<double>(params.n);
  const double a2 = params.alpha * params.alpha;
  RateReport r;
  r.second_moment_ratio = k * std::exp(log_r * a2 / (4.0 * params.d)) / n;
  r.fourth_moment_ratio = k * std::exp(log_r * a2 / params.d) / n;
  r.flagged = r.second_moment_ratio >= 0.5 || r.fourth_moment_ratio >= 0.5;
  return r;
}

bool VerifyReport::all_passed() const {
  for (const auto& m : moments) {
    if (!m.passed()) return false;
  }
  for (const auto& e : eq6) {
    if (!e.passed) return false;
  }
  for (const auto& w : wnvn) {
    if (!w.passed) return false;
  }
  return true;
}

VerifyReport run_verification(const VerifyOptions& options) {
  require_draws(options.draws);
  VerifyReport report;
  const std::int64_t draws = options.draws;
  std::uint64_t tag = 0;
  auto next_seed = [&] { return derive_seed(options.seed, 0x1000 + tag++); };

  struct Design {
    double alpha;
    double phi;
  };
  std::vector<Design> designs = {{0.0, 0.5}, {0.0, 0.9}};
  if (!options.homoskedastic_only) {
    // phi = 1 - 1/log log 1000 is the volatility persistence of the n = 1000 tables.
    const double table_phi = 1.0 - 1.0 / std::log(std::log(1000.0));
    designs.insert(designs.end(), {{0.5, 0.9}, {0.5, 0.5}, {0.5, table_phi}, {0.7, 0.8}});
  }

  for (const Design& d : designs) {
    for (std::int64_t t : {1, 3, 10}) {
      report.moments.push_back(check_mean_sigma2(d.alpha, d.phi, t, draws, next_seed()));
    }
    for (std::int64_t t : {2, 5}) {
      report.moments.push_back(check_fourth_moment(d.alpha, d.phi, t, draws, next_seed()));
    }
    report.moments.push_back(check_cross_moment(d.alpha, d.phi, 2, 4, draws, next_seed()));
    report.moments.push_back(check_cross_moment(d.alpha, d.phi, 3, 3, draws, next_seed()));
    report.moments.push_back(check_cross_moment(d.alpha, d.phi, 2, 12, draws, next_seed()));
    for (const MomentCheck& c :
         check_conditional_mean_grid(d.alpha, d.phi, {-1.0, 0.0, 1.0}, draws, next_seed())) {
      report.moments.push_back(c);
    }
  }

  if (!options.diagnostics) return report;

  ModelParams homo;
  homo.c = 1.0;
  homo.alpha = 0.0;
  homo.kn = SequenceSpec::power_of_n(0.25);
  homo.regime = Regime::NearStationary;
  report.eq6.push_back(check_eq6_convergence(homo, {1000, 10000, 100000}, 200, next_seed()));

  if (!options.homoskedastic_only) {
    ModelParams sv = homo;
    sv.alpha = 0.5;
    sv.d = 1.0;
    report.eq6.push_back(check_eq6_convergence(sv, {1000, 10000, 100000}, 200, next_seed()));
  }

  ModelParams expl;
  expl.n = 300;
  expl.c = 0.5;
  expl.d = 1.0;
  expl.alpha = options.homoskedastic_only ? 0.0 : 0.5;
  expl.kn = SequenceSpec::power_of_n(0.5);
  expl.regime = Regime::MildlyExplosive;
  report.wnvn.push_back(check_wnvn(expl, 2000, next_seed()));

  for (double a : {0.1, 0.25, 0.5, 1.0}) {
    ModelParams p = homo;
    p.alpha = options.homoskedastic_only ? 0.0 : 0.5;
    p.kn = a == 1.0 ? SequenceSpec::linear_n() : SequenceSpec::power_of_n(a);
    report.rates.push_back(check_rate_condition(p));
    report.rate_labels.push_back("n=1000,kn=" + p.kn.to_string() + ",alpha=" +
                                 (options.homoskedastic_only ? std::string("0") : "0.5"));
  }
  return report;
}

}  // namespace dl2u
