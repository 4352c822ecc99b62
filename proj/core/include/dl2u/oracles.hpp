#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dl2u/sequences.hpp"

namespace dl2u {

/// Monte Carlo estimate of a lognormal moment against its closed form.
struct MomentCheck {
  std::string label;
  double mc_estimate = 0.0;
  double closed_form = 0.0;
  double mc_std_error = 0.0;
  double z_score = 0.0;

  bool passed() const;
};

inline constexpr double kMomentZThreshold = 4.0;
inline constexpr std::int64_t kMinOracleDraws = 100000;

// Closed forms, all in log space. z_t = phi z_{t-1} + eta_t, z_0 = 0,
// eta ~ N(0, alpha^2); A_t = (1 - phi^{2t}) / (2 (1 - phi^2)).

/// log E[exp(z_t)] = alpha^2 A_t.
double log_mean_sigma2(double alpha, double phi, std::int64_t t);
/// log E[exp(2 z_t)] = 4 alpha^2 A_t.
double log_fourth_moment(double alpha, double phi, std::int64_t t);
/// log E[exp(z_s + z_t)] = alpha^2 (A_s + A_t + 2 phi^{t-s} A_s), s <= t.
double log_cross_moment(double alpha, double phi, std::int64_t s, std::int64_t t);
/// log E[exp(phi z + eta)] = phi z + alpha^2 / 2.
double log_conditional_mean(double alpha, double phi, double z_prev);

// Monte Carlo checks. `draws` counts antithetic pairs (eta, -eta) and must be
// at least kMinOracleDraws. Deterministic in `seed`.

MomentCheck check_mean_sigma2(double alpha, double phi, std::int64_t t, std::int64_t draws,
                              std::uint64_t seed);
MomentCheck check_fourth_moment(double alpha, double phi, std::int64_t t, std::int64_t draws,
                                std::uint64_t seed);
MomentCheck check_cross_moment(double alpha, double phi, std::int64_t s, std::int64_t t,
                               std::int64_t draws, std::uint64_t seed);
MomentCheck check_conditional_mean(double alpha, double phi, double z_prev, std::int64_t draws,
                                   std::uint64_t seed);

/// Conditional-mean checks over a grid of lagged log-variances.
std::vector<MomentCheck> check_conditional_mean_grid(double alpha, double phi,
                                                     const std::vector<double>& z_grid,
                                                     std::int64_t draws, std::uint64_t seed);

// --- convergence diagnostics ---------------------------------------------

struct Eq6Entry {
  std::int64_t n = 0;
  double mean = 0.0;       // mean over paths of sum y_t^2 / (n k_n m_n)
  double std_error = 0.0;
  double abs_error = 0.0;  // |mean - 1/(2c)|
};

struct Eq6Report {
  double target = 0.0;
  std::vector<Eq6Entry> entries;
  /// Final error below the first, and final mean within `tolerance` (relative) of target.
  bool passed = false;
};

/// Normalized sum of squares along a grid of sample sizes (params.n is
/// replaced by each grid value). Near-stationary regime only.
Eq6Report check_eq6_convergence(const ModelParams& params, const std::vector<std::int64_t>& n_grid,
                                std::int64_t paths, std::uint64_t seed, double tolerance = 0.15);

struct WnVnReport {
  double target_variance = 0.0;  // 1/(2c)
  double var_w = 0.0;
  double var_v = 0.0;
  double se_var_w = 0.0;
  double se_var_v = 0.0;
  double correlation = 0.0;
  double se_correlation = 0.0;
  std::int64_t paths = 0;
  bool passed = false;  // all three within 4 standard errors
};

/// W_n = sum_j rho^{-j} u_j / sqrt(l_n k_n), V_n = sum_j rho^{-(n-j+1)} u_j / sqrt(l_n k_n)
/// over `paths` simulated explosive paths.
WnVnReport check_wnvn(const ModelParams& params, std::int64_t paths, std::uint64_t seed);

struct RateReport {
  double second_moment_ratio = 0.0;  // k_n r_n^{alpha^2/(4d)} / n
  double fourth_moment_ratio = 0.0;  // k_n r_n^{alpha^2/d} / n
  bool flagged = false;              // either ratio >= 0.5
};

RateReport check_rate_condition(const ModelParams& params);

// --- default suite --------------------------------------------------------

struct VerifyOptions {
  std::int64_t draws = kMinOracleDraws;
  std::uint64_t seed = 0;
  /// Only the alpha = 0 moment checks (all must hold with z = 0 exactly).
  bool homoskedastic_only = false;
  /// Adds the Eq6, (W_n, V_n) and rate diagnostics.
  bool diagnostics = true;
};

struct VerifyReport {
  std::vector<MomentCheck> moments;
  std::vector<Eq6Report> eq6;
  std::vector<WnVnReport> wnvn;
  std::vector<RateReport> rates;
  std::vector<std::string> rate_labels;

  bool all_passed() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace dl2u
