#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dl2u/dgp.hpp"
#include "dl2u/ks.hpp"
#include "dl2u/sequences.hpp"

namespace dl2u {

/// Sums below this are treated as a zero regressor.
inline constexpr double kDegenerateDenominator = 1e-300;

/// Least-squares fit of y_t on y_{t-1} (no intercept).
struct OlsResult {
  double rho_hat = 0.0;
  /// sum_{t=1}^n y_{t-1} y_t
  double numerator = 0.0;
  /// sum_{t=1}^n y_{t-1}^2
  double denominator = 0.0;
  /// sum_{t=1}^n y_{t-1} u_t, present when the innovations are known.
  /// rho_hat - rho_n is then score / denominator, which keeps its relative
  /// precision even when rho_n^n is astronomically large.
  std::optional<double> score;
};

OlsResult ols_rho(std::span<const double> y);
/// Also fills `score` when the path carries its n innovations.
OlsResult ols_rho(const SimulatedPath& path);

/// rho_hat - rho_n, from the score when available.
double rho_deviation(const OlsResult& ols, double rho);

enum class PivotKind { NearStationaryT, ExplosiveS };

struct PivotValue {
  PivotKind kind = PivotKind::NearStationaryT;
  double value = 0.0;
  TargetLaw target;
};

/// sqrt(n k_n) (rho_hat - rho_n), target N(0, 2c).
PivotValue pivot_T(const OlsResult& ols, const ModelParams& params);

/// rho_n^n k_n / (2c) (rho_hat - rho_n), target standard Cauchy. The power is
/// combined in log space; OverflowError if the result is not representable.
PivotValue pivot_S(const OlsResult& ols, const ModelParams& params);

/// Dispatches on params.regime.
PivotValue pivot(const OlsResult& ols, const ModelParams& params);

/// y*_t = (-1)^t y_t; maps a root near -1 to one near +1.
std::vector<double> sign_flip(std::span<const double> y);

/// sum_{t=1}^n y_t^2 / (n k_n m_n); converges to 1/(2c).
double normalized_sum_squares(const SimulatedPath& path, const ModelParams& params,
                              const VolatilityScales& scales);

/// ( rho_n^{-n}  sum y_{t-1} u_t   / (l_n k_n),
///   rho_n^{-2n} sum y_{t-1}^2     / (l_n k_n^2) ).
/// The second coordinate uses the lagged sum, so that
///   first / second == rho_n^n k_n (rho_hat - rho_n) == 2c * S_n
/// holds exactly rather than asymptotically.
std::pair<double, double> explosive_pair(const SimulatedPath& path, const ModelParams& params,
                                         const VolatilityScales& scales);

}  // namespace dl2u
