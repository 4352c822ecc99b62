#include "dl2u/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dl2u/errors.hpp"

namespace dl2u {

namespace {

std::vector<double> volatility_series(const PathCoefficients& coef, std::int64_t n, RngSeed seed) {
  std::vector<double> sigma2(static_cast<std::size_t>(n) + 1);
  double z = coef.z0;
  sigma2[0] = std::exp(z);
  if (coef.alpha == 0.0) {
    // No shocks: z_t = phi^t z0 decays deterministically.
    for (std::int64_t t = 1; t <= n; ++t) {
      z *= coef.phi;
      sigma2[static_cast<std::size_t>(t)] = std::exp(z);
    }
    return sigma2;
  }
  GaussianStream eta(seed, Series::Volatility);
  for (std::int64_t t = 1; t <= n; ++t) {
    z = coef.phi * z + coef.alpha * eta();
    sigma2[static_cast<std::size_t>(t)] = std::exp(z);
  }
  return sigma2;
}

}  // namespace

PathCoefficients resolve_coefficients(const ModelParams& params) {
  if (params.n < 0) throw DomainError("path length must be nonnegative");
  ModelParams at = params;
  at.n = std::max(params.n, kMinSampleSize);
  return {rho_n(at), effective_phi(at), params.alpha, params.y0, params.z0};
}

std::vector<double> simulate_volatility(const ModelParams& params, RngSeed seed) {
  return volatility_series(resolve_coefficients(params), params.n, seed);
}

SimulatedPath simulate_path(const ModelParams& params, RngSeed seed) {
  return simulate_path(resolve_coefficients(params), params.n, seed);
}

SimulatedPath simulate_path(const PathCoefficients& coef, std::int64_t n, RngSeed seed) {
  if (n < 0) throw DomainError("path length must be nonnegative");
  SimulatedPath path;
  path.sigma2 = volatility_series(coef, n, seed);
  path.y.resize(static_cast<std::size_t>(n) + 1);
  path.u.resize(static_cast<std::size_t>(n));
  path.y[0] = coef.y0;

  GaussianStream eps(seed, Series::Innovation);
  const bool unit_variance = coef.alpha == 0.0 && coef.z0 == 0.0;
  double y = coef.y0;
  for (std::size_t t = 1; t <= static_cast<std::size_t>(n); ++t) {
    const double e = eps();
    const double u = unit_variance ? e : std::sqrt(path.sigma2[t]) * e;
    y = coef.rho * y + u;
    if (!std::isfinite(y)) {
      throw OverflowError("y_t overflowed at t = " + std::to_string(t) + " (seed " +
                              std::to_string(seed.base) + "/" + std::to_string(seed.stream) + ")",
                          t);
    }
    path.u[t - 1] = u;
    path.y[t] = y;
  }
  return path;
}

}  // namespace dl2u
