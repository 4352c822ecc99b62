#pragma once

#include <vector>

#include "dl2u/rng.hpp"
#include "dl2u/sequences.hpp"

namespace dl2u {

/// One realisation of
///   y_t = rho_n y_{t-1} + u_t,  u_t = sigma_t eps_t,
///   log sigma_t^2 = phi_n log sigma_{t-1}^2 + eta_t.
/// `y` and `sigma2` hold t = 0..n, `u` holds t = 1..n (u[t-1] is u_t).
struct SimulatedPath {
  std::vector<double> y;
  std::vector<double> sigma2;
  std::vector<double> u;

  std::size_t n() const noexcept { return u.size(); }
};

/// Coefficients a path is generated with, resolved once from ModelParams.
struct PathCoefficients {
  double rho = 1.0;
  double phi = 0.0;
  double alpha = 0.0;
  double y0 = 0.0;
  double z0 = 0.0;
};

/// Evaluates rho_n and phi_n at params.n. Paths shorter than the smallest
/// admissible sample size evaluate the rate sequences at n = 3.
PathCoefficients resolve_coefficients(const ModelParams& params);

/// sigma_t^2 for t = 0..n; eta_t = alpha * N(0,1) from the Volatility substream.
std::vector<double> simulate_volatility(const ModelParams& params, RngSeed seed);

/// Full path; eps_t comes from the Innovation substream, so eps and eta are
/// independent and alpha = 0 reproduces a plain AR(1) path draw for draw.
/// Throws OverflowError carrying the first t with a non-finite y_t.
SimulatedPath simulate_path(const ModelParams& params, RngSeed seed);
SimulatedPath simulate_path(const PathCoefficients& coef, std::int64_t n, RngSeed seed);

}  // namespace dl2u
