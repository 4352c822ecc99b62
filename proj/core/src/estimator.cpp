#include "dl2u/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dl2u/errors.hpp"

namespace dl2u {

namespace {

constexpr double kLogMax = 709.782712893384;  // log(DBL_MAX)

void require_regime(const ModelParams& params, Regime expected, const char* what) {
  if (params.regime != expected) {
    throw UsageError(std::string(what) + " requires the " +
                     std::string(to_string(expected)) + " regime");
  }
}

// sign(a) * exp(log|a| + log_scale), with overflow reported instead of inf.
double scaled(double a, double log_scale, const std::string& context) {
  if (a == 0.0) return 0.0;
  const double log_abs = std::log(std::abs(a)) + log_scale;
  if (log_abs > kLogMax) {
    throw OverflowError("explosive normalisation overflows: " + context);
  }
  return std::copysign(std::exp(log_abs), a);
}

std::string describe_power(double n, double log_rho) {
  std::ostringstream os;
  os.precision(10);
  os << "n*log(rho_n) = " << n * log_rho;
  return os.str();
}

}  // namespace

OlsResult ols_rho(std::span<const double> y) {
  if (y.size() < 2) throw InputError("OLS needs at least two observations");
  OlsResult r;
  for (std::size_t t = 1; t < y.size(); ++t) {
    r.numerator += y[t - 1] * y[t];
    r.denominator += y[t - 1] * y[t - 1];
  }
  if (!(r.denominator >= kDegenerateDenominator)) {
    throw DegeneratePathError("degenerate path: sum of squared regressors is zero");
  }
  r.rho_hat = r.numerator / r.denominator;
  return r;
}

OlsResult ols_rho(const SimulatedPath& path) {
  OlsResult r = ols_rho(std::span<const double>(path.y));
  if (path.u.size() + 1 != path.y.size()) return r;
  double score = 0.0;
  for (std::size_t t = 1; t < path.y.size(); ++t) score += path.y[t - 1] * path.u[t - 1];
  r.score = score;
  return r;
}

double rho_deviation(const OlsResult& ols, double rho) {
  return ols.score ? *ols.score / ols.denominator : ols.rho_hat - rho;
}

PivotValue pivot_T(const OlsResult& ols, const ModelParams& params) {
  require_regime(params, Regime::NearStationary, "pivot_T");
  const double k = eval_sequence(params.kn, params.n);
  const double dev = rho_deviation(ols, rho_n(params));
  return {PivotKind::NearStationaryT, std::sqrt(static_cast<double>(params.n) * k) * dev,
          TargetLaw::normal(2.0 * params.c)};
}

PivotValue pivot_S(const OlsResult& ols, const ModelParams& params) {
  require_regime(params, Regime::MildlyExplosive, "pivot_S");
  if (!(params.c > 0.0)) throw DomainError("pivot_S needs c > 0");
  const double k = eval_sequence(params.kn, params.n);
  const double log_rho = log_rho_n(params);
  const double n = static_cast<double>(params.n);
  const double dev = rho_deviation(ols, rho_n(params));
  const double log_scale = n * log_rho + std::log(k) - std::log(2.0 * params.c);
  return {PivotKind::ExplosiveS, scaled(dev, log_scale, describe_power(n, log_rho)),
          TargetLaw::cauchy()};
}

PivotValue pivot(const OlsResult& ols, const ModelParams& params) {
  return params.regime == Regime::NearStationary ? pivot_T(ols, params) : pivot_S(ols, params);
}

std::vector<double> sign_flip(std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t t = 1; t < out.size(); t += 2) out[t] = -out[t];
  return out;
}

double normalized_sum_squares(const SimulatedPath& path, const ModelParams& params,
                              const VolatilityScales& scales) {
  require_regime(params, Regime::NearStationary, "normalized_sum_squares");
  double sum = 0.0;
  for (std::size_t t = 1; t < path.y.size(); ++t) sum += path.y[t] * path.y[t];
  if (sum == 0.0) return 0.0;
  const double k = eval_sequence(params.kn, params.n);
  return std::exp(std::log(sum) - std::log(static_cast<double>(params.n)) - std::log(k) -
                  scales.log_m_n());
}

std::pair<double, double> explosive_pair(const SimulatedPath& path, const ModelParams& params,
                                         const VolatilityScales& scales) {
  require_regime(params, Regime::MildlyExplosive, "explosive_pair");
  double cross = 0.0;
  double squares = 0.0;
  for (std::size_t t = 1; t < path.y.size(); ++t) {
    cross += path.y[t - 1] * path.u[t - 1];
    squares += path.y[t - 1] * path.y[t - 1];
  }
  const double n = static_cast<double>(params.n);
  const double log_rho = log_rho_n(params);
  const double log_k = std::log(eval_sequence(params.kn, params.n));
  const std::string context = describe_power(n, log_rho);
  return {scaled(cross, -n * log_rho - scales.log_l_n() - log_k, context),
          scaled(squares, -2.0 * n * log_rho - scales.log_l_n() - 2.0 * log_k, context)};
}

}  // namespace dl2u
