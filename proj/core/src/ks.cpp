#include "dl2u/ks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "dl2u/errors.hpp"

namespace dl2u {

namespace {

constexpr double kSeriesTolerance = 1e-12;
constexpr int kMaxTerms = 200;
// Below this lambda the alternating series converges slowly; the
// Jacobi-theta form of the same function converges in a few terms.
constexpr double kSeriesSwitch = 1.18;

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double p = 0.0;
  if (lambda < kSeriesSwitch) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      sum += term;
      if (term < kSeriesTolerance * sum || term == 0.0) break;
    }
    p = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      p += sign * term;
      if (term < kSeriesTolerance) break;
      sign = -sign;
    }
    p *= 2.0;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TargetLaw TargetLaw::normal(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw DomainError("normal target needs a positive finite variance");
  }
  return {Kind::Normal, variance};
}

TargetLaw TargetLaw::for_params(const ModelParams& params) {
  return params.regime == Regime::NearStationary ? normal(2.0 * params.c) : cauchy();
}

std::string TargetLaw::name() const {
  switch (kind) {
    case Kind::Normal: {
      std::ostringstream os;
      os.precision(17);
      os << "normal(0," << variance << ")";
      return os.str();
    }
    case Kind::StandardCauchy:
      return "cauchy(0,1)";
    case Kind::StandardUniform:
      return "uniform(0,1)";
  }
  return {};
}

double cdf(const TargetLaw& law, double x) {
  switch (law.kind) {
    case TargetLaw::Kind::Normal:
      return 0.5 * std::erfc(-x / std::sqrt(2.0 * law.variance));
    case TargetLaw::Kind::StandardCauchy:
      return 0.5 + std::atan(x) / std::numbers::pi;
    case TargetLaw::Kind::StandardUniform:
      return std::clamp(x, 0.0, 1.0);
  }
  return 0.0;
}

double density(const TargetLaw& law, double x) {
  switch (law.kind) {
    case TargetLaw::Kind::Normal:
      return std::exp(-0.5 * x * x / law.variance) /
             std::sqrt(2.0 * std::numbers::pi * law.variance);
    case TargetLaw::Kind::StandardCauchy:
      return 1.0 / (std::numbers::pi * (1.0 + x * x));
    case TargetLaw::Kind::StandardUniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  }
  return 0.0;
}

double ks_statistic(std::span<const double> sample, const TargetLaw& law) {
  if (sample.empty()) throw InputError("KS statistic needs a nonempty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return std::isnan(v); })) {
    throw InputError("KS sample contains NaN");
  }
  std::stable_sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(law, sorted[i]);
    const double below = f - static_cast<double>(i) / m;
    const double above = static_cast<double>(i + 1) / m - f;
    d = std::max({d, below, above});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t m) {
  if (m == 0) throw InputError("KS p-value needs m >= 1");
  if (!(d >= 0.0 && d <= 1.0)) throw InputError("KS distance must lie in [0, 1]");
  const double root_m = std::sqrt(static_cast<double>(m));
  return kolmogorov_tail((root_m + 0.12 + 0.11 / root_m) * d);
}

KsResult ks_test(std::span<const double> sample, const TargetLaw& law) {
  const double d = ks_statistic(sample, law);
  return {d, ks_pvalue(d, sample.size()), sample.size()};
}

}  // namespace dl2u
