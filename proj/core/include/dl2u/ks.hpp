#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "dl2u/sequences.hpp"

namespace dl2u {

/// Reference law for a one-sample KS test.
struct TargetLaw {
  enum class Kind { Normal, StandardCauchy, StandardUniform };

  Kind kind = Kind::Normal;
  double variance = 1.0;  // Normal only

  static TargetLaw normal(double variance);
  static TargetLaw cauchy() { return {Kind::StandardCauchy, 1.0}; }
  static TargetLaw uniform() { return {Kind::StandardUniform, 1.0}; }
  /// N(0, 2c) in the near-stationary regime, standard Cauchy otherwise.
  static TargetLaw for_params(const ModelParams& params);

  std::string name() const;

  friend bool operator==(const TargetLaw&, const TargetLaw&) = default;
};

double cdf(const TargetLaw& law, double x);
double density(const TargetLaw& law, double x);

struct KsResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  std::size_t sample_size = 0;

  friend bool operator==(const KsResult&, const KsResult&) = default;
};

/// sup_x |F_m(x) - F(x)| for the empirical CDF of `sample`.
/// Throws InputError on an empty sample or a NaN entry.
double ks_statistic(std::span<const double> sample, const TargetLaw& law);

/// Asymptotic Kolmogorov tail probability at
/// lambda = (sqrt(m) + 0.12 + 0.11 / sqrt(m)) d.
double ks_pvalue(double d, std::size_t m);

KsResult ks_test(std::span<const double> sample, const TargetLaw& law);

}  // namespace dl2u
