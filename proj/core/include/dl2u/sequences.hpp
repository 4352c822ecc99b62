#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dl2u {

/// Rate sequence indexed by the sample size n: a constant, log n, n^a or n.
struct SequenceSpec {
  enum class Kind { Constant, LogOfN, PowerOfN, LinearN };

  Kind kind = Kind::LogOfN;
  /// Constant value for `Constant`, exponent a for `PowerOfN`, unused otherwise.
  double value = 0.0;

  static SequenceSpec constant(double v);
  static SequenceSpec log_of_n();
  static SequenceSpec power_of_n(double exponent);
  static SequenceSpec linear_n();

  /// Parses the command-line form: `const:<v>`, `log`, `pow:<a>`, `lin`.
  static SequenceSpec parse(std::string_view text);

  /// Inverse of `parse`; also used as the table row label.
  std::string to_string() const;

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

enum class Regime { NearStationary, MildlyExplosive };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

struct ModelParams {
  double c = 1.0;
  double d = 1.0;
  double alpha = 0.0;
  std::int64_t n = 1000;
  SequenceSpec kn = SequenceSpec::power_of_n(0.25);
  SequenceSpec rn = SequenceSpec::log_of_n();
  Regime regime = Regime::NearStationary;
  double y0 = 0.0;
  double z0 = 0.0;
};

/// Smallest admissible sample size; log log n is negative below e.
inline constexpr std::int64_t kMinSampleSize = 3;

double eval_sequence(const SequenceSpec& spec, std::int64_t n);

/// 1 - c/k_n (near-stationary) or 1 + c/k_n (mildly explosive).
double rho_n(const ModelParams& params);

/// log rho_n, evaluated with log1p so that n * log rho_n keeps full precision.
double log_rho_n(const ModelParams& params);

/// 1 - d / log r_n. Throws DomainError naming the smallest admissible n
/// when log r_n <= d.
double phi_n(const ModelParams& params);

/// Volatility persistence actually used by the simulator: phi_n when
/// alpha > 0, and 0 for the homoskedastic case where it has no effect.
double effective_phi(const ModelParams& params);

/// Closed-form volatility scales for a fixed (phi, alpha, n). Every
/// exponential quantity is kept in log space; the direct-space accessors
/// may return +inf when the value is not representable.
class VolatilityScales {
 public:
  VolatilityScales(double phi, double alpha, std::int64_t n, double log_rn, double d);

  double phi() const noexcept { return phi_; }
  double alpha() const noexcept { return alpha_; }
  std::int64_t n() const noexcept { return n_; }

  /// Dispersion factor (1 - phi^{2t}) / (2 (1 - phi^2)).
  double A(std::int64_t t) const;
  /// Limit of A_t as t grows.
  double A_infinity() const;

  /// x_t = E[sigma_t^2] = exp(alpha^2 A_t).
  double log_x(std::int64_t t) const { return alpha_ * alpha_ * A(t); }
  double x(std::int64_t t) const;

  /// m_n = (1/n) sum_{t=1}^n x_t, accumulated with log-sum-exp.
  double log_m_n() const noexcept { return log_m_n_; }
  double m_n() const;

  /// Long-run scale exp(alpha^2 / (2 (1 - phi^2))).
  double log_l_n() const noexcept { return alpha_ * alpha_ * A_infinity(); }
  double l_n() const;

  /// Dependence cutoff floor((log r_n / (2d)) log(log r_n / delta_n)).
  std::int64_t M_n() const noexcept { return M_n_; }
  double delta_n() const noexcept { return delta_n_; }
  double Z_n() const noexcept { return phi_ * phi_; }

 private:
  double phi_;
  double alpha_;
  std::int64_t n_;
  double log_m_n_;
  std::int64_t M_n_;
  double delta_n_;
};

VolatilityScales scales(const ModelParams& params);

/// Numerically stable log(sum exp(v)). Returns -inf for an empty range.
double log_sum_exp(const std::vector<double>& values);

}  // namespace dl2u
