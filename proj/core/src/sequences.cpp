#include "dl2u/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "dl2u/errors.hpp"

namespace dl2u {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

// Shortest text that parses back to the same double.
std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// log r_n, with the sequence evaluated at n.
double log_sequence(const SequenceSpec& spec, std::int64_t n) {
  return std::log(eval_sequence(spec, n));
}

// Smallest integer n >= kMinSampleSize with log(spec(n)) > d, or -1 if none.
std::int64_t smallest_admissible_n(const SequenceSpec& spec, double d) {
  double threshold = 0.0;  // log(spec(n)) > d  <=>  n > threshold
  switch (spec.kind) {
    case SequenceSpec::Kind::Constant:
      return std::log(spec.value) > d ? kMinSampleSize : -1;
    case SequenceSpec::Kind::LogOfN:
      threshold = std::exp(std::exp(d));
      break;
    case SequenceSpec::Kind::PowerOfN:
      threshold = std::exp(d / spec.value);
      break;
    case SequenceSpec::Kind::LinearN:
      threshold = std::exp(d);
      break;
  }
  if (!(threshold < 9.0e18)) return -1;
  auto n = std::max<std::int64_t>(kMinSampleSize, static_cast<std::int64_t>(std::floor(threshold)));
  while (log_sequence(spec, n) <= d) ++n;
  return n;
}

}  // namespace

SequenceSpec SequenceSpec::constant(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError("constant sequence value must be positive and finite");
  }
  return {Kind::Constant, v};
}

SequenceSpec SequenceSpec::log_of_n() { return {Kind::LogOfN, 0.0}; }

SequenceSpec SequenceSpec::power_of_n(double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw UsageError("power sequence exponent must lie in (0, 1]");
  }
  return {Kind::PowerOfN, exponent};
}

SequenceSpec SequenceSpec::linear_n() { return {Kind::LinearN, 0.0}; }

SequenceSpec SequenceSpec::parse(std::string_view text) {
  if (text == "log") return log_of_n();
  if (text == "lin") return linear_n();
  if (text.starts_with("const:")) return constant(parse_number(text.substr(6), "constant"));
  if (text.starts_with("pow:")) return power_of_n(parse_number(text.substr(4), "exponent"));
  throw UsageError("unknown sequence '" + std::string(text) + "' (expected const:<v>|log|pow:<a>|lin)");
}

std::string SequenceSpec::to_string() const {
  switch (kind) {
    case Kind::Constant:
      return "const:" + format_number(value);
    case Kind::LogOfN:
      return "log";
    case Kind::PowerOfN:
      return "pow:" + format_number(value);
    case Kind::LinearN:
      return "lin";
  }
  return {};
}

std::string_view to_string(Regime regime) {
  return regime == Regime::NearStationary ? "stat" : "expl";
}

Regime parse_regime(std::string_view text) {
  if (text == "stat") return Regime::NearStationary;
  if (text == "expl") return Regime::MildlyExplosive;
  throw UsageError("unknown regime '" + std::string(text) + "' (expected stat|expl)");
}

double eval_sequence(const SequenceSpec& spec, std::int64_t n) {
  if (n < kMinSampleSize) {
    throw DomainError("rate sequences are defined for n >= 3, got n = " + std::to_string(n));
  }
  const auto nd = static_cast<double>(n);
  switch (spec.kind) {
    case SequenceSpec::Kind::Constant:
      return spec.value;
    case SequenceSpec::Kind::LogOfN:
      return std::log(nd);
    case SequenceSpec::Kind::PowerOfN:
      // a == 1 goes through the same branch as LinearN so both agree bit for bit.
      return spec.value == 1.0 ? nd : std::pow(nd, spec.value);
    case SequenceSpec::Kind::LinearN:
      return nd;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double rho_n(const ModelParams& params) {
  if (!(params.c >= 0.0)) throw DomainError("c must be nonnegative");
  const double k = eval_sequence(params.kn, params.n);
  if (params.regime == Regime::NearStationary) {
    if (params.c > 0.0 && k <= params.c) {
      throw DomainError("near-stationary root needs k_n > c (k_n = " + format_number(k) +
                        ", c = " + format_number(params.c) + ")");
    }
    return 1.0 - params.c / k;
  }
  return 1.0 + params.c / k;
}

double log_rho_n(const ModelParams& params) {
  (void)rho_n(params);  // domain checks
  const double ratio = params.c / eval_sequence(params.kn, params.n);
  return params.regime == Regime::NearStationary ? std::log1p(-ratio) : std::log1p(ratio);
}

double phi_n(const ModelParams& params) {
  if (!(params.d > 0.0)) throw DomainError("d must be positive");
  const double log_r = log_sequence(params.rn, params.n);
  if (log_r <= params.d) {
    const auto n_min = smallest_admissible_n(params.rn, params.d);
    std::string msg = "phi_n undefined: log r_n = " + format_number(log_r) +
                      " <= d = " + format_number(params.d) + " at n = " + std::to_string(params.n);
    msg += n_min > 0 ? "; smallest admissible n is " + std::to_string(n_min)
                     : "; no admissible n for this r_n";
    throw DomainError(msg);
  }
  return 1.0 - params.d / log_r;
}

double effective_phi(const ModelParams& params) {
  if (!(params.alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  return params.alpha > 0.0 ? phi_n(params) : 0.0;
}

VolatilityScales::VolatilityScales(double phi, double alpha, std::int64_t n, double log_rn,
                                   double d)
    : phi_(phi), alpha_(alpha), n_(n), log_m_n_(0.0), M_n_(0), delta_n_(1.0) {
  if (!(phi >= 0.0 && phi < 1.0)) throw DomainError("volatility persistence must lie in [0, 1)");
  if (n < 1) throw DomainError("scales need n >= 1");

  if (alpha_ > 0.0) {
    std::vector<double> log_x_values(static_cast<std::size_t>(n));
    for (std::int64_t t = 1; t <= n; ++t) log_x_values[static_cast<std::size_t>(t - 1)] = log_x(t);
    log_m_n_ = log_sum_exp(log_x_values) - std::log(static_cast<double>(n));
  }

  // delta_n = min(1, 1 / log log r_n), and 1 when log log r_n <= 1.
  if (log_rn > 0.0) {
    const double loglog_r = std::log(log_rn);
    delta_n_ = loglog_r > 1.0 ? 1.0 / loglog_r : 1.0;
    if (d > 0.0) {
      const double m = (log_rn / (2.0 * d)) * std::log(log_rn / delta_n_);
      M_n_ = m > 0.0 ? static_cast<std::int64_t>(std::floor(m)) : 0;
    }
  }
}

double VolatilityScales::A(std::int64_t t) const {
  if (t <= 0) return 0.0;
  if (phi_ == 0.0) return 0.5;
  const double log_phi = std::log(phi_);
  const double one_minus_pow = -std::expm1(2.0 * static_cast<double>(t) * log_phi);
  const double one_minus_sq = -std::expm1(2.0 * log_phi);
  return one_minus_pow / (2.0 * one_minus_sq);
}

double VolatilityScales::A_infinity() const {
  if (phi_ == 0.0) return 0.5;
  return 1.0 / (2.0 * -std::expm1(2.0 * std::log(phi_)));
}

double VolatilityScales::x(std::int64_t t) const { return std::exp(log_x(t)); }
double VolatilityScales::m_n() const { return std::exp(log_m_n_); }
double VolatilityScales::l_n() const { return std::exp(log_l_n()); }

VolatilityScales scales(const ModelParams& params) {
  const double phi = effective_phi(params);
  double log_rn = 0.0;
  if (params.n >= kMinSampleSize) log_rn = log_sequence(params.rn, params.n);
  return VolatilityScales(phi, params.alpha, std::max<std::int64_t>(params.n, 1), log_rn,
                          params.d);
}

double log_sum_exp(const std::vector<double>& values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

}  // namespace dl2u
