#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dl2u/rng.hpp"
#include "dl2u/sequences.hpp"

namespace dl2u::test {

// Plain AR(1) with unit-variance innovations drawn from the same substream
// the simulator uses for epsilon_t. The homoskedastic simulator must match it bit for bit.
inline std::vector<double> reference_ar1(double rho, double y0, std::int64_t n, RngSeed seed) {
  GaussianStream eps(seed, Series::Innovation);
  std::vector<double> y{y0};
  for (std::int64_t t = 1; t <= n; ++t) y.push_back(rho * y.back() + eps());
  return y;
}

// Case generator for property tests. Uses the standard library engine so the
// cases do not share any state with the code under test.
class Cases {
 public:
  explicit Cases(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  std::uint64_t seed() { return gen_(); }

  std::vector<double> series(std::size_t min_len, std::size_t max_len, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<double> y(static_cast<std::size_t>(integer(static_cast<std::int64_t>(min_len),
                                                           static_cast<std::int64_t>(max_len))));
    for (double& v : y) v = nd(gen_);
    return y;
  }

  SequenceSpec slow_kn() {
    switch (integer(0, 3)) {
      case 0:
        return SequenceSpec::log_of_n();
      case 1:
        return SequenceSpec::power_of_n(uniform(0.1, 0.5));
      case 2:
        return SequenceSpec::power_of_n(uniform(0.5, 0.9));
      default:
        return SequenceSpec::constant(uniform(2.0, 20.0));
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dl2u::test
