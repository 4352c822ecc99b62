#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dl2u/dgp.hpp"
#include "dl2u/errors.hpp"
#include "support.hpp"

using namespace dl2u;

namespace {

ModelParams sv_params(double phi_target_log_rn, double d, double alpha, std::int64_t n) {
  ModelParams p;
  p.alpha = alpha;
  p.d = d;
  p.n = n;
  p.rn = SequenceSpec::constant(std::exp(phi_target_log_rn));
  return p;
}

}  // namespace

TEST(Dgp, HomoskedasticVolatilityIsOne) {
  ModelParams p;
  p.n = 50;
  const auto s2 = simulate_volatility(p, {1, 2});
  ASSERT_EQ(s2.size(), 51u);
  for (double v : s2) EXPECT_EQ(v, 1.0);
}

TEST(Dgp, VolatilityIsDeterministic) {
  const ModelParams p = sv_params(1.0, 0.1, 0.5, 10);  // phi = 0.9
  EXPECT_EQ(simulate_volatility(p, {3, 4}), simulate_volatility(p, {3, 4}));
  EXPECT_EQ(simulate_volatility(p, {3, 4}).size(), 11u);
  EXPECT_NE(simulate_volatility(p, {3, 4}), simulate_volatility(p, {3, 5}));
}

TEST(Dgp, VolatilityMeanMatchesLognormal) {
  const ModelParams p = sv_params(1.0, 0.1, 0.5, 3);  // phi = 0.9, alpha = 0.5
  ASSERT_NEAR(phi_n(p), 0.9, 1e-15);
  const int draws = 1000000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < draws; ++i) {
    const double v = simulate_volatility(p, {99, static_cast<std::uint64_t>(i)})[3];
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean - 1.3610582198312497), 3.0 * se) << mean << " se " << se;
}

TEST(Dgp, HomoskedasticPathIsPlainAr1) {
  ModelParams p;
  p.c = 1.0;
  p.kn = SequenceSpec::power_of_n(0.25);
  p.n = 200;
  p.y0 = 0.7;
  const SimulatedPath path = simulate_path(p, {8, 1});
  EXPECT_EQ(path.y, test::reference_ar1(rho_n(p), 0.7, 200, {8, 1}));
  GaussianStream eps({8, 1}, Series::Innovation);
  for (std::size_t t = 0; t < path.u.size(); ++t) {
    ASSERT_EQ(path.sigma2[t + 1], 1.0);
    ASSERT_EQ(path.u[t], eps());
  }
}

TEST(Dgp, RecursionResidualIsZero) {
  ModelParams p;
  p.alpha = 0.5;
  p.n = 500;
  p.regime = Regime::MildlyExplosive;
  p.c = 0.5;
  p.y0 = 0.3;
  const SimulatedPath path = simulate_path(p, {11, 0});
  const double rho = rho_n(p);
  for (std::size_t t = 1; t < path.y.size(); ++t) {
    ASSERT_EQ(path.y[t], rho * path.y[t - 1] + path.u[t - 1]) << t;
  }
}

TEST(Dgp, InnovationsScaleWithVolatility) {
  ModelParams p;
  p.alpha = 0.5;
  p.n = 100;
  const SimulatedPath path = simulate_path(p, {12, 0});
  GaussianStream eps({12, 0}, Series::Innovation);
  for (std::size_t t = 0; t < path.u.size(); ++t) {
    ASSERT_EQ(path.u[t], std::sqrt(path.sigma2[t + 1]) * eps());
  }
  EXPECT_EQ(path.sigma2, simulate_volatility(p, {12, 0}));
}

TEST(Dgp, EmptyAndTinyPaths) {
  ModelParams p;
  p.n = 0;
  p.y0 = 5.0;
  const SimulatedPath empty = simulate_path(p, {0, 0});
  EXPECT_EQ(empty.y, std::vector<double>{5.0});
  EXPECT_TRUE(empty.u.empty());
  p.n = 2;
  EXPECT_EQ(simulate_path(p, {0, 0}).y.size(), 3u);
  p.n = -1;
  EXPECT_THROW(simulate_path(p, {0, 0}), DomainError);
}

TEST(Dgp, RandomWalkVariance) {
  ModelParams p;
  p.c = 0.0;
  p.n = 20;
  const int reps = 100000;
  double s2 = 0;
  for (int r = 0; r < reps; ++r) {
    const double yn = simulate_path(p, {31, static_cast<std::uint64_t>(r)}).y.back();
    s2 += yn * yn;
  }
  const double ratio = s2 / reps / 20.0;
  EXPECT_LT(std::abs(ratio - 1.0), 3.0 * std::sqrt(2.0 / reps)) << ratio;
}

TEST(Dgp, ExplosiveOverflowReportsIndex) {
  ModelParams p;
  p.regime = Regime::MildlyExplosive;
  p.c = 1.0;
  p.kn = SequenceSpec::constant(2.0);  // rho = 1.5
  p.n = 3000;
  p.y0 = 1.0;
  try {
    simulate_path(p, {1, 2});
    FAIL() << "expected OverflowError";
  } catch (const OverflowError& e) {
    EXPECT_GT(e.index(), 1700u);
    EXPECT_LT(e.index(), 1800u);
    EXPECT_NE(std::string(e.what()).find("seed"), std::string::npos);
  }
}
