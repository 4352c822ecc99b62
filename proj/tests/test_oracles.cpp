#include <cmath>

#include <gtest/gtest.h>

#include "dl2u/errors.hpp"
#include "dl2u/oracles.hpp"

using namespace dl2u;

TEST(ClosedForms, Values) {
  EXPECT_NEAR(std::exp(log_mean_sigma2(0.5, 0.9, 3)), 1.3610582198312497, 1e-14);
  EXPECT_NEAR(log_mean_sigma2(0.7, 0.3, 1), 0.7 * 0.7 / 2, 1e-15);
  EXPECT_NEAR(log_fourth_moment(0.5, 0.5, 2), 0.625, 1e-15);
  EXPECT_NEAR(std::exp(log_conditional_mean(0.5, 0.9, 1.0)), 2.787095460565851, 1e-14);
  EXPECT_NEAR(log_conditional_mean(0.5, 0.9, 0.0), 0.125, 1e-16);
  EXPECT_EQ(log_conditional_mean(0.0, 0.9, 2.0), 0.9 * 2.0);
  EXPECT_EQ(log_cross_moment(0.0, 0.9, 2, 4), 0.0);
  // s = t reduces to the fourth moment.
  EXPECT_NEAR(log_cross_moment(0.5, 0.9, 3, 3), log_fourth_moment(0.5, 0.9, 3), 1e-14);
}

TEST(ClosedForms, FourthMomentBoundedByLongRun) {
  for (std::int64_t t = 1; t <= 50; ++t) {
    EXPECT_LE(log_fourth_moment(0.5, 0.9, t), 4 * 0.25 / (2 * (1 - 0.81)));
  }
}

TEST(ClosedForms, CrossMomentFactorizesAtLongGaps) {
  const double joint = log_cross_moment(0.5, 0.1, 2, 30);
  EXPECT_NEAR(joint, log_mean_sigma2(0.5, 0.1, 2) + log_mean_sigma2(0.5, 0.1, 30), 1e-15);
}

TEST(MomentChecks, HomoskedasticIsExact) {
  for (const MomentCheck& c :
       {check_mean_sigma2(0.0, 0.9, 3, kMinOracleDraws, 1),
        check_fourth_moment(0.0, 0.9, 3, kMinOracleDraws, 1),
        check_cross_moment(0.0, 0.9, 2, 4, kMinOracleDraws, 1),
        check_conditional_mean(0.0, 0.9, 0.0, kMinOracleDraws, 1)}) {
    EXPECT_EQ(c.mc_estimate, 1.0) << c.label;
    EXPECT_EQ(c.closed_form, 1.0) << c.label;
    EXPECT_EQ(c.z_score, 0.0) << c.label;
    EXPECT_TRUE(c.passed());
  }
  const MomentCheck cm = check_conditional_mean(0.0, 0.9, 1.0, kMinOracleDraws, 1);
  EXPECT_EQ(cm.mc_estimate, std::exp(0.9));
  EXPECT_EQ(cm.z_score, 0.0);
}

TEST(MomentChecks, RefusesTooFewDraws) {
  EXPECT_THROW(check_mean_sigma2(0.5, 0.9, 3, 10, 1), UsageError);
  EXPECT_THROW(check_conditional_mean(0.5, 0.9, 1.0, kMinOracleDraws - 1, 1), UsageError);
}

TEST(MomentChecks, StochasticVolatility) {
  const MomentCheck a = check_mean_sigma2(0.5, 0.9, 3, kMinOracleDraws, 7);
  EXPECT_NEAR(a.closed_form, 1.3610582198312497, 1e-14);
  EXPECT_TRUE(a.passed()) << a.z_score;
  const MomentCheck b = check_fourth_moment(0.5, 0.5, 2, kMinOracleDraws, 7);
  EXPECT_NEAR(b.closed_form, 1.868245957432222, 1e-14);
  EXPECT_TRUE(b.passed()) << b.z_score;
  const MomentCheck c = check_cross_moment(0.5, 0.9, 2, 4, kMinOracleDraws, 7);
  EXPECT_TRUE(c.passed()) << c.z_score;
  const MomentCheck d = check_conditional_mean(0.5, 0.9, 1.0, kMinOracleDraws, 7);
  EXPECT_NEAR(d.closed_form, 2.787095460565851, 1e-14);
  EXPECT_TRUE(d.passed()) << d.z_score;
  EXPECT_GT(a.mc_std_error, 0.0);
}

TEST(MomentChecks, Deterministic) {
  const MomentCheck a = check_cross_moment(0.5, 0.8, 2, 12, kMinOracleDraws, 99);
  const MomentCheck b = check_cross_moment(0.5, 0.8, 2, 12, kMinOracleDraws, 99);
  EXPECT_EQ(a.mc_estimate, b.mc_estimate);
  EXPECT_EQ(a.z_score, b.z_score);
}

TEST(RateCondition, Ratios) {
  ModelParams p;
  p.n = 1000;
  p.alpha = 0.0;
  p.kn = SequenceSpec::power_of_n(0.25);
  const RateReport r0 = check_rate_condition(p);
  EXPECT_NEAR(r0.second_moment_ratio, std::pow(1000.0, 0.25) / 1000.0, 1e-15);
  EXPECT_FALSE(r0.flagged);

  p.alpha = 0.5;
  const RateReport r1 = check_rate_condition(p);
  EXPECT_LT(r1.fourth_moment_ratio, 0.05);
  EXPECT_FALSE(r1.flagged);

  p.kn = SequenceSpec::linear_n();
  const RateReport r2 = check_rate_condition(p);
  EXPECT_GE(r2.second_moment_ratio, 1.0);
  EXPECT_TRUE(r2.flagged);
}

TEST(Verify, HomoskedasticSuitePasses) {
  VerifyOptions opt;
  opt.homoskedastic_only = true;
  opt.diagnostics = false;
  const VerifyReport r = run_verification(opt);
  EXPECT_FALSE(r.moments.empty());
  for (const MomentCheck& c : r.moments) EXPECT_EQ(c.z_score, 0.0) << c.label;
  EXPECT_TRUE(r.all_passed());
}
