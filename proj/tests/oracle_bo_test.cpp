#include <gtest/gtest.h>

#include <cmath>

#include "torusbif/operator.hpp"
#include "torusbif/oracle_bo.hpp"

using namespace torusbif;

TEST(BONegative, ValueAtOrigin) {
  const auto u = bo_negative(-2.0, BOSign::plus, 64);
  EXPECT_NEAR(u(0.0), 2.0 - std::sqrt(3.0), 1e-14);
}

TEST(BONegative, ExponentialCoefficients) {
  const double beta = bo_decay_rate(1, -2.0);
  EXPECT_NEAR(beta, 0.5 * std::log(3.0), 1e-15);
  const auto minus = bo_negative(-2.0, BOSign::minus, 64);
  EXPECT_NEAR(minus[1], 2.0 / std::sqrt(3.0), 1e-14);
  const auto plus = bo_negative(-2.0, BOSign::plus, 64);
  EXPECT_NEAR(plus[1], -2.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(plus[0], 1.0, 1e-14);
}

TEST(BONegative, LargeNegativeLambdaExtremes) {
  // Mean stays 1, the peak grows like 2|lambda| and the minimum decays like 1/(2|lambda|).
  const double lambda = -50.0;
  const double root = std::sqrt(lambda * lambda - 1.0);
  const auto u = bo_negative(lambda, BOSign::plus, 2048);
  EXPECT_NEAR(u[0], 1.0, 1e-12);
  EXPECT_NEAR(linf_norm(u), 1.0 / (-lambda - root), 1e-6);
  EXPECT_NEAR(grid_min(u), 1.0 / (-lambda + root), 1e-6);
  EXPECT_LT(grid_min(u), 0.02);
}

TEST(BONegative, PositiveAndSolves) {
  const auto ps = bo_problem(256);
  for (double lambda : {-5.0, -2.0, -1.5}) {
    for (auto sign : {BOSign::plus, BOSign::minus}) {
      const auto u = bo_negative(lambda, sign, 256);
      EXPECT_GT(grid_min(u), 0.0);
      EXPECT_LT(l2_norm(residual(ps, lambda, u)), 1e-9);
    }
  }
}

TEST(BONegative, RefusesOutOfRange) {
  for (double lambda : {-1.0, -1.0 - 1e-8, 0.5, 3.0}) {
    try {
      bo_negative(lambda, BOSign::plus, 32);
      FAIL() << lambda;
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::lambda_out_of_range);
    }
  }
}

TEST(BOPositive, ClosedForms) {
  const auto u = bo_positive(1, 2.0, BOSign::plus, 64);
  EXPECT_NEAR(u(0.7), 1.0 / (2.0 + std::sqrt(3.0) * std::cos(0.7)) - 2.0, 1e-14);
  const auto w = bo_positive(2, 3.0, BOSign::plus, 128);
  EXPECT_NEAR(w(0.3), 4.0 / (3.0 + std::sqrt(5.0) * std::cos(0.6)) - 3.0, 1e-14);
  for (int n = 1; n <= 128; n += 2) EXPECT_LT(std::abs(w[n]), 1e-15);
}

TEST(BOPositive, ResidualsAndDominantMode) {
  const auto ps = bo_problem(256);
  const std::pair<int, double> cases[] = {{1, 1.5}, {1, 2.0}, {1, 5.0}, {2, 3.0}, {3, 4.0}};
  for (auto [k, lambda] : cases) {
    const auto u = bo_positive(k, lambda, BOSign::plus, 256);
    EXPECT_LT(l2_norm(residual(ps, lambda, u)), 1e-9) << k << " " << lambda;
    for (int n = 1; n <= 256; ++n)
      if (n != k) EXPECT_LT(std::abs(u[n]), std::abs(u[k]));
  }
}

TEST(BOPositive, RefusesNearBifurcation) {
  EXPECT_THROW(bo_positive(2, 2.0 + 1e-7, BOSign::plus, 32), error);
  EXPECT_THROW(bo_positive(1, 0.5, BOSign::plus, 32), error);
  EXPECT_NO_THROW(bo_positive(2, 2.0 + 1e-3, BOSign::plus, 32));
}

TEST(BOPositive, SignsAreHalfPeriodTranslates) {
  const auto plus = bo_positive(2, 3.0, BOSign::plus, 64);
  const auto minus = bo_positive(2, 3.0, BOSign::minus, 64);
  for (double x : {0.0, 0.4, 1.3}) EXPECT_NEAR(plus(x + std::numbers::pi / 2), minus(x), 1e-13);
}

TEST(BOParametrization, SmallAmplitudeExpansion) {
  const auto par = bo_branch_parametrization(1, 1.05);
  EXPECT_NEAR(std::abs(par.amplitude), 0.312347523777212266375196016173, 1e-14);  // mpmath
  const double a2 = par.amplitude * par.amplitude;
  EXPECT_NEAR((1.05 - 1.0) / (a2 / 2.0), 1.0, 0.1);
  EXPECT_NEAR(par.predicted_lambda, 1.0 + a2 / 2.0, 1e-15);

  const auto par2 = bo_branch_parametrization(2, 2.1, BOSign::minus);
  EXPECT_GT(par2.amplitude, 0.0);
  EXPECT_NEAR(par2.predicted_lambda, 2.0 + 0.25 * par2.amplitude * par2.amplitude, 1e-15);
  EXPECT_NEAR(par2.predicted_lambda, 2.1, 0.1 * 0.1);

  const auto far = bo_branch_parametrization(1, 1e3);
  EXPECT_TRUE(std::isfinite(far.amplitude / 1e3));
}

TEST(BOParametrization, MatchesFieldCoefficient) {
  for (auto sign : {BOSign::plus, BOSign::minus}) {
    const auto u = bo_positive(3, 4.0, sign, 64);
    EXPECT_NEAR(bo_branch_parametrization(3, 4.0, sign).amplitude, u[3], 1e-14);
  }
}
