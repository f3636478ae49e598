#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "torusbif/bounds.hpp"
#include "torusbif/continuation.hpp"
#include "torusbif/oracle_bo.hpp"

using namespace torusbif;

namespace {
const double sqrt2pi = std::sqrt(two_pi);
}

TEST(L2Bound, Values) {
  EXPECT_NEAR(l2_bound(2.0, 2.0), 2.0 * sqrt2pi, 1e-14);
  EXPECT_EQ(l2_bound(2.0, 0.0), 0.0);
  EXPECT_NEAR(l2_bound(3.0, -4.0), 2.0 * sqrt2pi, 1e-14);
}

TEST(Zeta, AgainstStandardLibrary) {
  for (double a : {2.0, 2.5, 3.0, 4.0, 6.0, 12.0}) EXPECT_NEAR(zeta(a), std::riemann_zeta(a), 1e-13) << a;
  EXPECT_NEAR(zeta(2.0), 1.64493406684822643647241516665, 1e-13);  // mpmath
  EXPECT_THROW(zeta(1.0), error);
  // sqrt(2 zeta(4s)) <= sqrt(2 zeta(2)) < sqrt(2 pi) for s >= 1/2.
  EXPECT_EQ(linf_chain_constant(0.5), sqrt2pi);
  EXPECT_EQ(linf_chain_constant(1.0), sqrt2pi);
}

TEST(PhiRho, RootAndInteriority) {
  const BoundConstants bc;
  const auto ps = make_problem(make_fractional(0.5), 2.0, 8);
  EXPECT_NEAR(phi_rho(ps, bc, 2.0), 18.9592906884568039565465158096, 1e-10);  // mpmath
  for (double lambda : {1e-3, 0.5, 2.0, 40.0, 1e6}) {
    const double phi = phi_rho(ps, bc, lambda);
    const double scale = two_pi * ps.multiplier.m0 * phi * phi;
    EXPECT_LT(std::abs(phi_polynomial_value(ps, bc, lambda, phi)) / scale, 1e-10);
    EXPECT_LT(phi_polynomial_value(ps, bc, lambda, 0.5 * phi), 0.0);
    EXPECT_EQ(phi_rho(ps, bc, -lambda), phi);
  }
  EXPECT_EQ(phi_rho(ps, bc, 0.0), 0.0);
}

TEST(PhiRho, AsymptoticRatio) {
  const BoundConstants bc;
  for (auto [s, p] : {std::pair{0.5, 2.0}, std::pair{0.75, 2.0}, std::pair{0.75, 3.0}}) {
    const auto ps = make_problem(make_fractional(s), p, 8);
    const double lambda = 1e6;
    EXPECT_NEAR(phi_rho(ps, bc, lambda) / phi_asymptotic(ps, bc)(lambda), 1.0, 0.02) << s << " " << p;
    EXPECT_NEAR(psi_rho(ps, bc, lambda) / psi_asymptotic(ps, bc)(lambda), 1.0, 0.02) << s << " " << p;
  }
}

TEST(PsiRho, ZeroAndEvenness) {
  const BoundConstants bc{1.3, 0.4, 2.0, 0.9, 1.1};
  const auto ps = make_problem(make_ilw(0.75, 2.0), 2.0, 8);
  EXPECT_EQ(psi_rho(ps, bc, 0.0), 0.0);
  EXPECT_EQ(h2s_bound(ps, bc, 0.0), 0.0);
  EXPECT_EQ(linf_bound(ps, bc, 0.0), 0.0);
  for (double lambda : {0.3, 3.0, 70.0}) {
    EXPECT_EQ(psi_rho(ps, bc, lambda), psi_rho(ps, bc, -lambda));
    EXPECT_EQ(h2s_bound(ps, bc, lambda), h2s_bound(ps, bc, -lambda));
    EXPECT_NEAR(linf_bound(ps, bc, lambda), sqrt2pi * h2s_bound(ps, bc, lambda), 1e-12 * linf_bound(ps, bc, lambda));
  }
}

TEST(PhiRho, RegimeAndConstants) {
  const auto ps = make_problem(make_fractional(0.5), 3.0, 8);
  try {
    phi_rho(ps, {}, 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unsupported_regime);
  }
  EXPECT_THROW(h2s_bound(ps, {}, 1.0), error);
  BoundConstants bad;
  bad.rho = 0.0;
  EXPECT_THROW(phi_rho(make_problem(make_fractional(0.5), 2.0, 8), bad, 1.0), error);
}

TEST(LowerBound, Cases) {
  const auto spec = make_fractional(0.5);
  const auto c = lower_bound_check(spec, 3.0, constant_solution(2.0, 3.0, 16), 2.0);
  EXPECT_TRUE(c.passes);
  EXPECT_EQ(c.min_u, c.bound);
  const auto bo = lower_bound_check(spec, 2.0, bo_positive(1, 2.0, BOSign::plus, 64), 2.0);
  EXPECT_NEAR(bo.min_u, 2.0 - std::sqrt(3.0) - 2.0, 1e-12);
  EXPECT_TRUE(bo.passes);
  EXPECT_TRUE(lower_bound_check(spec, 1.0, CosineField(8), 3.0).passes);
  EXPECT_FALSE(lower_bound_check(spec, 1.0, CosineField::constant(8, -1.1), 2.0).passes);
  EXPECT_THROW(lower_bound_check(make_ilw(0.5, 1.0), 1.0, CosineField(8), 2.0), error);
}

TEST(CheckPoint, Examples) {
  const auto ps = bo_problem(128);
  const auto bo = check_point(ps, BoundConstants{}, 2.0, bo_positive(1, 2.0, BOSign::plus, 128));
  EXPECT_TRUE(bo.passes());
  EXPECT_NEAR(bo.find("l2")->measured, 2.0 * std::sqrt(std::numbers::pi), 1e-12);  // mpmath quadrature
  ASSERT_NE(bo.find("h2s"), nullptr);
  ASSERT_NE(bo.find("lower"), nullptr);

  const auto zero = check_point(ps, BoundConstants{}, 1.7, CosineField(128));
  EXPECT_TRUE(zero.passes());
  for (const auto& c : zero.checks)
    if (c.name != "lower") EXPECT_EQ(c.measured, 0.0);

  const auto cst = check_point(ps, std::nullopt, 3.0, constant_solution(2.0, 3.0, 128));
  EXPECT_TRUE(cst.passes());
  EXPECT_NEAR(cst.find("l2")->measured, cst.find("l2")->bound, 1e-10);
  EXPECT_EQ(cst.find("h2s"), nullptr);

  const auto outside = check_point(make_problem(make_fractional(0.5), 4.0, 16), BoundConstants{}, 1.0,
                                   CosineField(16));
  EXPECT_EQ(outside.find("h2s"), nullptr);
}

TEST(CheckPoint, ChainHoldsOnRandomFields) {
  std::mt19937_64 rng(11);
  for (double s : {0.5, 0.75, 1.0}) {
    const auto ps = make_problem(make_fractional(s), 2.0, 32);
    for (int i = 0; i < 20; ++i) {
      const auto u = torusbif::testing::random_field(rng, 32, 2.0, 0.3);
      const Norms nm = norms(u, s);
      EXPECT_LE(nm.linf, linf_chain_constant(s) * (nm.l2 + nm.hdot_2s));
      EXPECT_TRUE(check_point(ps, std::nullopt, 1.0, u).find("linf_chain")->passes);
    }
  }
}

TEST(CheckPoint, HoldsAlongComputedBranches) {
  const auto ps = make_problem(make_fractional(0.75), 2.0, 64);
  ContinuationConfig cfg;
  cfg.target_lambda = 6.0;
  for (int k : {1, 2}) {
    const auto br = bifurcating_branch(ps, k, 0.2, cfg);
    for (const auto& pt : br.points) {
      ASSERT_LT(pt.residual_l2, 1e-8);
      EXPECT_TRUE(check_point(ps, BoundConstants{}, pt).hard_passes()) << pt.lambda;
    }
  }
}
