#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "torusbif/operator.hpp"
#include "torusbif/spectrum.hpp"

using namespace torusbif;

namespace {
constexpr double coth1_minus_one = 0.313035285499331303636161246931;  // mpmath
}

TEST(TrivialSpectrum, FractionalHalf) {
  const auto sp = trivial_spectrum(make_fractional(0.5), 4);
  ASSERT_EQ(sp.size(), 5u);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_EQ(sp[k].sigma, static_cast<double>(k));
    EXPECT_EQ(sp[k].chi, 1);
    EXPECT_EQ(sp[k].kernel_mode[k], 1.0);
  }
}

TEST(TrivialSpectrum, FractionalOne) {
  const auto sp = trivial_spectrum(make_fractional(1.0), 3);
  EXPECT_EQ(sp[1].sigma, 1.0);
  EXPECT_EQ(sp[2].sigma, 4.0);
  EXPECT_EQ(sp[3].sigma, 9.0);
}

TEST(TrivialSpectrum, IlwFirstEigenvalueAndOrdering) {
  const auto sp = trivial_spectrum(make_ilw(0.5, 1.0), 50);
  EXPECT_NEAR(sp[1].sigma, coth1_minus_one, 1e-15);
  for (std::size_t k = 1; k < sp.size(); ++k) EXPECT_GT(sp[k].sigma, sp[k - 1].sigma);
}

TEST(ConstantBranchSpectrum, Values) {
  const auto a = constant_branch_spectrum(make_fractional(0.5), 2.0, 3);
  EXPECT_EQ(a, (std::vector<double>{0.0, -1.0, -2.0, -3.0}));
  EXPECT_DOUBLE_EQ(constant_branch_spectrum(make_fractional(0.5), 3.0, 2)[2], -1.0);
  EXPECT_NEAR(constant_branch_spectrum(make_ilw(0.5, 1.0), 2.0, 1)[1], -coth1_minus_one, 1e-15);
}

TEST(ConstantBranchSpectrum, MatchesJacobianAlongConstantBranch) {
  // J(lambda, -lambda) = diag(sigma_n + lambda) for p = 2.
  const auto spec = make_ilw(0.75, 0.5);
  const auto ps = make_problem(spec, 2.0, 8);
  const auto values = constant_branch_spectrum(spec, 2.0, 8);
  for (int k = 1; k <= 8; ++k) {
    const double lambda = values[k];
    const Matrix jac = jacobian_matrix(ps, lambda, CosineField::constant(8, -lambda));
    EXPECT_NEAR(jac(k, k), 0.0, 1e-13);
  }
}

TEST(Transversality, ProjectionIsMinusPi) {
  for (const auto& spec : {make_fractional(0.5), make_ilw(1.0, 0.3)}) {
    const auto ps = make_problem(spec, 2.0, 8);
    for (int k : {1, 5}) {
      const auto t = transversality_check(ps, k);
      EXPECT_NEAR(t.projection, -std::numbers::pi, 1e-14);
      EXPECT_TRUE(t.passes);
    }
  }
}

TEST(Transversality, Orthogonality) {
  EXPECT_NEAR(l2_inner(-1.0 * CosineField::mode(8, 3), CosineField::mode(8, 5)), 0.0, 0.0);
}

TEST(BifurcationDirection, ClosedFormValues) {
  EXPECT_NEAR(bifurcation_direction(make_fractional(0.5), 1).lambda_ddot, 1.0, 1e-15);
  EXPECT_NEAR(bifurcation_direction(make_fractional(0.5), 2).lambda_ddot, 0.5, 1e-15);
  EXPECT_NEAR(bifurcation_direction(make_fractional(1.0), 1).lambda_ddot, 5.0 / 3.0, 1e-15);
  EXPECT_EQ(bifurcation_direction(make_fractional(1.0), 1).lambda_dot, 0.0);
  try {
    bifurcation_direction(make_fractional(0.5), 1, 3.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unsupported_p);
  }
}

TEST(BifurcationDirection, SupercriticalLowerBound) {
  for (const auto& spec : {make_fractional(0.5), make_fractional(0.75), make_ilw(0.5, 1.0), make_ilw(1.0, 0.1)})
    for (int k = 1; k <= 20; ++k)
      EXPECT_GE(bifurcation_direction(spec, k).lambda_ddot, 1.0 / operator_symbol(spec, k) - 1e-15);
}

// Independent route: lambda'' = -2 (D2[phi, corr], phi) / (D_lambda D_u[phi], phi) with the corrector.
TEST(BifurcationDirection, AgreesWithProjectionFormula) {
  for (const auto& spec : {make_fractional(0.75), make_ilw(0.5, 1.0)}) {
    const auto ps = make_problem(spec, 2.0, 16);
    for (int k = 1; k <= 3; ++k) {
      const auto phi = CosineField::mode(16, k);
      const auto corr = corrector_phi(spec, k, 2.0, 16);
      const double num = l2_inner(second_derivative(ps, CosineField(16), phi, corr), phi);
      const double den = transversality_check(ps, k).projection;
      EXPECT_NEAR(-num / den, bifurcation_direction(spec, k).lambda_ddot, 1e-12);
    }
  }
}

TEST(Corrector, FractionalValues) {
  const auto phi = corrector_phi(make_fractional(0.5), 1);
  EXPECT_DOUBLE_EQ(phi[0], -1.0);
  EXPECT_DOUBLE_EQ(phi[1], 0.0);
  EXPECT_DOUBLE_EQ(phi[2], 1.0);
  const auto phi1 = corrector_phi(make_fractional(1.0), 1);
  EXPECT_DOUBLE_EQ(phi1[0], -1.0);
  EXPECT_DOUBLE_EQ(phi1[2], 1.0 / 3.0);
}

TEST(Corrector, DefiningEquation) {
  const auto spec = make_fractional(0.5);
  const auto phi = corrector_phi(spec, 1);
  CosineField rhs(2);
  rhs[0] = 1.0;
  rhs[2] = 1.0;
  EXPECT_LT(l2_norm(apply_L(spec, phi) - 1.0 * phi - rhs), 1e-14);
  EXPECT_THROW(corrector_phi(spec, 1, 3.0), error);
}

TEST(LocalPredictor, FractionalHalf) {
  const auto spec = make_fractional(0.5);
  const auto pt = local_predictor(spec, 1, 0.2, 8);
  EXPECT_NEAR(pt.lambda, 1.02, 1e-15);
  EXPECT_NEAR(pt.u[0], -0.02, 1e-15);
  EXPECT_NEAR(pt.u[1], 0.2, 1e-15);
  EXPECT_NEAR(pt.u[2], 0.02, 1e-15);

  const auto zero = local_predictor(spec, 3, 0.0, 8);
  EXPECT_EQ(zero.lambda, 3.0);
  EXPECT_EQ(l2_norm(zero.u), 0.0);

  EXPECT_EQ(local_predictor(spec, 1, -0.2, 8).lambda, pt.lambda);
}
