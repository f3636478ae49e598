#include <gtest/gtest.h>

#include <cmath>

#include "torusbif/continuation.hpp"
#include "torusbif/oracle_bo.hpp"

using namespace torusbif;

namespace {

double h2s_distance(const ProblemSpec& ps, const CosineField& a, const CosineField& b) {
  return norms(a - b, ps.multiplier.s).h_2s;
}

}  // namespace

TEST(ConstantSolution, Values) {
  EXPECT_EQ(constant_solution(2.0, 3.0, 4)[0], -3.0);
  EXPECT_EQ(constant_solution(2.0, -3.0, 4)[0], 3.0);
  EXPECT_NEAR(constant_solution(3.0, 4.0, 4)[0], -2.0, 1e-15);
  const auto ps = make_problem(make_ilw(0.75, 0.4), 3.0, 16);
  for (double lambda : {-2.5, 0.7, 4.0})
    EXPECT_LT(residual_norm(ps, lambda, constant_solution(3.0, lambda, 16)), 1e-13);
  try {
    constant_solution(2.0, 0.0, 4);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::zero_lambda);
  }
}

TEST(ContinuationConfig, Validation) {
  ContinuationConfig cfg;
  cfg.ds0 = 1.0;
  cfg.ds_max = 0.5;
  EXPECT_THROW(cfg.validate(), error);
  cfg = {};
  cfg.ds_min = 0.0;
  EXPECT_THROW(cfg.validate(), error);
  EXPECT_NO_THROW(ContinuationConfig{}.validate());
}

TEST(BranchSwitch, BenjaminOnoFirstMode) {
  const auto ps = bo_problem(256);
  const auto pt = branch_switch(ps, 1, 0.2);
  EXPECT_NEAR(pt.lambda, 1.02, 2e-3);
  EXPECT_NEAR(pt.u[1], 0.2, 1e-15);
  EXPECT_LT(pt.residual_l2, 1e-10);
  EXPECT_LT(linf_norm(pt.u - bo_positive(1, pt.lambda, BOSign::minus, 256)), 1e-6);
}

TEST(BranchSwitch, OppositeAmplitudesAreTranslates) {
  const auto ps = bo_problem(64);
  for (int k : {1, 2}) {
    const auto a = branch_switch(ps, k, 0.2);
    const auto b = branch_switch(ps, k, -0.2);
    EXPECT_NEAR(a.lambda, b.lambda, 1e-12);
    const double shift = std::numbers::pi / k;
    for (double x : {0.0, 0.3, 1.1, 2.5}) EXPECT_NEAR(a.u(x + shift), b.u(x), 1e-12);
  }
}

TEST(BranchSwitch, DominantModeAndZeros) {
  const auto ps = make_problem(make_fractional(0.75), 2.0, 64);
  const auto pt = branch_switch(ps, 2, 0.2);
  for (int n = 1; n <= 64; ++n)
    if (n != 2) EXPECT_LT(std::abs(pt.u[n]), std::abs(pt.u[2]));
  EXPECT_EQ(count_sign_changes(pt.u), 4);
}

TEST(BranchSwitch, FirstOrderPredictorForHigherPowers) {
  const auto ps = make_problem(make_fractional(1.0), 3.0, 32);
  const auto pt = branch_switch(ps, 1, 0.1);
  EXPECT_LT(pt.residual_l2, 1e-10);
  EXPECT_NEAR(pt.lambda, 1.0, 0.05);
  EXPECT_EQ(count_sign_changes(pt.u), 2);
}

TEST(ContinueBranch, FollowsBenjaminOnoOracle) {
  const auto ps = bo_problem(256);
  ContinuationConfig cfg;
  cfg.target_lambda = 3.0;
  const auto br = bifurcating_branch(ps, 1, 0.2, cfg);
  EXPECT_EQ(br.stop_reason, "target");
  EXPECT_DOUBLE_EQ(br.points.back().lambda, 3.0);
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    const auto& pt = br.points[i];
    EXPECT_LT(pt.residual_l2, 1e-8);
    EXPECT_LT(linf_norm(pt.u - bo_positive(1, pt.lambda, BOSign::minus, 256)), 1e-6) << pt.lambda;
    EXPECT_TRUE(check_point(ps, std::nullopt, pt).hard_passes());
    if (i > 0) {
      const auto& prev = br.points[i - 1];
      EXPECT_GT(pt.arclength, prev.arclength);
      EXPECT_LE(h2s_distance(ps, pt.u, prev.u) + std::abs(pt.lambda - prev.lambda), 2.0 * cfg.ds_max);
    }
  }
  for (const auto& ev : detect_events(br)) EXPECT_NE(ev.type, EventType::fold);
}

TEST(ContinueBranch, ConstantBranchStaysConstant) {
  const auto ps = make_problem(make_fractional(0.5), 2.0, 32);
  const auto br = constant_branch(ps, 0.5, 5.0, {});
  EXPECT_EQ(br.stop_reason, "target");
  EXPECT_DOUBLE_EQ(br.points.back().lambda, 5.0);
  EXPECT_EQ(br.origin.kind, OriginKind::constant);
  for (const auto& pt : br.points) {
    EXPECT_NEAR(pt.u[0], -pt.lambda, 1e-12);
    for (int n = 1; n <= 32; ++n) EXPECT_EQ(pt.u[n], 0.0);
  }
}

TEST(ContinueBranch, RejectsUnconvergedStart) {
  const auto ps = bo_problem(16);
  BranchPoint bad;
  bad.lambda = 1.5;
  bad.u = CosineField::mode(16, 1, 0.3);
  try {
    continue_branch(ps, bad, 1, {});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::no_convergence);
  }
}

TEST(ContinueBranch, MaxStepsStop) {
  const auto ps = bo_problem(16);
  ContinuationConfig cfg;
  cfg.max_steps = 5;
  const auto br = trivial_branch(ps, 0.5, 100.0, cfg);
  EXPECT_EQ(br.stop_reason, "max_steps");
  EXPECT_EQ(br.points.size(), 6u);
}

TEST(DetectEvents, TrivialBranchReproducesSpectrum) {
  for (double s : {0.5, 0.75, 1.0}) {
    const auto spec = make_fractional(s);
    const auto ps = make_problem(spec, 2.0, 16);
    ContinuationConfig cfg;
    cfg.ds_max = 1e-3 * std::pow(10.0, 2.0 * s);
    cfg.ds0 = cfg.ds_max;
    cfg.max_steps = 5000;
    const double top = 0.5 * (operator_symbol(spec, 10) + operator_symbol(spec, 11));
    const auto br = trivial_branch(ps, 0.5, top, cfg);
    EventOptions opt;
    opt.refine = false;
    const auto raw = detect_events(br, opt);
    const auto fine = detect_events(br);
    ASSERT_EQ(raw.size(), 10u) << s;
    ASSERT_EQ(fine.size(), 10u) << s;
    for (int k = 1; k <= 10; ++k) {
      EXPECT_EQ(fine[k - 1].type, EventType::branch_point);
      EXPECT_NEAR(raw[k - 1].lambda, operator_symbol(spec, k), 1e-3);
      EXPECT_NEAR(fine[k - 1].lambda, operator_symbol(spec, k), 1e-6);
      EXPECT_LT(fine[k - 1].min_sv, 1e-6);
    }
  }
}

TEST(DetectEvents, ConstantBranchNegativeSide) {
  const auto ps = make_problem(make_fractional(0.5), 2.0, 32);
  const auto br = constant_branch(ps, -0.5, -3.5, {});
  const auto ev = detect_events(br);
  ASSERT_EQ(ev.size(), 3u);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(ev[k - 1].lambda, -k, 1e-6);
}

TEST(DetectEvents, SyntheticFold) {
  // lambda(t) = 1 - (t - 1/2)^2: a fold at the vertex with no field dependence.
  Branch br;
  br.problem = bo_problem(4);
  for (int i = 0; i <= 10; ++i) {
    BranchPoint pt;
    const double t = 0.1 * i;
    pt.lambda = 1.0 - (t - 0.43) * (t - 0.43);
    pt.u = CosineField(4);
    pt.arclength = t;
    pt.negative_count = 2;
    br.points.push_back(pt);
  }
  EventOptions opt;
  opt.refine = false;
  const auto ev = detect_events(br, opt);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].type, EventType::fold);
  EXPECT_NEAR(ev[0].lambda, 1.0 - 0.03 * 0.03, 1e-12);
  EXPECT_EQ(ev[0].segment, 4u);
  EXPECT_TRUE(detect_events(Branch{}, opt).empty());
}

TEST(DetectEvents, FoldOnAnArtificialBranchIsRefined) {
  // s = 1/2 with m = 1, p = 2: near a fold on the dilated lambda < 0 family there is none, so build
  // one from the constant branch reflected by T: the images of lambda -> -lambda reverse direction.
  const auto ps = make_problem(make_fractional(0.5), 2.0, 8);
  Branch br;
  br.problem = ps;
  // Points on u = -lambda, walked forward then back: the refined fold sits at the turning point.
  for (double lam : {1.1, 1.2, 1.3, 1.25, 1.15}) br.points.push_back(make_point(ps, lam, constant_solution(2.0, lam, 8)));
  const auto ev = detect_events(br);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].type, EventType::fold);
  EXPECT_TRUE(ev[0].refined);
}

TEST(FittedCurvature, MatchesBifurcationFormula) {
  const std::tuple<double, int> cases[] = {{0.5, 1}, {0.5, 2}, {1.0, 1}, {0.75, 3}};
  for (auto [s, k] : cases) {
    const auto spec = make_fractional(s);
    const auto fit = fitted_curvature(make_problem(spec, 2.0, 64), k);
    const double expected = bifurcation_direction(spec, k).lambda_ddot;
    EXPECT_NEAR(fit.lambda_ddot() / expected, 1.0, 0.05) << s << " " << k;
    EXPECT_NEAR(fit.c0, operator_symbol(spec, k), 1e-3);
    EXPECT_NEAR(fit.c1, 0.0, 1e-10);
  }
}

TEST(FittedCurvature, IlwMultiplier) {
  // sigma_1 is about 0.31 here, so the quartic term is felt sooner; fit over a narrower window.
  const auto spec = make_ilw(0.5, 1.0);
  const auto fit = fitted_curvature(make_problem(spec, 2.0, 64), 1, 0.05);
  EXPECT_NEAR(fit.lambda_ddot() / bifurcation_direction(spec, 1).lambda_ddot, 1.0, 0.05);
}

TEST(SymmetryT, InvolutionAndOracleImages) {
  const auto ps = bo_problem(256);
  for (double lambda : {-5.0, -2.0, -1.5}) {
    const auto pt = make_point(ps, lambda, bo_negative(lambda, BOSign::plus, 256));
    const auto img = symmetry_T(ps, pt);
    EXPECT_EQ(img.lambda, -lambda);
    EXPECT_LT(img.residual_l2, 1e-9);
    EXPECT_LE(img.residual_l2, pt.residual_l2 + 1e-12);
    const auto oracle = bo_positive(1, -lambda, BOSign::plus, 256);
    for (int n = 0; n <= 256; ++n) EXPECT_NEAR(img.u[n], oracle[n], 1e-12);
    const auto back = symmetry_T(ps, img);
    EXPECT_EQ(back.lambda, lambda);
    EXPECT_LT(linf_norm(back.u - pt.u), 1e-12);
  }
  const auto constant = make_point(ps, -3.0, constant_solution(2.0, -3.0, 256));
  const auto to_trivial = symmetry_T(ps, constant);
  EXPECT_EQ(to_trivial.lambda, 3.0);
  EXPECT_EQ(l2_norm(to_trivial.u), 0.0);
  EXPECT_THROW(symmetry_T(make_problem(make_fractional(0.5), 3.0, 8), constant), error);
}

TEST(ScaleTk, DilatesBenjaminOnoBranch) {
  const auto ps = bo_problem(128);
  const auto pt = make_point(ps, 1.5, bo_positive(1, 1.5, BOSign::plus, 128));
  const auto img = scale_T_k(ps, pt, 2, 512);
  EXPECT_EQ(img.lambda, 3.0);
  EXPECT_EQ(img.u.order(), 256);
  EXPECT_LT(linf_norm(img.u - bo_positive(2, 3.0, BOSign::plus, 256)), 1e-10);
  EXPECT_LT(img.residual_l2, 1e-9);

  const auto same = scale_T_k(ps, pt, 1, 512);
  EXPECT_EQ(same.u, pt.u);
  const auto zero = scale_T_k(ps, make_point(ps, 0.7, CosineField(128)), 3, 512);
  EXPECT_NEAR(zero.lambda, 2.1, 1e-15);
  EXPECT_EQ(l2_norm(zero.u), 0.0);
}

TEST(ScaleTk, GeneralExponents) {
  const auto ps = make_problem(make_fractional(0.75), 3.0, 32);
  ContinuationConfig cfg;
  cfg.newton_tol = 1e-12;
  const auto pt = branch_switch(ps, 1, 0.2, cfg);
  const auto img = scale_T_k(ps, pt, 3, 96);
  EXPECT_NEAR(img.lambda, std::pow(3.0, 1.5) * pt.lambda, 1e-12);
  // The residual is dilated and multiplied by k^{2s/(p-1)} k^{2s}.
  const double factor = std::pow(3.0, 0.75) * std::pow(3.0, 1.5);
  EXPECT_NEAR(img.residual_l2, factor * pt.residual_l2, 1e-13);
  EXPECT_LT(img.residual_l2, 1e-9);
}

TEST(ScaleTk, Refusals) {
  const auto ps = make_problem(make_ilw(0.5, 1.0), 2.0, 16);
  const auto pt = make_point(ps, 0.5, CosineField(16));
  try {
    scale_T_k(ps, pt, 2, 64);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unsupported_multiplier);
  }
  const auto bo = bo_problem(16);
  try {
    scale_T_k(bo, make_point(bo, 0.5, CosineField(16)), 5, 64);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::truncation_overflow);
  }
}

TEST(ScaleTk, WholeBranch) {
  const auto ps = bo_problem(64);
  ContinuationConfig cfg;
  cfg.target_lambda = 2.0;
  const auto br = bifurcating_branch(ps, 1, 0.2, cfg);
  const auto img = scale_T_k(br, 2, 128);
  EXPECT_EQ(img.origin.k, 2);
  for (const auto& pt : img.points)
    EXPECT_LT(linf_norm(pt.u - bo_positive(2, pt.lambda, BOSign::minus, 128)), 1e-9);
}
