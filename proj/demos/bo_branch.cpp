// Traces the first Benjamin-Ono branch from its bifurcation point, reports the
// distance to the exact periodic profile along the way, locates the branch
// points on the trivial branch and checks the a-priori bounds at the end point.

#include <cstdio>

#include "torusbif/torusbif.hpp"

using namespace torusbif;

int main() {
  const ProblemSpec ps = bo_problem(128);

  std::printf("trivial branch events on [0.5, 3.5]:\n");
  for (const auto& e : detect_events(trivial_branch(ps, 0.5, 3.5, {})))
    std::printf("  %-12s lambda = %.9f\n", to_string(e.type).c_str(), e.lambda);

  ContinuationConfig cfg;
  cfg.target_lambda = 4.0;
  const Branch br = bifurcating_branch(ps, 1, 0.2, cfg);
  std::printf("\nbranch from sigma_1 = 1: %zu points (%s)\n", br.points.size(), br.stop_reason.c_str());
  std::printf("  %10s %12s %12s %14s\n", "lambda", "h2s norm", "residual", "closed-form err");
  for (std::size_t i = 0; i < br.points.size(); i += 6) {
    const auto& pt = br.points[i];
    const double err = linf_norm(pt.u - bo_positive(1, pt.lambda, BOSign::minus, ps.order));
    std::printf("  %10.5f %12.6f %12.3e %14.3e\n", pt.lambda, pt.norms.h_2s, pt.residual_l2, err);
  }

  const auto& last = br.points.back();
  std::printf("\nbounds at lambda = %.3f:\n", last.lambda);
  for (const auto& c : check_point(ps, BoundConstants{}, last).checks)
    std::printf("  %-11s %12.6f %s %12.6f  %s%s\n", c.name.c_str(), c.measured, c.name == "lower" ? ">=" : "<=",
                c.bound, c.passes ? "ok" : "FAIL", c.hard ? "" : " (placeholder constants)");
  return 0;
}
