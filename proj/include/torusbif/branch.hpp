#pragma once

// Solution points and ordered branches.

#include <string>
#include <vector>

#include "torusbif/field.hpp"
#include "torusbif/operator.hpp"

namespace torusbif {

struct BranchPoint {
  double lambda = 0.0;
  CosineField u;
  double residual_l2 = 0.0;
  Norms norms;
  double min_sv = 0.0;
  int negative_count = 0;  // Morse index of the Jacobian; parity gives sign(det)
  double arclength = 0.0;
};

enum class OriginKind { trivial_mode, constant, oracle, manual };

struct Origin {
  OriginKind kind = OriginKind::manual;
  int k = 0;  // bifurcating mode for trivial_mode
};

inline std::string to_string(OriginKind k) {
  switch (k) {
    case OriginKind::trivial_mode: return "TrivialMode";
    case OriginKind::constant: return "Constant";
    case OriginKind::oracle: return "Oracle";
    case OriginKind::manual: return "Manual";
  }
  return "Manual";
}

inline OriginKind origin_kind_from_string(const std::string& s) {
  if (s == "TrivialMode") return OriginKind::trivial_mode;
  if (s == "Constant") return OriginKind::constant;
  if (s == "Oracle") return OriginKind::oracle;
  if (s == "Manual") return OriginKind::manual;
  throw error(errc::config_error, "unknown branch origin '" + s + "'");
}

struct Branch {
  ProblemSpec problem;
  Origin origin;
  std::vector<BranchPoint> points;
  std::string stop_reason;
};

/// Fills residual, norms and Jacobian diagnostics for (lambda, u).
inline BranchPoint make_point(const ProblemSpec& ps, double lambda, CosineField u, double arclength = 0.0) {
  BranchPoint pt;
  pt.lambda = lambda;
  pt.u = std::move(u);
  pt.residual_l2 = residual_norm(ps, lambda, pt.u);
  pt.norms = norms(pt.u, ps.multiplier.s);
  const auto sum = spectral_summary(jacobian_matrix(ps, lambda, pt.u));
  pt.min_sv = sum.min_sv;
  pt.negative_count = sum.negative_count;
  pt.arclength = arclength;
  return pt;
}

}  // namespace torusbif
