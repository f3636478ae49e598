#pragma once

// A-priori bounds for solutions: the L^2 bound valid for every p, the
// Phi/Psi bounds in H^{2s} and L^infinity for p < 4s + 1, the lower bound
// for the fractional Laplacian, and the coefficient chain behind the
// L^infinity estimate.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "torusbif/branch.hpp"
#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/operator.hpp"

namespace torusbif {

// None of these are known in closed form; 1.0 is a placeholder and any
// bound built on them is indicative only.
struct BoundConstants {
  double c_gns = 1.0;
  double rho = 1.0;
  double c_rho = 1.0;
  double a_p_plus_1 = 1.0;  // embedding constant A_{p+1}
  double a_2p = 1.0;        // embedding constant A_{2p}

  void validate() const {
    for (double v : {c_gns, rho, c_rho, a_p_plus_1, a_2p})
      if (!(v > 0.0) || !std::isfinite(v)) throw error(errc::invalid_argument, "bound constants must be positive");
  }
};

inline const char* placeholder_constants_banner() {
  return "bound constants are user-supplied; with the 1.0 placeholders the H^2s and Linf bounds are indicative only";
}

inline double l2_bound(double p, double lambda) {
  return std::sqrt(two_pi) * std::pow(std::abs(lambda), 1.0 / (p - 1.0));
}

/// Riemann zeta for a > 1: direct sum plus an Euler-Maclaurin tail.
inline double zeta(double a) {
  if (!(a > 1.0)) throw error(errc::invalid_argument, "zeta needs an argument above 1");
  constexpr int terms = 64;
  double sum = 0.0;
  for (int n = terms - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -a);
  const double k = terms;
  const double ka = std::pow(k, -a);
  sum += k * ka / (a - 1.0) + 0.5 * ka + a * ka / (12.0 * k) - a * (a + 1.0) * (a + 2.0) * ka / (720.0 * k * k * k) +
         a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) * ka / (30240.0 * std::pow(k, 5.0));
  return sum;
}

/// max{sqrt(2 pi), sqrt(2 zeta(4s))}: linf <= C (l2 + hdot_2s).
inline double linf_chain_constant(double s) { return std::max(std::sqrt(two_pi), std::sqrt(2.0 * zeta(4.0 * s))); }

inline bool bounds_regime(const ProblemSpec& ps) { return ps.p < 4.0 * ps.multiplier.s + 1.0; }

namespace detail {

inline void require_regime(const ProblemSpec& ps) {
  if (!bounds_regime(ps))
    throw error(errc::unsupported_regime, "the H^2s bounds need p < 4s + 1 (p = " + std::to_string(ps.p) +
                                              ", s = " + std::to_string(ps.multiplier.s) + ")");
}

struct PhiPolynomial {
  double c2x2, c1, q, c0;  // c2x2 x^2 - c1 x^q - c0
  double operator()(double x) const { return c2x2 * x * x - c1 * std::pow(x, q) - c0; }
};

inline PhiPolynomial phi_polynomial(const ProblemSpec& ps, const BoundConstants& bc, double lambda) {
  const double s = ps.multiplier.s, p = ps.p, m0 = ps.multiplier.m0;
  const double al = std::abs(lambda);
  const double cal1 = (bc.c_gns + bc.rho) * std::pow(two_pi, 1.0 + (p - 1.0) * (2.0 * s - 1.0) / (4.0 * s));
  const double cal2 = two_pi + bc.c_rho * std::pow(two_pi, (p + 1.0) / 2.0);
  return {two_pi * m0, cal1 * std::pow(al, 2.0 / (p - 1.0) + (2.0 * s - 1.0) / (2.0 * s)), (p - 1.0) / (2.0 * s),
          cal2 * std::pow(al, (p + 1.0) / (p - 1.0))};
}

}  // namespace detail

/// The polynomial whose positive zero is Phi; exposed for root checks.
inline double phi_polynomial_value(const ProblemSpec& ps, const BoundConstants& bc, double lambda, double x) {
  return detail::phi_polynomial(ps, bc, lambda)(x);
}

/// Phi(lambda): unique positive zero, by bracketing and bisection.
inline double phi_rho(const ProblemSpec& ps, const BoundConstants& bc, double lambda) {
  detail::require_regime(ps);
  bc.validate();
  if (lambda == 0.0) return 0.0;
  const auto poly = detail::phi_polynomial(ps, bc, lambda);
  double lo = 0.0, hi = 1.0;
  while (poly(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw error(errc::no_convergence, "could not bracket the Phi root");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (poly(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Leading large-|lambda| behaviour of Phi: coefficient and exponent.
struct PowerLaw {
  double coefficient;
  double exponent;
  double operator()(double lambda) const { return coefficient * std::pow(std::abs(lambda), exponent); }
};

inline PowerLaw phi_asymptotic(const ProblemSpec& ps, const BoundConstants& bc) {
  detail::require_regime(ps);
  const double s = ps.multiplier.s, p = ps.p;
  const double denom = 4.0 * s - p + 1.0;
  const double coef = std::pow((bc.c_gns + bc.rho) / ps.multiplier.m0 *
                                   std::pow(two_pi, (p - 1.0) * (2.0 * s - 1.0) / (4.0 * s)),
                               2.0 * s / denom);
  return {coef, (2.0 * s * p + 2.0 * s - p + 1.0) / (denom * (p - 1.0))};
}

inline double psi_rho(const ProblemSpec& ps, const BoundConstants& bc, double lambda) {
  const double phi = phi_rho(ps, bc, lambda);
  const double p = ps.p, al = std::abs(lambda);
  const double base = two_pi * std::pow(al, 2.0 / (p - 1.0)) + phi * phi;
  const double inner = two_pi * std::pow(al, 2.0 / (p - 1.0) + 2.0) +
                       2.0 * al * std::pow(bc.a_p_plus_1, p + 1.0) * std::pow(base, (p + 1.0) / 2.0) +
                       std::pow(bc.a_2p, 2.0 * p) * std::pow(base, p);
  return std::sqrt(inner) / ps.multiplier.m0;
}

inline PowerLaw psi_asymptotic(const ProblemSpec& ps, const BoundConstants& bc) {
  const auto phi = phi_asymptotic(ps, bc);
  return {std::pow(bc.a_2p, ps.p) / ps.multiplier.m0 * std::pow(phi.coefficient, ps.p), ps.p * phi.exponent};
}

inline double h2s_bound(const ProblemSpec& ps, const BoundConstants& bc, double lambda) {
  const double psi = psi_rho(ps, bc, lambda);
  return std::sqrt(two_pi * std::pow(std::abs(lambda), 2.0 / (ps.p - 1.0)) + psi * psi);
}

inline double linf_bound(const ProblemSpec& ps, const BoundConstants& bc, double lambda) {
  return std::sqrt(two_pi) * h2s_bound(ps, bc, lambda);
}

struct LowerBoundResult {
  double min_u = 0.0;
  double bound = 0.0;
  bool passes = false;
};

/// u >= -lambda^{1/(p-1)} for the fractional Laplacian and lambda >= 0.
inline LowerBoundResult lower_bound_check(const MultiplierSpec& spec, double lambda, const CosineField& u, double p) {
  if (!spec.is_fractional())
    throw error(errc::unsupported_multiplier, "the lower bound is only established for the fractional Laplacian");
  if (lambda < 0.0) throw error(errc::invalid_argument, "the lower bound needs lambda >= 0");
  LowerBoundResult r;
  r.min_u = grid_min(u);
  r.bound = -std::pow(lambda, 1.0 / (p - 1.0));
  r.passes = r.min_u >= r.bound - 1e-8;
  return r;
}

struct BoundCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool passes = false;
  bool hard = true;  // false when the bound rests on placeholder constants
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  bool passes() const {
    for (const auto& c : checks)
      if (!c.passes) return false;
    return true;
  }
  bool hard_passes() const {
    for (const auto& c : checks)
      if (c.hard && !c.passes) return false;
    return true;
  }
  const BoundCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Every bound that applies to (lambda, u). Phi/Psi bounds need constants and p < 4s + 1.
inline BoundReport check_point(const ProblemSpec& ps, const std::optional<BoundConstants>& bc, double lambda,
                               const CosineField& u) {
  constexpr double slack = 1e-10;
  BoundReport rep;
  const Norms nm = norms(u, ps.multiplier.s);
  auto add = [&](std::string name, double measured, double bound, bool hard) {
    rep.checks.push_back({std::move(name), measured, bound, measured <= bound * (1.0 + slack) + slack, hard});
  };
  add("l2", nm.l2, l2_bound(ps.p, lambda), true);
  add("linf_chain", nm.linf, linf_chain_constant(ps.multiplier.s) * (nm.l2 + nm.hdot_2s), true);
  if (bc && bounds_regime(ps)) {
    add("h2s", nm.h_2s, h2s_bound(ps, *bc, lambda), false);
    add("linf", nm.linf, linf_bound(ps, *bc, lambda), false);
  }
  if (ps.multiplier.is_fractional() && lambda >= 0.0) {
    const auto lb = lower_bound_check(ps.multiplier, lambda, u, ps.p);
    rep.checks.push_back({"lower", lb.min_u, lb.bound, lb.passes, true});
  }
  return rep;
}

inline BoundReport check_point(const ProblemSpec& ps, const std::optional<BoundConstants>& bc, const BranchPoint& pt) {
  return check_point(ps, bc, pt.lambda, pt.u);
}

}  // namespace torusbif
