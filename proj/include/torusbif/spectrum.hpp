#pragma once

// Closed-form spectra of the linearizations along the trivial and constant
// branches, transversality, and the local bifurcation data for p = 2.

#include <cmath>
#include <numbers>
#include <vector>

#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/operator.hpp"

namespace torusbif {

struct EigenData {
  int k = 0;
  double sigma = 0.0;
  CosineField kernel_mode;  // 1 for k = 0, cos(kx) otherwise
  int chi = 1;              // algebraic multiplicity
};

/// sigma_k = k^{2s} m(k) for k = 0..k_max.
inline std::vector<EigenData> trivial_spectrum(const MultiplierSpec& spec, int k_max) {
  std::vector<EigenData> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k)
    out.push_back({k, operator_symbol(spec, k), CosineField::mode(k, k, 1.0), 1});
  return out;
}

/// 0 and -sigma_k/(p-1): the generalized spectrum along u = -lambda^{1/(p-1)}.
inline std::vector<double> constant_branch_spectrum(const MultiplierSpec& spec, double p, int k_max) {
  if (!(p > 1.0)) throw error(errc::invalid_argument, "constant branch spectrum needs p > 1");
  std::vector<double> out;
  for (int k = 0; k <= k_max; ++k) out.push_back(k == 0 ? 0.0 : -operator_symbol(spec, k) / (p - 1.0));
  return out;
}

struct Transversality {
  double projection = 0.0;
  bool passes = false;
};

/// Pairs d_lambda d_u F(sigma_k, 0)[cos kx] with the cokernel element cos(kx).
/// The mixed derivative is taken from the Galerkin linearization, which is affine in lambda.
inline Transversality transversality_check(const ProblemSpec& ps, int k) {
  if (k < 1) throw error(errc::invalid_argument, "transversality is checked for k >= 1");
  if (k > ps.order) throw error(errc::truncation_overflow, "mode k exceeds the truncation order");
  const CosineField kernel = CosineField::mode(ps.order, k);
  const CosineField zero(ps.order);
  const double sigma = operator_symbol(ps.multiplier, k);
  const CosineField mixed = jacobian_apply(ps, sigma + 1.0, zero, kernel) - jacobian_apply(ps, sigma, zero, kernel);
  const double proj = l2_inner(mixed, kernel);
  return {proj, std::abs(proj) > 1e-8};
}

namespace detail {
inline void require_quadratic(double p) {
  if (p != 2.0) throw error(errc::unsupported_p, "closed-form local data is available for p = 2 only");
}
}  // namespace detail

struct BifurcationDirection {
  double lambda_dot = 0.0;
  double lambda_ddot = 0.0;
};

/// lambda''(0) = (1/sigma_k) (2^{2s+1} m(2k) - 3 m(k)) / (2^{2s} m(2k) - m(k)).
inline BifurcationDirection bifurcation_direction(const MultiplierSpec& spec, int k, double p = 2.0) {
  detail::require_quadratic(p);
  if (k < 1) throw error(errc::invalid_argument, "bifurcation direction needs k >= 1");
  const double mk = symbol(spec, k);
  const double m2k = symbol(spec, 2 * k);
  const double scale = std::pow(2.0, 2.0 * spec.s);
  const double sigma = operator_symbol(spec, k);
  return {0.0, (2.0 * scale * m2k - 3.0 * mk) / ((scale * m2k - mk) * sigma)};
}

/// Solution of L phi - sigma_k phi = 2 cos^2(kx) with vanishing kernel component:
///   phi_k = -1/sigma_k + cos(2kx) / (sigma_{2k} - sigma_k).
/// The result is checked against its defining equation before it is returned.
inline CosineField corrector_phi(const MultiplierSpec& spec, int k, double p = 2.0, int order = 0) {
  detail::require_quadratic(p);
  if (k < 1) throw error(errc::invalid_argument, "corrector needs k >= 1");
  order = std::max(order, 2 * k);
  const double sk = operator_symbol(spec, k);
  const double s2k = operator_symbol(spec, 2 * k);
  CosineField phi(order);
  phi[0] = -1.0 / sk;
  phi[static_cast<std::size_t>(2 * k)] = 1.0 / (s2k - sk);

  CosineField lhs = apply_L(spec, phi) - sk * phi;
  CosineField rhs(order);
  rhs[0] = 1.0;
  rhs[static_cast<std::size_t>(2 * k)] = 1.0;  // 2 cos^2(kx) = 1 + cos(2kx)
  const double defect = l2_norm(lhs - rhs);
  if (defect > 1e-12) throw error(errc::invalid_argument, "corrector failed its defining equation");
  return phi;
}

struct LocalPoint {
  double lambda = 0.0;
  CosineField u;
};

/// Second-order expansion lambda = sigma_k + lambda''(0) t^2 / 2, u = t cos(kx) + (t^2/2) phi_k.
inline LocalPoint local_predictor(const MultiplierSpec& spec, int k, double amplitude, int order, double p = 2.0) {
  detail::require_quadratic(p);
  if (order < 2 * k) throw error(errc::truncation_overflow, "predictor needs order >= 2k");
  const auto dir = bifurcation_direction(spec, k, p);
  const CosineField phi = corrector_phi(spec, k, p, order);
  LocalPoint out;
  out.lambda = operator_symbol(spec, k) + 0.5 * dir.lambda_ddot * amplitude * amplitude;
  out.u = CosineField::mode(order, k, amplitude) + (0.5 * amplitude * amplitude) * phi;
  return out;
}

}  // namespace torusbif
