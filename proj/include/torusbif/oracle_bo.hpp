#pragma once

// Closed-form periodic Benjamin-Ono profiles (s = 1/2, m = 1, p = 2):
//   lambda < -1:  u(x) = 1 / (-lambda +- sqrt(lambda^2 - 1) cos x),
//   lambda > k:   u(x) = k^2 / (lambda +- sqrt(lambda^2 - k^2) cos kx) - lambda.
// Their Fourier coefficients decay like exp(-beta |n|), beta = atanh(k / |lambda|).

#include <cmath>
#include <string>

#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/operator.hpp"
#include "torusbif/spectrum.hpp"

namespace torusbif {

enum class BOSign { plus, minus };

inline double sign_value(BOSign s) { return s == BOSign::plus ? 1.0 : -1.0; }

struct BOParams {
  enum class Family { negative, positive };
  Family family = Family::positive;
  int branch_k = 1;
  double lambda = 2.0;
  BOSign sign = BOSign::plus;
};

/// The operator setting in which the closed forms are exact solutions.
inline ProblemSpec bo_problem(int order) { return make_problem(make_fractional(0.5), 2.0, order); }

namespace detail {

inline constexpr double bo_refusal_gap = 1e-6;
inline constexpr double bo_selftest_tol = 1e-10;

// Samples f on a grid fine enough that coefficients decaying like exp(-beta n)
// alias below roundoff, then projects to the requested order.
template <class Fn>
CosineField sample_even(Fn&& f, int order, double beta) {
  const double need = static_cast<double>(order) + 40.0 / beta;
  const std::size_t m =
      next_fast_size(std::max<std::size_t>(4 * static_cast<std::size_t>(order) + 1, static_cast<std::size_t>(std::ceil(need))));
  GridSamples g;
  g.values.resize(m);
  for (std::size_t j = 0; j < m; ++j) g.values[j] = f(grid_point(j, m));
  return from_grid(g, order);
}

// Exponential-ansatz coefficients: a_0 = base, a_{k n} = 2 k (-+1)^n e^{-beta n}.
inline CosineField ansatz_coefficients(int order, int k, double beta, double base, BOSign sign) {
  CosineField f(order);
  f[0] = base;
  const double alt = sign == BOSign::plus ? -1.0 : 1.0;
  double factor = 1.0;
  for (int n = 1; static_cast<long>(n) * k <= order; ++n) {
    factor *= alt;
    f[static_cast<std::size_t>(n * k)] = 2.0 * k * factor * std::exp(-beta * n);
  }
  return f;
}

inline void self_test(const CosineField& sampled, const CosineField& ansatz) {
  double worst = 0.0;
  for (int n = 0; n <= sampled.order(); ++n) worst = std::max(worst, std::abs(sampled[n] - ansatz[n]));
  if (worst > bo_selftest_tol)
    throw error(errc::invalid_argument, "closed form and exponential ansatz disagree by " + std::to_string(worst));
}

}  // namespace detail

/// beta(lambda) = atanh(k / |lambda|), the decay rate of the Fourier coefficients.
inline double bo_decay_rate(int k, double lambda) { return std::atanh(static_cast<double>(k) / std::abs(lambda)); }

/// Strictly positive profiles for lambda < -1.
inline CosineField bo_negative(double lambda, BOSign sign, int order) {
  if (!(lambda < -1.0 - detail::bo_refusal_gap))
    throw error(errc::lambda_out_of_range, "negative family needs lambda < -1, got " + std::to_string(lambda));
  const double root = std::sqrt(lambda * lambda - 1.0);
  const double sg = sign_value(sign);
  const double beta = bo_decay_rate(1, lambda);
  CosineField u = detail::sample_even([&](double x) { return 1.0 / (-lambda + sg * root * std::cos(x)); }, order, beta);
  detail::self_test(u, detail::ansatz_coefficients(order, 1, beta, 1.0, sign));
  return u;
}

/// Profiles on the branch emanating from (k, 0), lambda > k.
inline CosineField bo_positive(int k, double lambda, BOSign sign, int order) {
  if (k < 1) throw error(errc::invalid_argument, "branch index must be at least 1");
  if (!(lambda > k + detail::bo_refusal_gap))
    throw error(errc::lambda_out_of_range,
                "branch " + std::to_string(k) + " needs lambda > " + std::to_string(k) + ", got " + std::to_string(lambda));
  if (order < k) throw error(errc::truncation_overflow, "truncation order below the branch mode");
  const double kk = static_cast<double>(k);
  const double root = std::sqrt(lambda * lambda - kk * kk);
  const double sg = sign_value(sign);
  const double beta = bo_decay_rate(k, lambda);
  CosineField u = detail::sample_even(
      [&](double x) { return kk * kk / (lambda + sg * root * std::cos(kk * x)) - lambda; }, order, beta / kk);
  detail::self_test(u, detail::ansatz_coefficients(order, k, beta, kk - lambda, sign));
  return u;
}

inline CosineField bo_field(const BOParams& params, int order) {
  if (params.family == BOParams::Family::negative) {
    if (params.branch_k != 1) throw error(errc::invalid_argument, "negative family exists for k = 1 only");
    return bo_negative(params.lambda, params.sign, order);
  }
  return bo_positive(params.branch_k, params.lambda, params.sign, order);
}

struct BOParametrization {
  double amplitude = 0.0;         // coefficient of cos(kx)
  double predicted_lambda = 0.0;  // sigma_k + lambda''(0) amplitude^2 / 2
};

inline BOParametrization bo_branch_parametrization(int k, double lambda, BOSign sign = BOSign::plus) {
  if (k < 1) throw error(errc::invalid_argument, "branch index must be at least 1");
  if (!(lambda > k + detail::bo_refusal_gap))
    throw error(errc::lambda_out_of_range, "branch " + std::to_string(k) + " needs lambda > k");
  const double beta = bo_decay_rate(k, lambda);
  BOParametrization out;
  out.amplitude = (sign == BOSign::plus ? -2.0 : 2.0) * k * std::exp(-beta);
  const auto spec = make_fractional(0.5);
  const double ddot = bifurcation_direction(spec, k).lambda_ddot;
  out.predicted_lambda = operator_symbol(spec, k) + 0.5 * ddot * out.amplitude * out.amplitude;
  return out;
}

}  // namespace torusbif
