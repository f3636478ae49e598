#pragma once

// Even real periodic functions as truncated cosine series
//   u(x) = a_0 + sum_{n=1}^{N} a_n cos(n x),
// with complex coefficients u^(0) = a_0, u^(+-n) = a_n / 2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torusbif/error.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/transform.hpp"

namespace torusbif {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Receives non-fatal diagnostics (asymmetric grid input and the like).
inline std::function<void(std::string_view)>& warning_sink() {
  static std::function<void(std::string_view)> sink = [](std::string_view msg) {
    std::cerr << "[torusbif warning] " << msg << '\n';
  };
  return sink;
}

inline void warn(std::string_view msg) {
  if (auto& sink = warning_sink()) sink(msg);
}

class CosineField {
 public:
  CosineField() : a_(1, 0.0) {}
  explicit CosineField(int order) : a_(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0) {}
  explicit CosineField(std::vector<double> coeffs) : a_(std::move(coeffs)) {
    if (a_.empty()) a_.push_back(0.0);
  }

  static CosineField constant(int order, double c) {
    CosineField f(order);
    f.a_[0] = c;
    return f;
  }
  static CosineField mode(int order, int k, double amplitude = 1.0) {
    CosineField f(order);
    f.a_.at(static_cast<std::size_t>(k)) = amplitude;
    return f;
  }

  int order() const { return static_cast<int>(a_.size()) - 1; }
  std::size_t size() const { return a_.size(); }

  double operator[](std::size_t n) const { return a_[n]; }
  double& operator[](std::size_t n) { return a_[n]; }

  std::span<const double> coeffs() const { return a_; }
  std::span<double> coeffs() { return a_; }
  const std::vector<double>& vec() const { return a_; }

  /// Pointwise evaluation by direct summation.
  double operator()(double x) const {
    double v = a_[0];
    for (std::size_t n = 1; n < a_.size(); ++n) v += a_[n] * std::cos(static_cast<double>(n) * x);
    return v;
  }

  /// Truncates or zero-pads to a new order.
  CosineField resized(int order) const {
    CosineField f(order);
    const std::size_t m = std::min(a_.size(), f.a_.size());
    std::copy_n(a_.begin(), m, f.a_.begin());
    return f;
  }

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
  }

  CosineField& operator+=(const CosineField& o) {
    check_same(o);
    for (std::size_t n = 0; n < a_.size(); ++n) a_[n] += o.a_[n];
    return *this;
  }
  CosineField& operator-=(const CosineField& o) {
    check_same(o);
    for (std::size_t n = 0; n < a_.size(); ++n) a_[n] -= o.a_[n];
    return *this;
  }
  CosineField& operator*=(double c) {
    for (auto& v : a_) v *= c;
    return *this;
  }
  friend CosineField operator+(CosineField a, const CosineField& b) { return a += b; }
  friend CosineField operator-(CosineField a, const CosineField& b) { return a -= b; }
  friend CosineField operator*(double c, CosineField a) { return a *= c; }
  friend CosineField operator*(CosineField a, double c) { return a *= c; }
  friend CosineField operator-(CosineField a) { return a *= -1.0; }

  bool operator==(const CosineField&) const = default;

 private:
  void check_same(const CosineField& o) const {
    if (o.a_.size() != a_.size())
      throw error(errc::invalid_argument, "fields of different truncation order");
  }

  std::vector<double> a_;
};

struct GridSamples {
  std::vector<double> values;  // u(2 pi j / M), j = 0..M-1
  std::size_t size() const { return values.size(); }
};

inline double grid_point(std::size_t j, std::size_t m) {
  return two_pi * static_cast<double>(j) / static_cast<double>(m);
}

/// Samples at M uniform nodes; requires M >= 2N + 1.
inline GridSamples to_grid(const CosineField& u, std::size_t m) {
  const auto order = static_cast<std::size_t>(u.order());
  if (m < 2 * order + 1)
    throw error(errc::grid_too_coarse,
                "grid of " + std::to_string(m) + " points cannot represent order " + std::to_string(order));
  std::vector<cplx> spec(m, cplx{0.0, 0.0});
  spec[0] = u[0];
  for (std::size_t n = 1; n <= order; ++n) {
    spec[n] = 0.5 * u[n];
    spec[m - n] = 0.5 * u[n];
  }
  const auto vals = synthesize(spec);
  GridSamples g;
  g.values.resize(m);
  for (std::size_t j = 0; j < m; ++j) g.values[j] = vals[j].real();
  return g;
}

namespace detail {

// Cosine coefficients (order N) of the even trigonometric interpolant of
// already-symmetric samples.
inline CosineField cosine_projection(const std::vector<double>& values, int order) {
  const std::size_t m = values.size();
  std::vector<cplx> z(values.begin(), values.end());
  const auto c = analyze(z);
  CosineField f(order);
  f[0] = c[0].real();
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(order), m / 2);
  for (std::size_t n = 1; n <= top; ++n) {
    const bool nyquist = (m % 2 == 0) && (n == m / 2);
    f[n] = nyquist ? c[n].real() : 2.0 * c[n].real();
  }
  return f;
}

inline std::vector<double> symmetrize(std::span<const double> values, double* asymmetry = nullptr) {
  const std::size_t m = values.size();
  std::vector<double> out(m);
  double worst = 0.0;
  out[0] = values[0];
  for (std::size_t j = 1; j < m; ++j) {
    out[j] = 0.5 * (values[j] + values[m - j]);
    worst = std::max(worst, std::abs(values[j] - values[m - j]));
  }
  if (asymmetry) *asymmetry = worst;
  return out;
}

}  // namespace detail

/// Cosine coefficients of the even interpolant, after symmetrizing g_j <- (g_j + g_{M-j})/2.
inline CosineField from_grid(const GridSamples& g, int order) {
  if (g.values.empty()) throw error(errc::invalid_argument, "empty grid");
  double asym = 0.0;
  auto sym = detail::symmetrize(g.values, &asym);
  if (asym > 1e-8) warn("from_grid: input asymmetry " + std::to_string(asym) + " removed by symmetrization");
  return detail::cosine_projection(sym, order);
}

/// Coefficient n of L u is |n|^{2s} m(n) a_n.
inline CosineField apply_L(const MultiplierSpec& spec, const CosineField& u) {
  CosineField out(u.order());
  for (int n = 1; n <= u.order(); ++n) out[n] = operator_symbol(spec, n) * u[n];
  return out;
}

/// Minimum grid size for the projected nonlinearity |u|^p at truncation order N.
///
/// Modes of |u|^p reach pN for even integer p, so M >= (p+1)N + 1 keeps modes
/// 0..N alias free (p = 2 gives the familiar 3N + 1). Other p are not band limited;
/// they get at least a 4N oversampled grid and carry a small aliasing error.
inline std::size_t min_dealias_points(int order, double p) {
  const double n = static_cast<double>(order);
  const bool even_integer = p == std::floor(p) && static_cast<long>(p) % 2 == 0;
  double m = (p + 1.0) * n + 1.0;
  if (!even_integer) m = std::max(m, 4.0 * n);
  return static_cast<std::size_t>(std::ceil(m));
}

/// min_dealias_points rounded up to an FFT-friendly size.
inline std::size_t dealias_size(int order, double p) { return next_fast_size(min_dealias_points(order, p)); }

/// sign(x)|x|^q, continuous for q >= 0.
inline double signed_power(double x, double q) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), q), x);
}

/// Cosine projection (order N) of x -> f(u(x), x-index) evaluated on an M-point grid.
template <class PointFn>
CosineField project_pointwise(const CosineField& u, std::size_t m, PointFn&& fn) {
  const auto g = to_grid(u, m);
  std::vector<double> vals(m);
  for (std::size_t j = 0; j < m; ++j) vals[j] = fn(g.values[j], j);
  return detail::cosine_projection(detail::symmetrize(vals), u.order());
}

/// Projection of |u|^p, or of u|u|^{p-2} when signed.
inline CosineField nonlinearity(const CosineField& u, double p, bool is_signed, std::size_t m) {
  if (m < min_dealias_points(u.order(), p))
    throw error(errc::grid_too_coarse, "nonlinearity needs at least " +
                                           std::to_string(min_dealias_points(u.order(), p)) + " grid points, got " +
                                           std::to_string(m));
  if (is_signed) return project_pointwise(u, m, [p](double v, std::size_t) { return signed_power(v, p - 1.0); });
  return project_pointwise(u, m, [p](double v, std::size_t) { return std::pow(std::abs(v), p); });
}

/// Norm bundle. L^2 carries the 2 pi factor, the homogeneous norms do not:
///   l2^2 = 2 pi (a_0^2 + 1/2 sum a_n^2),  hdot_r^2 = 1/2 sum n^{2r} a_n^2.
struct Norms {
  double l2 = 0.0;
  double hdot_s = 0.0;
  double hdot_2s = 0.0;
  double h_s = 0.0;
  double h_2s = 0.0;
  double linf = 0.0;
  double l1_coeff = 0.0;  // sum over Z of |u^(n)|
};

inline double l2_norm(const CosineField& u) {
  double acc = u[0] * u[0];
  for (int n = 1; n <= u.order(); ++n) acc += 0.5 * u[n] * u[n];
  return std::sqrt(two_pi * acc);
}

inline double hdot_norm(const CosineField& u, double r) {
  double acc = 0.0;
  for (int n = 1; n <= u.order(); ++n) acc += 0.5 * std::pow(static_cast<double>(n), 2.0 * r) * u[n] * u[n];
  return std::sqrt(acc);
}

/// L^2 pairing (u, v) = int_T u v.
inline double l2_inner(const CosineField& u, const CosineField& v) {
  const int order = std::min(u.order(), v.order());
  double acc = u[0] * v[0];
  for (int n = 1; n <= order; ++n) acc += 0.5 * u[n] * v[n];
  return two_pi * acc;
}

inline std::size_t linf_grid_size(int order) {
  return next_fast_size(std::max<std::size_t>(1024, 8 * static_cast<std::size_t>(order)));
}

inline double grid_min(const CosineField& u) {
  const auto g = to_grid(u, linf_grid_size(u.order()));
  return *std::min_element(g.values.begin(), g.values.end());
}

inline double linf_norm(const CosineField& u) {
  const auto g = to_grid(u, linf_grid_size(u.order()));
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m;
}

inline double l1_coefficient_norm(const CosineField& u) {
  double acc = std::abs(u[0]);
  for (int n = 1; n <= u.order(); ++n) acc += std::abs(u[n]);
  return acc;
}

inline Norms norms(const CosineField& u, double s) {
  Norms r;
  r.l2 = l2_norm(u);
  r.hdot_s = hdot_norm(u, s);
  r.hdot_2s = hdot_norm(u, 2.0 * s);
  r.h_s = std::hypot(r.l2, r.hdot_s);
  r.h_2s = std::hypot(r.l2, r.hdot_2s);
  r.linf = linf_norm(u);
  r.l1_coeff = l1_coefficient_norm(u);
  return r;
}

/// |a_N| / max_n |a_n|: how much of the field sits in the last retained mode.
inline double tail_ratio(const CosineField& u) {
  double peak = 0.0;
  for (double v : u.coeffs()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::abs(u[static_cast<std::size_t>(u.order())]) / peak;
}

/// Number of sign changes of u on an oversampled periodic grid.
inline int count_sign_changes(const CosineField& u, std::size_t m = 0) {
  if (m == 0) m = linf_grid_size(u.order());
  const auto g = to_grid(u, m);
  int changes = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = g.values[j];
    const double b = g.values[(j + 1) % m];
    if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) ++changes;
  }
  return changes;
}

}  // namespace torusbif
