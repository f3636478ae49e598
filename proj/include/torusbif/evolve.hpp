#pragma once

// Time integration of u_t + 2 u u_x - d/dx(L u) = 0 on the torus by an
// integrating-factor RK4 in Fourier space. Solutions of the stationary
// problem at lambda travel with speed -lambda: u(x, t) = phi(x + lambda t).

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/transform.hpp"

namespace torusbif {

/// Coefficients u^(n), |n| <= N, of a real function; u^(-n) = conj(u^(n)).
class ComplexField {
 public:
  ComplexField() : c_(1) {}
  explicit ComplexField(int order) : n_(order), c_(2 * static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw error(errc::invalid_argument, "negative truncation order");
  }

  static ComplexField from_cosine(const CosineField& u) {
    ComplexField f(u.order());
    f.at(0) = u[0];
    for (int n = 1; n <= u.order(); ++n) f.set(n, 0.5 * u[n]);
    return f;
  }

  int order() const { return n_; }
  cplx& at(int n) { return c_[static_cast<std::size_t>(n + n_)]; }
  cplx at(int n) const { return c_[static_cast<std::size_t>(n + n_)]; }

  /// Sets u^(n) and its mirror u^(-n).
  void set(int n, cplx v) {
    at(n) = v;
    at(-n) = std::conj(v);
    if (n == 0) at(0) = v.real();
  }

  double operator()(double x) const {
    double v = at(0).real();
    for (int n = 1; n <= n_; ++n) v += 2.0 * (at(n) * std::polar(1.0, n * x)).real();
    return v;
  }

  double hermitian_defect() const {
    double d = std::abs(at(0).imag());
    for (int n = 1; n <= n_; ++n) d = std::max(d, std::abs(at(n) - std::conj(at(-n))));
    return d;
  }

  bool all_finite() const {
    for (const auto& v : c_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Values on the uniform grid of m points.
  std::vector<double> samples(std::size_t m) const {
    if (m < 2 * static_cast<std::size_t>(n_) + 1) throw error(errc::grid_too_coarse, "grid too coarse for field");
    std::vector<cplx> spec(m, cplx(0.0));
    for (int n = -n_; n <= n_; ++n) spec[static_cast<std::size_t>((n + static_cast<long>(m)) % static_cast<long>(m))] = at(n);
    const auto time = synthesize(spec);
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = time[j].real();
    return out;
  }

  friend ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    if (a.n_ != b.n_) throw error(errc::invalid_argument, "fields of different truncation order");
    ComplexField d(a.n_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) d.c_[i] = a.c_[i] - b.c_[i];
    return d;
  }

 private:
  int n_ = 0;
  std::vector<cplx> c_;
};

inline double linf_norm(const ComplexField& u) {
  double m = 0.0;
  for (double v : u.samples(linf_grid_size(u.order()))) m = std::max(m, std::abs(v));
  return m;
}

struct Conserved {
  double mass = 0.0;      // integral of u
  double momentum = 0.0;  // integral of u^2
};

inline Conserved conserved_quantities(const ComplexField& u) {
  Conserved c;
  c.mass = two_pi * u.at(0).real();
  double acc = std::norm(u.at(0));
  for (int n = 1; n <= u.order(); ++n) acc += 2.0 * std::norm(u.at(n));
  c.momentum = two_pi * acc;
  return c;
}

/// Exact translate: coefficients times e^{i n shift}, i.e. x -> x + shift.
inline ComplexField translate(const ComplexField& u, double shift) {
  ComplexField out(u.order());
  for (int n = 0; n <= u.order(); ++n) out.set(n, u.at(n) * std::polar(1.0, n * shift));
  return out;
}

struct EvolveOptions {
  double blowup_threshold = 1e12;
  // Called after every step with (t, state); snapshots for output.
  std::function<void(double, const ComplexField&)> on_step;
};

/// Step limit guidance 0.5 / (N^{2s+1} m_1); only informative, the integrating factor keeps the linear part exact.
inline double suggested_dt(const MultiplierSpec& spec, int order) {
  return 0.5 / (std::pow(static_cast<double>(order), 2.0 * spec.s + 1.0) * spec.m1);
}

namespace detail {

// -i n (u^2)^(n) for n >= 0, dealiased on 3N+1 or more points.
class AdvectionTerm {
 public:
  explicit AdvectionTerm(int order) : n_(order), m_(next_fast_size(3 * static_cast<std::size_t>(order) + 1)) {}

  ComplexField operator()(const ComplexField& u) const {
    const std::vector<double> g = u.samples(m_);
    std::vector<cplx> sq(m_);
    for (std::size_t j = 0; j < m_; ++j) sq[j] = g[j] * g[j];
    const auto spec = analyze(sq);
    ComplexField out(n_);
    for (int n = 0; n <= n_; ++n) out.set(n, cplx(0.0, -static_cast<double>(n)) * spec[static_cast<std::size_t>(n)]);
    return out;
  }

 private:
  int n_;
  std::size_t m_;
};

}  // namespace detail

/// Evolves u0 to t_end with the step dt rounded down so that t_end is hit exactly.
inline ComplexField evolve(const MultiplierSpec& spec, const ComplexField& u0, double dt, double t_end,
                           const EvolveOptions& opt = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw error(errc::invalid_argument, "time step must be positive");
  if (!(t_end >= 0.0)) throw error(errc::invalid_argument, "end time must be non-negative");
  const int order = u0.order();
  if (const long range = symbol_range(spec); range >= 0 && order > range)
    throw error(errc::table_out_of_range, "truncation order exceeds the tabulated symbol range");
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  if (steps == 0) return u0;
  const double h = t_end / static_cast<double>(steps);

  // Integrating factors for u^_t = i n sigma(n) u^ + nonlinear.
  std::vector<cplx> e_half(order + 1), e_full(order + 1);
  for (int n = 0; n <= order; ++n) {
    const double omega = n * operator_symbol(spec, n);
    e_half[n] = std::polar(1.0, 0.5 * h * omega);
    e_full[n] = std::polar(1.0, h * omega);
  }
  auto mul = [order](const std::vector<cplx>& e, const ComplexField& v) {
    ComplexField out(order);
    for (int n = 0; n <= order; ++n) out.set(n, e[n] * v.at(n));
    return out;
  };
  auto axpy = [order](const ComplexField& a, double c, const ComplexField& b) {
    ComplexField out(order);
    for (int n = 0; n <= order; ++n) out.set(n, a.at(n) + c * b.at(n));
    return out;
  };

  const detail::AdvectionTerm nl(order);
  ComplexField u = u0;
  for (long i = 0; i < steps; ++i) {
    const ComplexField k1 = nl(u);
    const ComplexField k2 = nl(mul(e_half, axpy(u, 0.5 * h, k1)));
    const ComplexField eu = mul(e_half, u);
    const ComplexField k3 = nl(axpy(eu, 0.5 * h, k2));
    const ComplexField k4 = nl(axpy(mul(e_full, u), h, mul(e_half, k3)));
    ComplexField next(order);
    for (int n = 0; n <= order; ++n)
      next.set(n, e_full[n] * u.at(n) +
                      h / 6.0 * (e_full[n] * k1.at(n) + 2.0 * e_half[n] * (k2.at(n) + k3.at(n)) + k4.at(n)));
    u = std::move(next);
    if (!u.all_finite() || u.max_abs() > opt.blowup_threshold)
      throw error(errc::blowup_detected, "coefficients exceeded " + std::to_string(opt.blowup_threshold) +
                                             " at t = " + std::to_string((i + 1) * h));
    if (opt.on_step) opt.on_step((i + 1) * h, u);
  }
  return u;
}

struct TravelingWaveReport {
  double max_deviation = 0.0;   // linf distance to phi(x + lambda t_end)
  double mass_drift = 0.0;      // |mass(t_end) - mass(0)|
  double momentum_drift = 0.0;  // relative
};

/// Evolves phi and compares with its exact translate at speed -lambda.
inline TravelingWaveReport traveling_wave_check(const MultiplierSpec& spec, const CosineField& phi, double lambda,
                                                double t_end, double dt) {
  const ComplexField u0 = ComplexField::from_cosine(phi);
  const ComplexField u1 = evolve(spec, u0, dt, t_end);
  TravelingWaveReport r;
  r.max_deviation = linf_norm(u1 - translate(u0, lambda * t_end));
  const auto c0 = conserved_quantities(u0), c1 = conserved_quantities(u1);
  r.mass_drift = std::abs(c1.mass - c0.mass);
  r.momentum_drift = c0.momentum > 0.0 ? std::abs(c1.momentum - c0.momentum) / c0.momentum : std::abs(c1.momentum);
  return r;
}

}  // namespace torusbif
