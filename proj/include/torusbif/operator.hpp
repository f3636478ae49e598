#pragma once

// The map F(lambda, u) = L u - lambda u - |u|^p on even fields, its
// u-derivatives, the Galerkin Jacobian and a damped Newton solver.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/multiplier.hpp"

namespace torusbif {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ProblemSpec {
  MultiplierSpec multiplier;
  double p = 2.0;
  int order = 128;       // truncation N
  std::size_t grid = 0;  // dealiased grid size M
};

inline ProblemSpec make_problem(const MultiplierSpec& multiplier, double p, int order, std::size_t grid = 0) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw error(errc::invalid_argument, "nonlinearity exponent must satisfy p >= 2");
  if (!(multiplier.s >= 0.5)) throw error(errc::invalid_argument, "exponent s must satisfy s >= 1/2");
  if (order < 1) throw error(errc::invalid_argument, "truncation order must be at least 1");
  const long range = symbol_range(multiplier);
  if (range >= 0 && order > range)
    throw error(errc::table_out_of_range, "truncation order exceeds the tabulated symbol range");
  ProblemSpec ps{multiplier, p, order, grid};
  if (ps.grid == 0) ps.grid = dealias_size(order, p);
  if (ps.grid < min_dealias_points(order, p))
    throw error(errc::grid_too_coarse, "grid of " + std::to_string(ps.grid) + " points is below the dealiasing minimum " +
                                           std::to_string(min_dealias_points(order, p)));
  return ps;
}

/// Is the u-derivative of the given order available at this exponent?
/// Follows F in C^{omega(p)-1} for non-integer p; integer p admit D^2 everywhere
/// and D^3 for p = 2 (where it vanishes) and p >= 4.
inline bool derivative_available(double p, int derivative_order) {
  if (derivative_order <= 1) return true;
  if (derivative_order > 3) return false;
  const bool integer = p == std::floor(p);
  if (!integer) return std::floor(p) - 1.0 >= derivative_order;
  if (derivative_order == 2) return true;
  return p == 2.0 || p >= 4.0;
}

namespace detail {

inline void check_order(const ProblemSpec& ps, const CosineField& f, const char* what) {
  if (f.order() != ps.order)
    throw error(errc::invalid_argument, std::string(what) + " has order " + std::to_string(f.order()) +
                                            ", problem expects " + std::to_string(ps.order));
}

// Projection of x -> weight(u(x)) * prod_i v_i(x) on the problem grid.
template <class Weight>
CosineField weighted_product(const ProblemSpec& ps, const CosineField& u, std::initializer_list<const CosineField*> vs,
                             Weight&& weight) {
  const auto gu = to_grid(u, ps.grid);
  std::vector<double> vals(ps.grid);
  for (std::size_t j = 0; j < ps.grid; ++j) vals[j] = weight(gu.values[j]);
  for (const CosineField* v : vs) {
    const auto gv = to_grid(*v, ps.grid);
    for (std::size_t j = 0; j < ps.grid; ++j) vals[j] *= gv.values[j];
  }
  return cosine_projection(symmetrize(vals), ps.order);
}

inline void require_derivative(const ProblemSpec& ps, int derivative_order) {
  if (!derivative_available(ps.p, derivative_order))
    throw error(errc::regularity_unavailable, "derivative of order " + std::to_string(derivative_order) +
                                                  " is unavailable for p = " + std::to_string(ps.p));
}

}  // namespace detail

/// Projection of L u - lambda u - |u|^p.
inline CosineField residual(const ProblemSpec& ps, double lambda, const CosineField& u) {
  detail::check_order(ps, u, "u");
  CosineField r = apply_L(ps.multiplier, u);
  r -= lambda * u;
  r -= nonlinearity(u, ps.p, false, ps.grid);
  return r;
}

/// Projection of L v - lambda v - p u|u|^{p-2} v.
inline CosineField jacobian_apply(const ProblemSpec& ps, double lambda, const CosineField& u, const CosineField& v) {
  detail::check_order(ps, u, "u");
  detail::check_order(ps, v, "v");
  const double p = ps.p;
  CosineField out = apply_L(ps.multiplier, v);
  out -= lambda * v;
  out -= detail::weighted_product(ps, u, {&v}, [p](double x) { return p * signed_power(x, p - 1.0); });
  return out;
}

/// -p(p-1)|u|^{p-2} v1 v2.
inline CosineField second_derivative(const ProblemSpec& ps, const CosineField& u, const CosineField& v1,
                                     const CosineField& v2) {
  detail::require_derivative(ps, 2);
  detail::check_order(ps, u, "u");
  const double p = ps.p;
  return detail::weighted_product(ps, u, {&v1, &v2},
                                  [p](double x) { return -p * (p - 1.0) * std::pow(std::abs(x), p - 2.0); });
}

/// -p(p-1)(p-2) u|u|^{p-4} v1 v2 v3 (identically zero for p = 2).
inline CosineField third_derivative(const ProblemSpec& ps, const CosineField& u, const CosineField& v1,
                                    const CosineField& v2, const CosineField& v3) {
  detail::require_derivative(ps, 3);
  detail::check_order(ps, u, "u");
  const double p = ps.p;
  if (p == 2.0) return CosineField(ps.order);
  return detail::weighted_product(ps, u, {&v1, &v2, &v3}, [p](double x) {
    return -p * (p - 1.0) * (p - 2.0) * signed_power(x, p - 3.0);
  });
}

/// Dense Galerkin matrix of the linearization in the basis e_0 = 1, e_n = cos(n x).
///
/// Multiplication by w = p u|u|^{p-2} couples modes through the grid DFT w^_m:
/// column j, row n receives (w^_{n-j} + w^_{n+j})/2, doubled for n >= 1.
inline Matrix jacobian_matrix(const ProblemSpec& ps, double lambda, const CosineField& u) {
  detail::check_order(ps, u, "u");
  const int order = ps.order;
  const std::size_t m = ps.grid;
  const double p = ps.p;
  Matrix jac = Matrix::Zero(order + 1, order + 1);
  for (int n = 0; n <= order; ++n) jac(n, n) = operator_symbol(ps.multiplier, n) - lambda;

  bool trivial = true;
  for (double a : u.coeffs()) trivial = trivial && a == 0.0;
  if (trivial) return jac;

  const auto gu = to_grid(u, m);
  std::vector<cplx> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = p * signed_power(gu.values[j], p - 1.0);
  const auto what = analyze(w);
  auto coef = [&](long idx) {
    const long mm = static_cast<long>(m);
    idx %= mm;
    if (idx < 0) idx += mm;
    return what[static_cast<std::size_t>(idx)].real();
  };
  for (int j = 0; j <= order; ++j) {
    for (int n = 0; n <= order; ++n) {
      double entry = 0.5 * (coef(n - j) + coef(n + j));
      if (n >= 1) entry *= 2.0;
      jac(n, j) -= entry;
    }
  }
  return jac;
}

/// Similarity transform of the Galerkin matrix into the L^2-orthonormal cosine basis,
/// where it is symmetric. Eigenvalues are shared with jacobian_matrix.
inline Matrix orthonormal_jacobian(const Matrix& jac) {
  Matrix sym = jac;
  const double r2 = std::sqrt(2.0);
  sym.row(0) *= r2;
  sym.col(0) /= r2;
  return 0.5 * (sym + sym.transpose());
}

struct SpectralSummary {
  double min_sv = 0.0;       // smallest |eigenvalue| of the symmetric form
  double second_sv = 0.0;    // second smallest
  int negative_count = 0;    // Morse index; its parity is the sign of det
  double diagonal_scale = 1.0;
};

inline SpectralSummary spectral_summary(const Matrix& jac) {
  const Matrix sym = orthonormal_jacobian(jac);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  const Vector ev = solver.eigenvalues();
  std::vector<double> mags(static_cast<std::size_t>(ev.size()));
  SpectralSummary out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    mags[static_cast<std::size_t>(i)] = std::abs(ev[i]);
    if (ev[i] < 0.0) ++out.negative_count;
  }
  std::sort(mags.begin(), mags.end());
  out.min_sv = mags.empty() ? 0.0 : mags[0];
  out.second_sv = mags.size() > 1 ? mags[1] : 0.0;
  out.diagonal_scale = std::max(1.0, sym.diagonal().cwiseAbs().maxCoeff());
  return out;
}

inline Vector to_vector(const CosineField& u) { return Eigen::Map<const Vector>(u.coeffs().data(), u.size()); }

inline CosineField to_field(const Vector& v) { return CosineField(std::vector<double>(v.data(), v.data() + v.size())); }

/// One Newton iteration as reported to NewtonOptions::on_iteration.
struct NewtonRecord {
  int iteration = 0;
  double residual = 0.0;
  int halvings = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 30;
  double singular_rcond = 1e-14;
  std::function<void(const NewtonRecord&)> on_iteration;
};

struct NewtonResult {
  CosineField u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;  // residual L^2 norm before each iteration and at exit
};

inline double residual_norm(const ProblemSpec& ps, double lambda, const CosineField& u) {
  return l2_norm(residual(ps, lambda, u));
}

/// Solves a dense system, refusing numerically singular matrices.
inline Vector solve_checked(const Matrix& a, const Vector& b, double singular_rcond) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rc = lu.rcond();
  if (!(rc > singular_rcond))
    throw error(errc::singular_jacobian, "condition estimate " + std::to_string(1.0 / rc) + " exceeds tolerance");
  Vector x = lu.solve(b);
  if (!x.allFinite()) throw error(errc::singular_jacobian, "linear solve produced non-finite values");
  return x;
}

/// Damped Newton on F(lambda, .) = 0 with step halving whenever the residual does not drop.
inline NewtonResult newton_solve(const ProblemSpec& ps, double lambda, const CosineField& u0,
                                 const NewtonOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw error(errc::invalid_argument, "tolerance must be positive");
  NewtonResult out;
  out.u = u0;
  CosineField r = residual(ps, lambda, out.u);
  double norm = l2_norm(r);
  out.history.push_back(norm);
  while (norm > opt.tol) {
    if (out.iterations >= opt.max_iter)
      throw error(errc::no_convergence, "Newton stopped after " + std::to_string(out.iterations) +
                                            " iterations with residual " + std::to_string(norm));
    const Vector step = solve_checked(jacobian_matrix(ps, lambda, out.u), -to_vector(r), opt.singular_rcond);
    const CosineField du = to_field(step);
    double t = 1.0;
    int halvings = 0;
    for (;;) {
      CosineField trial = out.u + t * du;
      CosineField rt = residual(ps, lambda, trial);
      const double nt = l2_norm(rt);
      if (std::isfinite(nt) && nt < norm) {
        out.u = std::move(trial);
        r = std::move(rt);
        norm = nt;
        break;
      }
      if (++halvings > opt.max_halvings)
        throw error(errc::no_convergence, "line search failed at residual " + std::to_string(norm));
      t *= 0.5;
    }
    ++out.iterations;
    out.history.push_back(norm);
    if (opt.on_iteration) opt.on_iteration({out.iterations, norm, halvings});
  }
  out.residual = norm;
  return out;
}

}  // namespace torusbif
