#pragma once

// Pseudo-arclength continuation, branch switching off the trivial branch,
// fold and branch-point detection, the constant branch, and the two exact
// solution maps: the affine symmetry T (p = 2) and the dilation T_k.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "torusbif/bounds.hpp"
#include "torusbif/branch.hpp"
#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/operator.hpp"
#include "torusbif/spectrum.hpp"

namespace torusbif {

struct ContinuationConfig {
  double ds0 = 0.05;
  double ds_min = 1e-6;
  double ds_max = 0.2;
  std::optional<double> target_lambda;
  int max_steps = 400;
  double newton_tol = 1e-10;
  int corrector_max_iter = 12;
  int easy_iterations = 3;  // a step converging within this many iterations counts as easy
  double singular_rcond = 1e-14;
  bool check_bounds = true;
  std::optional<BoundConstants> bound_constants;

  void validate() const {
    if (!(ds_min > 0.0 && ds_min <= ds0 && ds0 <= ds_max))
      throw error(errc::config_error, "continuation steps must satisfy 0 < ds_min <= ds0 <= ds_max");
    if (max_steps < 1) throw error(errc::config_error, "max_steps must be positive");
    if (!(newton_tol > 0.0)) throw error(errc::config_error, "newton_tol must be positive");
    if (corrector_max_iter < 1) throw error(errc::config_error, "corrector max_iter must be positive");
  }
};

/// The nonzero constant solution: -lambda^{1/(p-1)} for lambda > 0, (-lambda)^{1/(p-1)} for lambda < 0.
inline CosineField constant_solution(double p, double lambda, int order) {
  if (lambda == 0.0) throw error(errc::zero_lambda, "only u = 0 solves the equation at lambda = 0");
  const double mag = std::pow(std::abs(lambda), 1.0 / (p - 1.0));
  return CosineField::constant(order, lambda > 0.0 ? -mag : mag);
}

// ---------------------------------------------------------------------------
// State vectors x = (a_0, ..., a_N, lambda) with the H^{2s} inner product on
// the field part.

namespace detail {

inline Vector state_weights(const ProblemSpec& ps) {
  Vector w(ps.order + 2);
  w[0] = two_pi;
  for (int n = 1; n <= ps.order; ++n) w[n] = std::numbers::pi + 0.5 * std::pow(static_cast<double>(n), 4.0 * ps.multiplier.s);
  w[ps.order + 1] = 1.0;
  return w;
}

inline Vector pack(double lambda, const CosineField& u) {
  Vector x(u.size() + 1);
  x.head(u.size()) = to_vector(u);
  x[u.size()] = lambda;
  return x;
}

inline double state_lambda(const Vector& x) { return x[x.size() - 1]; }
inline CosineField state_field(const Vector& x) { return to_field(x.head(x.size() - 1)); }

inline double weighted_norm(const Vector& w, const Vector& x) { return std::sqrt(x.dot(w.cwiseProduct(x))); }

struct Correction {
  bool ok = false;
  Vector x;
  double residual = 0.0;
  int iterations = 0;
};

/// Newton on {F(lambda, u) = 0, c . x = rhs}.
inline Correction bordered_correct(const ProblemSpec& ps, Vector x, const Vector& c, double rhs, double tol,
                                   int max_iter, double rcond) {
  const int n = ps.order + 1;
  Correction out;
  CosineField u = state_field(x);
  double lambda = state_lambda(x);
  CosineField r = residual(ps, lambda, u);
  double norm = l2_norm(r);
  double g = c.dot(x) - rhs;
  const double gscale = tol * std::max(1.0, c.cwiseAbs().maxCoeff());
  while (!(norm <= tol && std::abs(g) <= gscale)) {
    if (out.iterations >= max_iter || !std::isfinite(norm)) {
      out.x = x;
      out.residual = norm;
      return out;
    }
    Matrix a(n + 1, n + 1);
    a.topLeftCorner(n, n) = jacobian_matrix(ps, lambda, u);
    a.col(n).head(n) = -to_vector(u);
    a.row(n) = c.transpose();
    Vector b(n + 1);
    b.head(n) = -to_vector(r);
    b[n] = -g;
    Vector dx;
    try {
      dx = solve_checked(a, b, rcond);
    } catch (const error&) {
      out.x = x;
      out.residual = norm;
      return out;
    }
    x += dx;
    u = state_field(x);
    lambda = state_lambda(x);
    r = residual(ps, lambda, u);
    const double prev = norm;
    norm = l2_norm(r);
    g = c.dot(x) - rhs;
    ++out.iterations;
    if (out.iterations > 2 && norm > prev) {  // diverging
      out.x = x;
      out.residual = norm;
      return out;
    }
  }
  out.ok = true;
  out.x = std::move(x);
  out.residual = norm;
  return out;
}

/// Unit (weighted) null vector of [J, -u], oriented by the sign of its lambda
/// component, or of its largest field component when lambda barely moves.
inline Vector null_tangent(const ProblemSpec& ps, double lambda, const CosineField& u, const Vector& w, int direction) {
  const int n = ps.order + 1;
  Matrix a(n, n + 1);
  a.leftCols(n) = jacobian_matrix(ps, lambda, u);
  a.col(n) = -to_vector(u);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  Vector t = svd.matrixV().col(n);
  t /= weighted_norm(w, t);
  double lead = t[n];
  if (std::abs(lead) < 1e-8) {
    Eigen::Index idx = 0;
    t.head(n).cwiseAbs().maxCoeff(&idx);
    lead = t[idx] * (u[static_cast<std::size_t>(idx)] >= 0.0 ? 1.0 : -1.0);
  }
  if (lead * direction < 0.0) t = -t;
  return t;
}

}  // namespace detail

/// Completes a branch point with diagnostics and, when requested, the hard a-priori bound checks.
inline BranchPoint accept_point(const ProblemSpec& ps, double lambda, CosineField u, double arclength,
                                const ContinuationConfig& cfg) {
  BranchPoint pt = make_point(ps, lambda, std::move(u), arclength);
  if (cfg.check_bounds && pt.residual_l2 < 1e-8) {
    const auto rep = check_point(ps, cfg.bound_constants, pt);
    if (!rep.hard_passes()) warn("a-priori bound violated at lambda = " + std::to_string(lambda));
  }
  return pt;
}

/// Pseudo-arclength continuation from a converged point. direction = +1 follows increasing lambda initially.
inline Branch continue_branch(const ProblemSpec& ps, const BranchPoint& start, int direction,
                              const ContinuationConfig& cfg, Origin origin = {}) {
  cfg.validate();
  if (direction != 1 && direction != -1) throw error(errc::invalid_argument, "direction must be +1 or -1");
  if (start.u.order() != ps.order) throw error(errc::invalid_argument, "start point has the wrong truncation order");
  const double start_res = residual_norm(ps, start.lambda, start.u);
  if (!(start_res <= cfg.newton_tol))
    throw error(errc::no_convergence, "start point residual " + std::to_string(start_res) + " exceeds newton_tol");

  const Vector w = detail::state_weights(ps);
  Branch br;
  br.problem = ps;
  br.origin = origin;
  br.points.push_back(accept_point(ps, start.lambda, start.u, 0.0, cfg));

  Vector x = detail::pack(start.lambda, start.u);
  Vector tangent = detail::null_tangent(ps, start.lambda, start.u, w, direction);
  double ds = cfg.ds0;
  int easy = 0;
  int steps = 0;

  auto crossed = [&](double a, double b) {
    return cfg.target_lambda && a != *cfg.target_lambda && (a - *cfg.target_lambda) * (b - *cfg.target_lambda) <= 0.0;
  };

  while (true) {
    if (steps >= cfg.max_steps) {
      br.stop_reason = "max_steps";
      break;
    }
    const Vector pred = x + ds * tangent;
    const Vector c = w.cwiseProduct(tangent);
    detail::Correction corr;
    const double pred_res = residual_norm(ps, detail::state_lambda(pred), detail::state_field(pred));
    if (pred_res <= cfg.newton_tol) {
      corr.ok = true;
      corr.x = pred;
      corr.residual = pred_res;
    } else {
      corr = detail::bordered_correct(ps, pred, c, c.dot(x) + ds, cfg.newton_tol, cfg.corrector_max_iter,
                                      cfg.singular_rcond);
    }
    const double step_len = corr.ok ? detail::weighted_norm(w, corr.x - x) : 0.0;
    if (!corr.ok || step_len > 2.0 * cfg.ds_max || step_len == 0.0) {
      ds *= 0.5;
      easy = 0;
      if (ds < cfg.ds_min) {
        if (br.points.size() == 1)
          throw error(errc::stall_at_min_step, "no continuation step accepted above ds_min");
        br.stop_reason = "ds_min";
        break;
      }
      continue;
    }

    ++steps;
    const double lam_prev = detail::state_lambda(x);
    const double lam_new = detail::state_lambda(corr.x);
    if (crossed(lam_prev, lam_new)) {
      // Land exactly on the target with lambda held fixed.
      const double t = (*cfg.target_lambda - lam_prev) / (lam_new - lam_prev);
      Vector guess = x + t * (corr.x - x);
      Vector e = Vector::Zero(w.size());
      e[e.size() - 1] = 1.0;
      auto fin = detail::bordered_correct(ps, guess, e, *cfg.target_lambda, cfg.newton_tol, cfg.corrector_max_iter,
                                          cfg.singular_rcond);
      if (residual_norm(ps, *cfg.target_lambda, detail::state_field(guess)) <= cfg.newton_tol) {
        fin.ok = true;
        fin.x = guess;
      }
      const Vector& last = fin.ok ? fin.x : corr.x;
      const double arc = br.points.back().arclength + detail::weighted_norm(w, last - x);
      br.points.push_back(accept_point(ps, detail::state_lambda(last), detail::state_field(last), arc, cfg));
      br.stop_reason = fin.ok ? "target" : "target_unresolved";
      break;
    }

    br.points.push_back(accept_point(ps, lam_new, detail::state_field(corr.x),
                                     br.points.back().arclength + step_len, cfg));
    tangent = (corr.x - x) / step_len;
    x = corr.x;
    easy = corr.iterations <= cfg.easy_iterations ? easy + 1 : 0;
    if (easy >= 4) {
      ds = std::min(2.0 * ds, cfg.ds_max);
      easy = 0;
    }
  }
  return br;
}

/// Straight branches through exact solutions: u = 0 and the constant branch.
inline Branch trivial_branch(const ProblemSpec& ps, double lambda0, double lambda1, ContinuationConfig cfg) {
  cfg.target_lambda = lambda1;
  return continue_branch(ps, make_point(ps, lambda0, CosineField(ps.order)), lambda1 >= lambda0 ? 1 : -1, cfg,
                         {OriginKind::manual, 0});
}

inline Branch constant_branch(const ProblemSpec& ps, double lambda0, double lambda1, ContinuationConfig cfg) {
  if (lambda0 * lambda1 <= 0.0)
    throw error(errc::zero_lambda, "the constant branch is split at lambda = 0; keep both ends on one side");
  cfg.target_lambda = lambda1;
  return continue_branch(ps, make_point(ps, lambda0, constant_solution(ps.p, lambda0, ps.order)),
                         lambda1 >= lambda0 ? 1 : -1, cfg, {OriginKind::constant, 0});
}

/// Solves F = 0 together with a_k = amplitude, starting from the local predictor.
inline BranchPoint amplitude_solve(const ProblemSpec& ps, int k, double amplitude, double lambda_guess,
                                   const CosineField& u_guess, const ContinuationConfig& cfg) {
  if (k < 1 || k > ps.order) throw error(errc::invalid_argument, "mode index outside the truncation");
  Vector c = Vector::Zero(ps.order + 2);
  c[k] = 1.0;
  auto corr = detail::bordered_correct(ps, detail::pack(lambda_guess, u_guess), c, amplitude, cfg.newton_tol,
                                       std::max(cfg.corrector_max_iter, 30), cfg.singular_rcond);
  if (!corr.ok)
    throw error(errc::no_convergence, "amplitude-constrained Newton failed at amplitude " + std::to_string(amplitude) +
                                          " (residual " + std::to_string(corr.residual) + ")");
  return make_point(ps, detail::state_lambda(corr.x), detail::state_field(corr.x));
}

/// A converged point on the branch leaving (sigma_k, 0) with cos(kx) coefficient equal to amplitude.
inline BranchPoint branch_switch(const ProblemSpec& ps, int k, double amplitude, const ContinuationConfig& cfg = {}) {
  if (amplitude == 0.0) throw error(errc::invalid_argument, "branch switching needs a nonzero amplitude");
  LocalPoint guess;
  if (ps.p == 2.0) {
    guess = local_predictor(ps.multiplier, k, amplitude, ps.order, ps.p);
  } else {
    guess.lambda = operator_symbol(ps.multiplier, k);
    guess.u = CosineField::mode(ps.order, k, amplitude);
  }
  BranchPoint pt = amplitude_solve(ps, k, amplitude, guess.lambda, guess.u, cfg);
  for (int n = 1; n <= ps.order; ++n)
    if (n != k && std::abs(pt.u[n]) >= std::abs(pt.u[k]))
      warn("branch switch at mode " + std::to_string(k) + " landed on a profile dominated by mode " + std::to_string(n));
  return pt;
}

/// Branch from (sigma_k, 0): branch switch and continuation with lambda moving away from sigma_k.
inline Branch bifurcating_branch(const ProblemSpec& ps, int k, double amplitude, const ContinuationConfig& cfg) {
  const BranchPoint start = branch_switch(ps, k, amplitude, cfg);
  const double sigma = operator_symbol(ps.multiplier, k);
  int direction = start.lambda >= sigma ? 1 : -1;
  if (cfg.target_lambda) direction = *cfg.target_lambda >= start.lambda ? 1 : -1;
  return continue_branch(ps, start, direction, cfg, {OriginKind::trivial_mode, k});
}

// ---------------------------------------------------------------------------
// Curvature of a bifurcating branch from a parabola fit.

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double lambda_ddot() const { return 2.0 * c2; }
};

inline QuadraticFit fit_quadratic(const std::vector<double>& s, const std::vector<double>& y) {
  if (s.size() != y.size() || s.size() < 3) throw error(errc::invalid_argument, "a parabola fit needs 3+ samples");
  Matrix a(s.size(), 3);
  Vector b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = s[i];
    a(i, 2) = s[i] * s[i];
    b[i] = y[i];
  }
  const Vector c = a.colPivHouseholderQr().solve(b);
  return {c[0], c[1], c[2]};
}

struct AmplitudeSample {
  double amplitude;
  double lambda;
};

/// Natural continuation in the amplitude a_k over [-s_max, s_max] (excluding 0), each solve warm-started.
inline std::vector<AmplitudeSample> amplitude_continuation(const ProblemSpec& ps, int k, double s_max, int per_side,
                                                           const ContinuationConfig& cfg = {}) {
  if (per_side < 2) throw error(errc::invalid_argument, "need at least two samples per side");
  std::vector<AmplitudeSample> out;
  for (int sign : {-1, 1}) {
    std::optional<BranchPoint> prev;
    for (int i = 1; i <= per_side; ++i) {
      const double amp = sign * s_max * i / per_side;
      BranchPoint pt;
      if (!prev) {
        pt = branch_switch(ps, k, amp, cfg);
      } else {
        CosineField guess = prev->u * (amp / prev->u[k]);
        pt = amplitude_solve(ps, k, amp, prev->lambda, guess, cfg);
      }
      out.push_back({amp, pt.lambda});
      prev = std::move(pt);
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.amplitude < b.amplitude; });
  return out;
}

inline QuadraticFit fitted_curvature(const ProblemSpec& ps, int k, double s_max = 0.15, int per_side = 8,
                                     const ContinuationConfig& cfg = {}) {
  const auto samples = amplitude_continuation(ps, k, s_max, per_side, cfg);
  std::vector<double> s, y;
  for (const auto& smp : samples) {
    s.push_back(smp.amplitude);
    y.push_back(smp.lambda);
  }
  return fit_quadratic(s, y);
}

// ---------------------------------------------------------------------------
// Events along a computed branch.

enum class EventType { fold, branch_point };

inline std::string to_string(EventType t) { return t == EventType::fold ? "Fold" : "BranchPoint"; }

struct Event {
  EventType type = EventType::branch_point;
  double lambda = 0.0;
  double min_sv = 0.0;
  std::size_t segment = 0;  // between points[segment] and points[segment + 1]
  bool refined = false;
};

struct EventOptions {
  bool refine = true;
  double lambda_tol = 1e-7;
  int max_bisections = 80;
  double newton_tol = 1e-10;
};

namespace detail {

// A point on the branch between a and b, pinned by its projection onto the chord.
struct ChordPoint {
  Vector x;
  bool solved = false;
};

inline ChordPoint chord_point(const ProblemSpec& ps, const Vector& a, const Vector& b, double theta,
                              const EventOptions& opt) {
  ChordPoint cp;
  cp.x = a + theta * (b - a);
  if (residual_norm(ps, state_lambda(cp.x), state_field(cp.x)) <= opt.newton_tol) {
    cp.solved = true;
    return cp;
  }
  const Vector c = b - a;
  auto corr = bordered_correct(ps, cp.x, c, c.dot(cp.x), opt.newton_tol, 20, 1e-14);
  if (corr.ok) {
    cp.x = corr.x;
    cp.solved = true;
  }
  return cp;
}

inline int chord_inertia(const ProblemSpec& ps, const Vector& x) {
  return spectral_summary(jacobian_matrix(ps, state_lambda(x), state_field(x))).negative_count;
}

// Sign of dlambda/dtheta at a chord-pinned point.
inline double chord_lambda_slope(const ProblemSpec& ps, const Vector& x, const Vector& chord) {
  const int n = ps.order + 1;
  Matrix a(n + 1, n + 1);
  const CosineField u = state_field(x);
  a.topLeftCorner(n, n) = jacobian_matrix(ps, state_lambda(x), u);
  a.col(n).head(n) = -to_vector(u);
  a.row(n) = chord.transpose();
  Vector rhs = Vector::Zero(n + 1);
  rhs[n] = 1.0;
  return Eigen::PartialPivLU<Matrix>(a).solve(rhs)[n];
}

inline void refine_crossings(const ProblemSpec& ps, const Vector& a, const Vector& b, double lo, double hi, int neg_lo,
                             int neg_hi, Vector x_lo, Vector x_hi, int depth, const EventOptions& opt,
                             std::vector<Vector>& found) {
  if (neg_lo == neg_hi) return;
  if (std::abs(state_lambda(x_hi) - state_lambda(x_lo)) <= opt.lambda_tol || depth >= opt.max_bisections) {
    const Vector mid = 0.5 * (x_lo + x_hi);
    for (int i = 0; i < std::abs(neg_hi - neg_lo); ++i) found.push_back(mid);
    return;
  }
  const double m = 0.5 * (lo + hi);
  const ChordPoint cp = chord_point(ps, a, b, m, opt);
  const int neg_m = chord_inertia(ps, cp.x);
  refine_crossings(ps, a, b, lo, m, neg_lo, neg_m, x_lo, cp.x, depth + 1, opt, found);
  refine_crossings(ps, a, b, m, hi, neg_m, neg_hi, cp.x, x_hi, depth + 1, opt, found);
}

}  // namespace detail

/// Folds (dlambda/ds changes sign) and branch points (Jacobian inertia changes away from a fold).
inline std::vector<Event> detect_events(const Branch& br, const EventOptions& opt = {}) {
  std::vector<Event> events;
  const auto& pts = br.points;
  if (pts.size() < 3) return events;
  const ProblemSpec& ps = br.problem;

  std::vector<bool> fold_at(pts.size(), false);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double d0 = pts[i].lambda - pts[i - 1].lambda;
    const double d1 = pts[i + 1].lambda - pts[i].lambda;
    if (d0 * d1 < 0.0) fold_at[i] = true;
  }

  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (!fold_at[i]) continue;
    Event ev{EventType::fold, pts[i].lambda, pts[i].min_sv, i, false};
    if (opt.refine) {
      // Bisect on the sign of dlambda/dtheta along the chord from i-1 to i+1.
      const Vector a = detail::pack(pts[i - 1].lambda, pts[i - 1].u);
      const Vector b = detail::pack(pts[i + 1].lambda, pts[i + 1].u);
      const Vector chord = b - a;
      const double s_lo = detail::chord_lambda_slope(ps, a, chord);
      double lo = 0.0, hi = 1.0;
      Vector x_lo = a, x_hi = b;
      bool ok = true;
      for (int it = 0; it < opt.max_bisections; ++it) {
        if (std::abs(detail::state_lambda(x_hi) - detail::state_lambda(x_lo)) <= opt.lambda_tol && it > 0) break;
        const double m = 0.5 * (lo + hi);
        const auto cp = detail::chord_point(ps, a, b, m, opt);
        if (!cp.solved) {
          ok = false;
          break;
        }
        if (detail::chord_lambda_slope(ps, cp.x, chord) * s_lo > 0.0) {
          lo = m;
          x_lo = cp.x;
        } else {
          hi = m;
          x_hi = cp.x;
        }
      }
      if (ok) {
        const Vector mid = 0.5 * (x_lo + x_hi);
        ev.lambda = detail::state_lambda(mid);
        ev.min_sv = spectral_summary(jacobian_matrix(ps, ev.lambda, detail::state_field(mid))).min_sv;
        ev.refined = true;
      }
    }
    events.push_back(ev);
  }

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const int dn = pts[i + 1].negative_count - pts[i].negative_count;
    if (dn == 0 || fold_at[i] || fold_at[i + 1]) continue;
    // Unrefined estimate: the smallest eigenvalue changes sign, interpolate |.| linearly.
    const double m0 = pts[i].min_sv, m1 = pts[i + 1].min_sv;
    const double w = (m0 + m1) > 0.0 ? m0 / (m0 + m1) : 0.5;
    const double lam_est = pts[i].lambda + w * (pts[i + 1].lambda - pts[i].lambda);
    if (!opt.refine) {
      for (int j = 0; j < std::abs(dn); ++j) events.push_back({EventType::branch_point, lam_est, 0.0, i, false});
      continue;
    }
    const Vector a = detail::pack(pts[i].lambda, pts[i].u);
    const Vector b = detail::pack(pts[i + 1].lambda, pts[i + 1].u);
    std::vector<Vector> found;
    detail::refine_crossings(ps, a, b, 0.0, 1.0, pts[i].negative_count, pts[i + 1].negative_count, a, b, 0, opt, found);
    for (const auto& x : found) {
      const double lam = detail::state_lambda(x);
      const double sv = spectral_summary(jacobian_matrix(ps, lam, detail::state_field(x))).min_sv;
      events.push_back({EventType::branch_point, lam, sv, i, true});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.segment < b.segment; });
  return events;
}

// ---------------------------------------------------------------------------
// Exact maps between solutions.

/// T(lambda, u) = (-lambda, u + lambda); an involution on solutions when p = 2.
inline BranchPoint symmetry_T(const ProblemSpec& ps, const BranchPoint& pt) {
  if (ps.p != 2.0) throw error(errc::unsupported_p, "the affine symmetry needs p = 2");
  CosineField v = pt.u;
  v[0] += pt.lambda;
  BranchPoint out = make_point(ps, -pt.lambda, std::move(v), pt.arclength);
  return out;
}

inline Branch symmetry_T(const Branch& br) {
  Branch out;
  out.problem = br.problem;
  out.origin = {OriginKind::manual, 0};
  for (const auto& pt : br.points) out.points.push_back(symmetry_T(br.problem, pt));
  out.stop_reason = br.stop_reason;
  return out;
}

/// Problem at truncation k N for images under the dilation.
inline ProblemSpec scaled_problem(const ProblemSpec& ps, int k, int n_max) {
  if (!ps.multiplier.is_fractional())
    throw error(errc::unsupported_multiplier, "the dilation T_k needs the pure fractional Laplacian");
  if (k < 1) throw error(errc::invalid_argument, "dilation factor must be a positive integer");
  const long order = static_cast<long>(k) * ps.order;
  if (order > n_max)
    throw error(errc::truncation_overflow, "dilated field needs order " + std::to_string(order) + " > " +
                                               std::to_string(n_max));
  // k M grid points sample u(kx) exactly where M points sampled u, so the discrete residual dilates too.
  return make_problem(ps.multiplier, ps.p, static_cast<int>(order), static_cast<std::size_t>(k) * ps.grid);
}

/// T_k(lambda, u) = (k^{2s} lambda, k^{2s/(p-1)} u(kx)), evaluated at truncation k N.
inline BranchPoint scale_T_k(const ProblemSpec& ps, const BranchPoint& pt, int k, int n_max) {
  const ProblemSpec out_ps = scaled_problem(ps, k, n_max);
  const double s = ps.multiplier.s;
  const double c = std::pow(static_cast<double>(k), 2.0 * s / (ps.p - 1.0));
  CosineField v(out_ps.order);
  for (int n = 0; n <= pt.u.order(); ++n) v[static_cast<std::size_t>(k * n)] = c * pt.u[n];
  return make_point(out_ps, std::pow(static_cast<double>(k), 2.0 * s) * pt.lambda, std::move(v), pt.arclength);
}

inline Branch scale_T_k(const Branch& br, int k, int n_max) {
  Branch out;
  out.problem = scaled_problem(br.problem, k, n_max);
  out.origin = br.origin.kind == OriginKind::trivial_mode ? Origin{OriginKind::trivial_mode, br.origin.k * k}
                                                          : Origin{OriginKind::manual, 0};
  for (const auto& pt : br.points) out.points.push_back(scale_T_k(br.problem, pt, k, n_max));
  out.stop_reason = br.stop_reason;
  return out;
}

}  // namespace torusbif
