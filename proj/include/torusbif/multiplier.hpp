#pragma once

// Fourier multiplier symbols m(n) and the composite symbol |n|^{2s} m(n)
// of the operator L on the torus.

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "torusbif/error.hpp"

namespace torusbif {

struct Fractional {};

struct ILW {
  double depth = 1.0;
};

/// Explicit symbol values m(1), ..., m(n_max); m(-n) = m(n).
struct Table {
  std::vector<double> values;
};

using MultiplierKind = std::variant<Fractional, ILW, Table>;

struct MultiplierSpec {
  double s = 0.5;
  MultiplierKind kind = Fractional{};
  double m0 = 0.5;
  double m1 = 1.5;

  bool is_fractional() const { return std::holds_alternative<Fractional>(kind); }
  std::string kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Fractional>) return "fractional";
          else if constexpr (std::is_same_v<K, ILW>) return "ilw";
          else return "table";
        },
        kind);
  }
};

namespace detail {

inline void check_exponent(double s) {
  if (!(s >= 0.5) || !std::isfinite(s))
    throw error(errc::invalid_argument, "exponent s must satisfy s >= 1/2, got " + std::to_string(s));
}

// coth(x) - 1/x for x > 0.
inline double coth_minus_inverse(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 - x2 / 45.0 + 2.0 * x2 * x2 / 945.0);
  }
  return 1.0 + 2.0 / std::expm1(2.0 * x) - 1.0 / x;
}

}  // namespace detail

inline MultiplierSpec make_fractional(double s, double m0 = 0.5, double m1 = 1.5) {
  detail::check_exponent(s);
  return MultiplierSpec{s, Fractional{}, m0, m1};
}

/// ILW symbol |coth(delta n) - 1/(delta n)|. Default bounds bracket the symbol on n >= 1:
/// it increases from its value at n = 1 towards 1.
inline MultiplierSpec make_ilw(double s, double depth) {
  detail::check_exponent(s);
  if (!(depth > 0.0)) throw error(errc::invalid_argument, "ILW depth must be positive");
  const double first = std::abs(detail::coth_minus_inverse(depth));
  return MultiplierSpec{s, ILW{depth}, 0.9 * first, 1.0};
}

inline MultiplierSpec make_ilw(double s, double depth, double m0, double m1) {
  auto spec = make_ilw(s, depth);
  spec.m0 = m0;
  spec.m1 = m1;
  return spec;
}

/// Table symbols carry no inferred bounds: m0 and m1 are part of the hypothesis.
inline MultiplierSpec make_table(double s, std::vector<double> values, double m0, double m1) {
  detail::check_exponent(s);
  if (values.empty()) throw error(errc::invalid_argument, "table multiplier needs at least one value");
  return MultiplierSpec{s, Table{std::move(values)}, m0, m1};
}

/// m(n).
inline double symbol(const MultiplierSpec& spec, long n) {
  const long a = std::labs(n);
  return std::visit(
      [a](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Fractional>) {
          return 1.0;
        } else if constexpr (std::is_same_v<K, ILW>) {
          if (a == 0) return 0.0;
          return std::abs(detail::coth_minus_inverse(k.depth * static_cast<double>(a)));
        } else {
          if (a == 0) return 0.0;
          if (a > static_cast<long>(k.values.size()))
            throw error(errc::table_out_of_range,
                        "|n| = " + std::to_string(a) + " exceeds table size " +
                            std::to_string(k.values.size()));
          return k.values[static_cast<std::size_t>(a - 1)];
        }
      },
      spec.kind);
}

/// |n|^{2s} m(n), zero at n = 0.
inline double operator_symbol(const MultiplierSpec& spec, long n) {
  if (n == 0) return 0.0;
  const double a = static_cast<double>(std::labs(n));
  return std::pow(a, 2.0 * spec.s) * symbol(spec, n);
}

/// Largest |n| for which the symbol is defined (unbounded kinds report -1).
inline long symbol_range(const MultiplierSpec& spec) {
  if (const auto* t = std::get_if<Table>(&spec.kind)) return static_cast<long>(t->values.size());
  return -1;
}

struct Violation {
  std::string hypothesis;  // "M1", "M2", "M3" or "range"
  long n = 0;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Numerical check of symmetry, monotonicity and two-sided bounds on 1 <= |n| <= n_max.
inline ValidationReport validate(const MultiplierSpec& spec, long n_max) {
  ValidationReport report;
  if (n_max < 1) {
    report.push_back({"range", n_max, "n_max must be at least 1"});
    return report;
  }
  if (!(spec.m0 > 0.0) || !(spec.m1 > spec.m0))
    report.push_back({"M3", 0, "bounds must satisfy 0 < m0 < m1"});
  const long range = symbol_range(spec);
  long limit = n_max;
  if (range >= 0 && n_max > range) {
    report.push_back({"range", range + 1, "table defines m(n) only for |n| <= " + std::to_string(range)});
    limit = range;
  }
  double previous = 0.0;
  for (long n = 1; n <= limit; ++n) {
    const double m = symbol(spec, n);
    if (symbol(spec, -n) != m) report.push_back({"M1", n, "m(-n) != m(n)"});
    if (n > 1 && m < previous)
      report.push_back({"M2", n, "m(" + std::to_string(n) + ") < m(" + std::to_string(n - 1) + ")"});
    if (!(m > spec.m0) || !(m < spec.m1))
      report.push_back({"M3", n, "m(" + std::to_string(n) + ") = " + std::to_string(m) + " outside (m0, m1)"});
    previous = m;
  }
  return report;
}

inline void validate_or_throw(const MultiplierSpec& spec, long n_max) {
  const auto report = validate(spec, n_max);
  if (report.empty()) return;
  std::string msg = "multiplier violates hypotheses:";
  for (const auto& v : report) msg += " [" + v.hypothesis + " n=" + std::to_string(v.n) + ": " + v.message + "]";
  throw error(errc::config_error, msg);
}

}  // namespace torusbif
