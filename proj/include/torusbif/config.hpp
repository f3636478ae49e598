#pragma once

// Run configuration from `key=value` text plus command-line overrides.
// Every problem is reported at once rather than stopping at the first.
//
//   # comment
//   multiplier="ilw" s=0.5 delta=1
//   table=[1, 1.2, 1.3]
//   p=2 N=128

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "torusbif/bounds.hpp"
#include "torusbif/continuation.hpp"
#include "torusbif/error.hpp"
#include "torusbif/io.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/operator.hpp"

namespace torusbif {

class config_errors : public error {
 public:
  explicit config_errors(std::vector<std::string> messages)
      : error(errc::config_error, join(messages)), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& m) {
    std::string s = std::to_string(m.size()) + " configuration error(s):";
    for (const auto& x : m) s += "\n  " + x;
    return s;
  }
  std::vector<std::string> messages_;
};

using ConfigMap = std::map<std::string, std::string>;

struct RunConfig {
  // problem
  std::string multiplier = "fractional";
  double s = 0.5;
  double delta = 1.0;
  std::vector<double> table;
  std::optional<double> m0, m1;
  double p = 2.0;
  int N = 128;
  std::size_t M = 0;  // 0 picks the dealiasing size

  ContinuationConfig continuation;
  BoundConstants bounds;

  // diagram and branch ranges
  int kmax = 3;
  double lambda_min = -3.0;
  double lambda_max = 5.0;
  double amplitude = 0.2;

  // single-solution parameters
  int k = 1;
  double lambda = 2.0;
  int sign = 1;  // +1 or -1

  // evolution
  double t_end = 1.0;
  double dt = 1e-3;
  int snapshot_every = 0;  // steps between snapshots; 0 writes only the end state

  std::string out = ".";
  std::string format = "csv";
  std::string input;  // branch file for bounds-check
  int threads = 0;    // 0 uses the hardware concurrency

  MultiplierSpec multiplier_spec() const {
    const double lo = m0.value_or(0.0), hi = m1.value_or(0.0);
    if (multiplier == "ilw") return m0 && m1 ? make_ilw(s, delta, lo, hi) : make_ilw(s, delta);
    if (multiplier == "table") return make_table(s, table, m0.value_or(default_table_m0()), m1.value_or(default_table_m1()));
    return make_fractional(s, m0.value_or(0.5), m1.value_or(1.5));
  }
  ProblemSpec problem() const { return make_problem(multiplier_spec(), p, N, M); }

 private:
  double default_table_m0() const {
    double lo = table.empty() ? 1.0 : table.front();
    for (double v : table) lo = std::min(lo, v);
    return 0.9 * lo;
  }
  double default_table_m1() const {
    double hi = table.empty() ? 1.0 : table.front();
    for (double v : table) hi = std::max(hi, v);
    return 1.1 * hi;
  }
};

namespace detail {

inline std::string normalize_key(std::string k) {
  for (auto& c : k)
    if (c == '-') c = '_';
  return k;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Tokenizes `key=value` text. Values may be bare, "quoted" or [bracketed lists].
inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::vector<std::string> errs;
  std::size_t i = 0;
  int line = 1;
  auto at_end = [&] { return i >= text.size(); };
  auto where = [&] { return "line " + std::to_string(line) + ": "; };
  while (true) {
    while (!at_end() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '#')) {
      if (text[i] == '#')
        while (!at_end() && text[i] != '\n') ++i;
      else if (text[i++] == '\n')
        ++line;
    }
    if (at_end()) break;
    const std::size_t k0 = i;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '-')) ++i;
    std::string key(text.substr(k0, i - k0));
    while (!at_end() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (key.empty() || at_end() || text[i] != '=') {
      errs.push_back(where() + "expected key=value near '" + std::string(text.substr(k0, std::min<std::size_t>(16, text.size() - k0))) + "'");
      while (!at_end() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    ++i;
    while (!at_end() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::string value;
    if (!at_end() && (text[i] == '"' || text[i] == '[')) {
      const char close = text[i] == '"' ? '"' : ']';
      const std::size_t v0 = i;
      const std::size_t end = text.find(close, i + 1);
      if (end == std::string_view::npos) {
        errs.push_back(where() + "unterminated value for '" + key + "'");
        break;
      }
      for (std::size_t j = i; j < end; ++j)
        if (text[j] == '\n') ++line;
      value = close == '"' ? std::string(text.substr(v0 + 1, end - v0 - 1)) : std::string(text.substr(v0, end - v0 + 1));
      i = end + 1;
    } else {
      const std::size_t v0 = i;
      while (!at_end() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
      value = std::string(text.substr(v0, i - v0));
    }
    key = detail::normalize_key(key);
    if (!out.emplace(key, value).second) errs.push_back(where() + "duplicate key '" + key + "'");
  }
  if (!errs.empty()) throw config_errors(std::move(errs));
  return out;
}

namespace detail {

class Reader {
 public:
  explicit Reader(const ConfigMap& m) : map_(m) {}

  void number(const char* key, double& dst) {
    if (auto v = take(key)) {
      double x = 0.0;
      if (!parse_double(*v, x))
        errors.push_back(std::string(key) + ": '" + *v + "' is not a number");
      else
        dst = x;
    }
  }
  void number(const char* key, std::optional<double>& dst) {
    double x = 0.0;
    if (map_.count(key)) {
      number(key, x);
      dst = x;
    }
  }
  template <class Int>
  void integer(const char* key, Int& dst) {
    if (auto v = take(key)) {
      long long x = 0;
      const auto* b = v->data();
      const auto res = std::from_chars(b, b + v->size(), x);
      if (res.ec != std::errc{} || res.ptr != b + v->size() || x < 0 && std::is_unsigned_v<Int>)
        errors.push_back(std::string(key) + ": '" + *v + "' is not an integer");
      else
        dst = static_cast<Int>(x);
    }
  }
  void text(const char* key, std::string& dst) {
    if (auto v = take(key)) dst = *v;
  }
  void list(const char* key, std::vector<double>& dst) {
    auto v = take(key);
    if (!v) return;
    std::string_view s = trim(*v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      errors.push_back(std::string(key) + ": expected a [comma, separated] list");
      return;
    }
    s = trim(s.substr(1, s.size() - 2));
    dst.clear();
    while (!s.empty()) {
      const auto comma = s.find(',');
      const std::string item(trim(s.substr(0, comma)));
      double x = 0.0;
      if (!parse_double(item, x)) {
        errors.push_back(std::string(key) + ": list entry '" + item + "' is not a number");
        return;
      }
      dst.push_back(x);
      if (comma == std::string_view::npos) break;
      s = s.substr(comma + 1);
    }
  }
  void reject_unknown() {
    for (const auto& [k, v] : map_)
      if (!used_.count(k)) errors.push_back("unknown key '" + k + "'");
  }

  std::vector<std::string> errors;

 private:
  static bool parse_double(const std::string& s, double& x) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(x);
  }
  std::optional<std::string> take(const char* key) {
    used_.insert(key);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  const ConfigMap& map_;
  std::set<std::string> used_;
};

}  // namespace detail

/// Converts and validates; throws config_errors listing every problem found.
inline RunConfig build_config(const ConfigMap& map) {
  RunConfig c;
  detail::Reader r(map);
  r.text("multiplier", c.multiplier);
  r.number("s", c.s);
  r.number("delta", c.delta);
  r.list("table", c.table);
  r.number("m0", c.m0);
  r.number("m1", c.m1);
  r.number("p", c.p);
  r.integer("N", c.N);
  r.integer("M", c.M);
  auto& cc = c.continuation;
  r.number("ds0", cc.ds0);
  r.number("ds_min", cc.ds_min);
  r.number("ds_max", cc.ds_max);
  r.integer("max_steps", cc.max_steps);
  r.number("newton_tol", cc.newton_tol);
  r.integer("max_iter", cc.corrector_max_iter);
  r.number("c_gns", c.bounds.c_gns);
  r.number("rho", c.bounds.rho);
  r.number("c_rho", c.bounds.c_rho);
  r.number("a_p1", c.bounds.a_p_plus_1);
  r.number("a_2p", c.bounds.a_2p);
  r.integer("kmax", c.kmax);
  r.number("lambda_min", c.lambda_min);
  r.number("lambda_max", c.lambda_max);
  r.number("amplitude", c.amplitude);
  r.integer("k", c.k);
  r.number("lambda", c.lambda);
  std::string sign;
  r.text("sign", sign);
  r.number("t_end", c.t_end);
  r.number("dt", c.dt);
  r.integer("snapshot_every", c.snapshot_every);
  r.text("out", c.out);
  r.text("format", c.format);
  r.text("input", c.input);
  r.integer("threads", c.threads);
  r.reject_unknown();
  auto& errs = r.errors;

  if (!sign.empty()) {
    if (sign == "+" || sign == "plus")
      c.sign = 1;
    else if (sign == "-" || sign == "minus")
      c.sign = -1;
    else
      errs.push_back("sign: expected + or -, got '" + sign + "'");
  }
  const bool known_kind = c.multiplier == "fractional" || c.multiplier == "ilw" || c.multiplier == "table";
  if (!known_kind) errs.push_back("multiplier: expected fractional, ilw or table, got '" + c.multiplier + "'");
  if (!(c.s >= 0.5)) errs.push_back("s: must satisfy s >= 1/2, got " + format_number(c.s));
  if (!(c.p >= 2.0)) errs.push_back("p: must satisfy p >= 2, got " + format_number(c.p));
  if (c.N < 1) errs.push_back("N: must be at least 1");
  if (c.M != 0 && c.N >= 1 && c.p >= 2.0 && c.M < min_dealias_points(c.N, c.p))
    errs.push_back("M: " + std::to_string(c.M) + " grid points are below the dealiasing minimum " +
                   std::to_string(min_dealias_points(c.N, c.p)) + " (GridTooCoarse)");
  if (c.multiplier == "ilw" && !(c.delta > 0.0)) errs.push_back("delta: ILW depth must be positive");
  if (c.multiplier == "table") {
    if (c.table.empty()) errs.push_back("table: a table multiplier needs values m(1..N)");
    else if (static_cast<int>(c.table.size()) < c.N)
      errs.push_back("table: " + std::to_string(c.table.size()) + " values do not cover N = " + std::to_string(c.N) +
                     " (TableOutOfRange)");
  }
  if (c.m0 && !(*c.m0 > 0.0)) errs.push_back("m0: must be positive");
  if (c.m1 && !(*c.m1 > 0.0)) errs.push_back("m1: must be positive");
  if (!(cc.ds_min > 0.0 && cc.ds_min <= cc.ds0 && cc.ds0 <= cc.ds_max))
    errs.push_back("ds0/ds_min/ds_max: need 0 < ds_min <= ds0 <= ds_max");
  if (cc.max_steps < 1) errs.push_back("max_steps: must be positive");
  if (!(cc.newton_tol > 0.0)) errs.push_back("newton_tol: must be positive");
  if (cc.corrector_max_iter < 1) errs.push_back("max_iter: must be positive");
  for (auto [name, v] : {std::pair{"c_gns", c.bounds.c_gns}, {"rho", c.bounds.rho}, {"c_rho", c.bounds.c_rho},
                         {"a_p1", c.bounds.a_p_plus_1}, {"a_2p", c.bounds.a_2p}})
    if (!(v > 0.0)) errs.push_back(std::string(name) + ": bound constants must be positive");
  if (c.kmax < 0) errs.push_back("kmax: must be non-negative");
  if (!(c.lambda_min < c.lambda_max)) errs.push_back("lambda_min/lambda_max: need lambda_min < lambda_max");
  if (c.amplitude == 0.0) errs.push_back("amplitude: must be nonzero");
  if (c.k < 1) errs.push_back("k: must be at least 1");
  if (!(c.dt > 0.0)) errs.push_back("dt: must be positive");
  if (!(c.t_end >= 0.0)) errs.push_back("t_end: must be non-negative");
  if (c.snapshot_every < 0) errs.push_back("snapshot_every: must be non-negative");
  if (c.format != "csv" && c.format != "json") errs.push_back("format: expected csv or json, got '" + c.format + "'");
  if (c.threads < 0) errs.push_back("threads: must be non-negative");

  // Multiplier hypotheses, checked before anything is solved.
  if (known_kind && c.s >= 0.5 && c.N >= 1 && (c.multiplier != "table" || !c.table.empty()) &&
      (c.multiplier != "ilw" || c.delta > 0.0)) {
    try {
      const auto spec = c.multiplier_spec();
      long n_max = c.N;
      if (c.multiplier == "table") n_max = std::min<long>(n_max, static_cast<long>(c.table.size()));
      for (const auto& v : validate(spec, n_max))
        errs.push_back("multiplier: " + v.hypothesis + " fails at n = " + std::to_string(v.n) + ": " + v.message);
    } catch (const error& e) {
      errs.push_back(std::string("multiplier: ") + e.what());
    }
  }
  if (!errs.empty()) throw config_errors(std::move(errs));
  return c;
}

/// File text (may be empty) with overrides applied on top, then validated.
inline RunConfig parse_config(std::string_view text, const ConfigMap& overrides = {}) {
  ConfigMap map = parse_config_text(text);
  for (const auto& [k, v] : overrides) map[detail::normalize_key(k)] = v;
  return build_config(map);
}

}  // namespace torusbif
