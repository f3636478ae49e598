#pragma once

// JSON and CSV persistence for fields, problems and branches. Numbers are
// written in shortest round-trip form so files reload bit-for-bit.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusbif/branch.hpp"
#include "torusbif/error.hpp"
#include "torusbif/field.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/operator.hpp"
#include "torusbif/spectrum.hpp"

namespace torusbif {

using json = nlohmann::json;

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const CosineField& u) { return {{"N", u.order()}, {"a", u.vec()}}; }

inline CosineField field_from_json(const json& j) {
  try {
    const int n = j.at("N").get<int>();
    auto a = j.at("a").get<std::vector<double>>();
    if (static_cast<int>(a.size()) != n + 1)
      throw error(errc::config_error, "field has N = " + std::to_string(n) + " but " + std::to_string(a.size()) +
                                          " coefficients");
    return CosineField(std::move(a));
  } catch (const json::exception& e) {
    throw error(errc::config_error, std::string("malformed field JSON: ") + e.what());
  }
}

inline json to_json(const MultiplierSpec& m) {
  json j = {{"multiplier", m.kind_name()}, {"s", m.s}, {"m0", m.m0}, {"m1", m.m1}};
  if (const auto* ilw = std::get_if<ILW>(&m.kind)) j["delta"] = ilw->depth;
  if (const auto* tab = std::get_if<Table>(&m.kind)) j["table"] = tab->values;
  return j;
}

inline MultiplierSpec multiplier_from_json(const json& j) {
  try {
    const std::string kind = j.at("multiplier").get<std::string>();
    const double s = j.at("s").get<double>();
    const double m0 = j.at("m0").get<double>(), m1 = j.at("m1").get<double>();
    if (kind == "fractional") return make_fractional(s, m0, m1);
    if (kind == "ilw") return make_ilw(s, j.at("delta").get<double>(), m0, m1);
    if (kind == "table") return make_table(s, j.at("table").get<std::vector<double>>(), m0, m1);
    throw error(errc::config_error, "unknown multiplier '" + kind + "'");
  } catch (const json::exception& e) {
    throw error(errc::config_error, std::string("malformed multiplier JSON: ") + e.what());
  }
}

inline json to_json(const ProblemSpec& ps) {
  json j = to_json(ps.multiplier);
  j["p"] = ps.p;
  j["N"] = ps.order;
  j["M"] = ps.grid;
  return j;
}

inline ProblemSpec problem_from_json(const json& j) {
  try {
    return make_problem(multiplier_from_json(j), j.at("p").get<double>(), j.at("N").get<int>(),
                        j.value("M", std::size_t{0}));
  } catch (const json::exception& e) {
    throw error(errc::config_error, std::string("malformed problem JSON: ") + e.what());
  }
}

inline json to_json(const Branch& br) {
  json pts = json::array();
  for (const auto& pt : br.points)
    pts.push_back({{"lambda", pt.lambda},
                   {"a", pt.u.vec()},
                   {"residual", pt.residual_l2},
                   {"min_sv", pt.min_sv},
                   {"negative_count", pt.negative_count},
                   {"arclength", pt.arclength}});
  return {{"problem", to_json(br.problem)},
          {"origin", {{"kind", to_string(br.origin.kind)}, {"k", br.origin.k}}},
          {"stop_reason", br.stop_reason},
          {"points", std::move(pts)}};
}

inline Branch branch_from_json(const json& j) {
  try {
    Branch br;
    br.problem = problem_from_json(j.at("problem"));
    const auto& o = j.at("origin");
    br.origin = {origin_kind_from_string(o.at("kind").get<std::string>()), o.value("k", 0)};
    br.stop_reason = j.value("stop_reason", std::string{});
    for (const auto& p : j.at("points")) {
      BranchPoint pt;
      pt.lambda = p.at("lambda").get<double>();
      pt.u = CosineField(p.at("a").get<std::vector<double>>());
      if (pt.u.order() != br.problem.order)
        throw error(errc::config_error, "branch point truncation differs from the problem's N");
      pt.residual_l2 = p.at("residual").get<double>();
      pt.min_sv = p.at("min_sv").get<double>();
      pt.negative_count = p.value("negative_count", 0);
      pt.arclength = p.at("arclength").get<double>();
      pt.norms = norms(pt.u, br.problem.multiplier.s);
      br.points.push_back(std::move(pt));
    }
    return br;
  } catch (const json::exception& e) {
    throw error(errc::config_error, std::string("malformed branch JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_number(values[i]);
  }
  line += '\n';
  return line;
}

inline std::string branch_csv(const Branch& br) {
  std::string out = "lambda,l2,h2s,linf,residual,min_sv\n";
  for (const auto& pt : br.points)
    out += csv_row({pt.lambda, pt.norms.l2, pt.norms.h_2s, pt.norms.linf, pt.residual_l2, pt.min_sv});
  return out;
}

inline std::string field_csv(const CosineField& u) {
  std::string out = "n,a\n";
  for (int n = 0; n <= u.order(); ++n) out += std::to_string(n) + "," + format_number(u[n]) + "\n";
  return out;
}

/// k, sigma_k and, where defined (p = 2, k >= 1), the bifurcation curvature.
inline std::string spectrum_csv(const MultiplierSpec& spec, int k_max, double p) {
  std::string out = "k,sigma,lambda_ddot\n";
  for (const auto& e : trivial_spectrum(spec, k_max)) {
    out += std::to_string(e.k) + "," + format_number(e.sigma) + ",";
    if (e.k >= 1 && p == 2.0) out += format_number(bifurcation_direction(spec, e.k, p).lambda_ddot);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::config_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::config_error, "cannot write '" + path + "'");
  out << text;
  if (!out) throw error(errc::config_error, "write to '" + path + "' failed");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw error(errc::config_error, what + " is not valid JSON: " + e.what());
  }
}

inline void save_branch(const std::string& path, const Branch& br) { write_file(path, to_json(br).dump(1) + "\n"); }

inline Branch load_branch(const std::string& path) { return branch_from_json(parse_json(read_file(path), path)); }

}  // namespace torusbif
