// pbif: command-line driver for spectra, solutions, branches, diagrams,
// closed-form profiles, bound checks, time evolution and the acceptance run.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "torusbif/torusbif.hpp"

namespace fs = std::filesystem;
using namespace torusbif;

namespace {

// Flags shared by every subcommand and the config key each one overrides.
const std::vector<std::pair<std::string, std::string>> common_flags = {
    {"--s", "s"},
    {"--p", "p"},
    {"--multiplier", "multiplier"},
    {"--delta", "delta"},
    {"--n", "N"},
    {"--kmax", "kmax"},
    {"--lambda-min", "lambda_min"},
    {"--lambda-max", "lambda_max"},
    {"--out", "out"},
    {"--format", "format"},
};

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;  // flag text keyed by config key
  std::vector<std::pair<std::string, std::string>> flags;  // (flag, config key)
  std::function<int(const RunConfig&, const ConfigMap&)> run;
};

void add_flag(Command& c, const std::string& flag, const std::string& key, const std::string& help) {
  c.app->add_option(flag, c.values[key], help);
  c.flags.emplace_back(flag, key);
}

void add_common(Command& c) {
  c.app->add_option("--config", c.config_path, "key = value configuration file");
  for (const auto& [flag, key] : common_flags) add_flag(c, flag, key, "overrides '" + key + "'");
}

ConfigMap overrides(const Command& c) {
  ConfigMap map;
  for (const auto& [flag, key] : c.flags)
    if (c.app->get_option(flag)->count() > 0) map[key] = c.values.at(key);
  return map;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw error(errc::config_error, "out: cannot create '" + cfg.out + "': " + ec.message());
  return (fs::path(cfg.out) / name).string();
}

std::string sign_name(int sign) { return sign > 0 ? "plus" : "minus"; }

void print_point(const BranchPoint& pt) {
  std::printf("lambda=%s residual=%s l2=%s h2s=%s linf=%s\n", format_number(pt.lambda).c_str(),
              format_number(pt.residual_l2).c_str(), format_number(pt.norms.l2).c_str(),
              format_number(pt.norms.h_2s).c_str(), format_number(pt.norms.linf).c_str());
}

json point_json(const ProblemSpec& ps, const BranchPoint& pt) {
  return {{"problem", to_json(ps)},
          {"lambda", pt.lambda},
          {"a", pt.u.vec()},
          {"residual", pt.residual_l2},
          {"norms", {{"l2", pt.norms.l2}, {"h2s", pt.norms.h_2s}, {"linf", pt.norms.linf}}}};
}

void write_point(const RunConfig& cfg, const std::string& stem, const ProblemSpec& ps, const BranchPoint& pt) {
  if (cfg.format == "json")
    write_file(out_path(cfg, stem + ".json"), point_json(ps, pt).dump(1) + "\n");
  else
    write_file(out_path(cfg, stem + ".csv"), field_csv(pt.u));
}

json events_json(const std::vector<Event>& events) {
  json arr = json::array();
  for (const auto& e : events)
    arr.push_back({{"type", to_string(e.type)}, {"lambda", e.lambda}, {"min_sv", e.min_sv}, {"refined", e.refined}});
  return arr;
}

// Branch from (sigma_k, 0) traced toward whichever end of [lambda_min, lambda_max] it heads for.
Branch trace_mode(const ProblemSpec& ps, int k, double amplitude, ContinuationConfig cc, double lo, double hi) {
  const double sigma = operator_symbol(ps.multiplier, k);
  const BranchPoint start = branch_switch(ps, k, amplitude, cc);
  const bool up = start.lambda >= sigma;
  cc.target_lambda = up ? hi : lo;
  if (up ? !(sigma < hi) : !(sigma > lo)) {
    Branch br;
    br.problem = ps;
    br.origin = {OriginKind::trivial_mode, k};
    br.stop_reason = "outside_range";
    return br;
  }
  return continue_branch(ps, start, up ? 1 : -1, cc, {OriginKind::trivial_mode, k});
}

// The converged solution at cfg.lambda on the branch from (sigma_k, 0).
BranchPoint solve_on_branch(const ProblemSpec& ps, const RunConfig& cfg) {
  const double sigma = operator_symbol(ps.multiplier, cfg.k);
  if (ps.p == 2.0) {
    const double ddot = bifurcation_direction(ps.multiplier, cfg.k, ps.p).lambda_ddot;
    if ((cfg.lambda - sigma) * ddot <= 0.0)
      throw error(errc::lambda_out_of_range, "the branch from sigma_" + std::to_string(cfg.k) + " = " +
                                                 format_number(sigma) + " leaves on the other side of lambda = " +
                                                 format_number(cfg.lambda));
  }
  ContinuationConfig cc = cfg.continuation;
  cc.target_lambda = cfg.lambda;
  const Branch br = bifurcating_branch(ps, cfg.k, cfg.sign * std::abs(cfg.amplitude), cc);
  if (br.stop_reason != "target" || br.points.back().lambda != cfg.lambda)
    throw error(errc::no_convergence, "branch " + std::to_string(cfg.k) + " did not reach lambda = " +
                                          format_number(cfg.lambda) + " (" + br.stop_reason + ")");
  return br.points.back();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_spectrum(const RunConfig& cfg, const ConfigMap&) {
  const auto spec = cfg.multiplier_spec();
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& e : trivial_spectrum(spec, cfg.kmax)) {
      json row = {{"k", e.k}, {"sigma", e.sigma}, {"constant_branch_lambda", -e.sigma / (cfg.p - 1.0)}};
      if (e.k >= 1 && cfg.p == 2.0) row["lambda_ddot"] = bifurcation_direction(spec, e.k, cfg.p).lambda_ddot;
      rows.push_back(row);
    }
    write_file(out_path(cfg, "spectrum.json"), json{{"multiplier", to_json(spec)}, {"p", cfg.p}, {"modes", rows}}.dump(1) + "\n");
  } else {
    write_file(out_path(cfg, "spectrum.csv"), spectrum_csv(spec, cfg.kmax, cfg.p));
  }
  std::fputs(spectrum_csv(spec, cfg.kmax, cfg.p).c_str(), stdout);
  return 0;
}

int cmd_solve(const RunConfig& cfg, const ConfigMap&) {
  const auto ps = cfg.problem();
  const BranchPoint pt = solve_on_branch(ps, cfg);
  write_point(cfg, "solution_k" + std::to_string(cfg.k) + "_" + sign_name(cfg.sign), ps, pt);
  print_point(pt);
  return 0;
}

int cmd_branch(const RunConfig& cfg, const ConfigMap&) {
  const auto ps = cfg.problem();
  const Branch br =
      trace_mode(ps, cfg.k, cfg.sign * std::abs(cfg.amplitude), cfg.continuation, cfg.lambda_min, cfg.lambda_max);
  const std::string stem = "branch_k" + std::to_string(cfg.k) + "_" + sign_name(cfg.sign);
  save_branch(out_path(cfg, stem + ".json"), br);
  if (cfg.format == "csv") write_file(out_path(cfg, stem + ".csv"), branch_csv(br));
  std::printf("%zu points, stop: %s\n", br.points.size(), br.stop_reason.c_str());
  for (const auto& e : detect_events(br))
    std::printf("%s at lambda=%s (min_sv %s)\n", std::string(to_string(e.type)).c_str(), format_number(e.lambda).c_str(),
                format_number(e.min_sv).c_str());
  if (!br.points.empty()) print_point(br.points.back());
  return br.stop_reason == "target" || br.stop_reason == "outside_range" ? 0 : 1;
}

struct DiagramJob {
  std::string name;
  int sign = 1;  // sign attached to the plotted norm
  std::function<Branch()> trace;
  Branch branch;
  std::vector<Event> events;
  std::string failure;
};

int cmd_diagram(const RunConfig& cfg, const ConfigMap&) {
  const auto ps = cfg.problem();
  const double lo = cfg.lambda_min, hi = cfg.lambda_max;
  const ContinuationConfig cc = cfg.continuation;
  const double eps = 1e-3 * (hi - lo);

  std::vector<DiagramJob> jobs;
  jobs.push_back({"trivial", 1, [=] { return trivial_branch(ps, lo, hi, cc); }});
  if (lo < 0.0) jobs.push_back({"constant_neg", 1, [=] { return constant_branch(ps, std::min(-eps, hi), lo, cc); }});
  if (hi > 0.0) jobs.push_back({"constant_pos", 1, [=] { return constant_branch(ps, std::max(eps, lo), hi, cc); }});
  for (int k = 1; k <= cfg.kmax; ++k)
    for (int sign : {1, -1})
      jobs.push_back({"C" + std::to_string(k) + "_" + sign_name(sign), sign,
                      [=] { return trace_mode(ps, k, sign * std::abs(cfg.amplitude), cc, lo, hi); }});

  std::mutex log_mutex;
  auto previous_sink = warning_sink();
  warning_sink() = [&](std::string_view msg) {
    std::lock_guard lock(log_mutex);
    std::cerr << "[torusbif warning] " << msg << '\n';
  };
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(cfg.threads > 0 ? cfg.threads : hw, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          auto& job = jobs[i];
          try {
            job.branch = job.trace();
            job.events = detect_events(job.branch);
          } catch (const std::exception& e) {
            job.failure = e.what();
          }
        }
      });
  }
  warning_sink() = previous_sink;

  // Mirror images for lambda < -1 are derived from the finished branches.
  if (ps.p == 2.0) {
    const std::size_t n = jobs.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (jobs[i].name.front() != 'C' || !jobs[i].failure.empty() || jobs[i].branch.points.empty()) continue;
      DiagramJob img{"T_" + jobs[i].name, jobs[i].sign, {}};
      try {
        img.branch = symmetry_T(jobs[i].branch);
      } catch (const std::exception& e) {
        img.failure = e.what();
      }
      jobs.push_back(std::move(img));
    }
  }

  json summary = {{"problem", to_json(ps)}, {"lambda_min", lo}, {"lambda_max", hi}, {"branches", json::array()}};
  json table = json::array();
  std::string csv = "branch,lambda,signed_h2s\n";
  int failures = 0;
  for (const auto& job : jobs) {
    json entry = {{"name", job.name}};
    if (!job.failure.empty()) {
      ++failures;
      entry["error"] = job.failure;
      std::printf("%-16s FAILED: %s\n", job.name.c_str(), job.failure.c_str());
    } else {
      const std::string file = job.name + ".json";
      save_branch(out_path(cfg, file), job.branch);
      entry["file"] = file;
      entry["points"] = job.branch.points.size();
      entry["stop_reason"] = job.branch.stop_reason;
      entry["events"] = events_json(job.events);
      for (const auto& pt : job.branch.points) {
        const double y = job.sign * pt.norms.h_2s;
        csv += job.name + "," + format_number(pt.lambda) + "," + format_number(y) + "\n";
        table.push_back({{"branch", job.name}, {"lambda", pt.lambda}, {"signed_h2s", y}});
      }
      std::printf("%-16s %4zu points  %s\n", job.name.c_str(), job.branch.points.size(),
                  job.branch.stop_reason.c_str());
      for (const auto& e : job.events)
        std::printf("%-16s   %s at lambda=%s\n", "", std::string(to_string(e.type)).c_str(), format_number(e.lambda).c_str());
    }
    summary["branches"].push_back(entry);
  }
  summary["failures"] = failures;
  write_file(out_path(cfg, "summary.json"), summary.dump(1) + "\n");
  if (cfg.format == "json")
    write_file(out_path(cfg, "diagram.json"), table.dump(1) + "\n");
  else
    write_file(out_path(cfg, "diagram.csv"), csv);
  return failures == 0 ? 0 : 1;
}

int cmd_oracle(const RunConfig& cfg, const ConfigMap&) {
  if (cfg.multiplier != "fractional" || cfg.s != 0.5 || cfg.p != 2.0 || cfg.m0 || cfg.m1)
    throw error(errc::config_error, "oracle: closed forms exist only for multiplier = fractional, s = 0.5, p = 2");
  const auto ps = cfg.problem();
  const BOSign sign = cfg.sign > 0 ? BOSign::plus : BOSign::minus;
  const CosineField u = cfg.lambda < 0.0 ? bo_negative(cfg.lambda, sign, cfg.N) : bo_positive(cfg.k, cfg.lambda, sign, cfg.N);
  const BranchPoint pt = make_point(ps, cfg.lambda, u);
  write_point(cfg, "oracle_" + (cfg.lambda < 0.0 ? std::string("neg") : "k" + std::to_string(cfg.k)) + "_" +
                       sign_name(cfg.sign),
              ps, pt);
  print_point(pt);
  return 0;
}

int cmd_bounds_check(const RunConfig& cfg, const ConfigMap&) {
  if (cfg.input.empty()) throw error(errc::config_error, "input: bounds-check needs a branch file (--input)");
  const Branch br = load_branch(cfg.input);
  std::optional<BoundConstants> bc;
  if (bounds_regime(br.problem)) {
    bc = cfg.bounds;
    const auto& b = cfg.bounds;
    if (b.c_gns == 1.0 && b.rho == 1.0 && b.c_rho == 1.0 && b.a_p_plus_1 == 1.0 && b.a_2p == 1.0)
      std::cerr << "note: " << placeholder_constants_banner() << '\n';
  }
  const std::vector<std::string> names = {"l2", "linf_chain", "h2s", "linf", "lower"};
  std::string csv = "lambda,residual";
  for (const auto& n : names) csv += "," + n + "," + n + "_bound," + n + "_pass";
  csv += "\n";
  json rows = json::array();
  int hard_failures = 0;
  for (const auto& pt : br.points) {
    const auto rep = check_point(br.problem, bc, pt);
    if (!rep.hard_passes()) ++hard_failures;
    csv += format_number(pt.lambda) + "," + format_number(pt.residual_l2);
    json row = {{"lambda", pt.lambda}, {"residual", pt.residual_l2}};
    for (const auto& n : names) {
      if (const auto* c = rep.find(n)) {
        csv += "," + format_number(c->measured) + "," + format_number(c->bound) + "," + (c->passes ? "1" : "0");
        row[n] = {{"measured", c->measured}, {"bound", c->bound}, {"pass", c->passes}, {"hard", c->hard}};
      } else {
        csv += ",,,";
      }
    }
    csv += "\n";
    rows.push_back(row);
  }
  if (cfg.format == "json")
    write_file(out_path(cfg, "bounds_check.json"), rows.dump(1) + "\n");
  else
    write_file(out_path(cfg, "bounds_check.csv"), csv);
  std::printf("%zu points checked, %d with failing hard bounds\n", br.points.size(), hard_failures);
  return hard_failures == 0 ? 0 : 1;
}

int cmd_evolve(const RunConfig& cfg, const ConfigMap&) {
  MultiplierSpec spec = cfg.multiplier_spec();
  CosineField phi;
  double lambda = cfg.lambda;
  if (!cfg.input.empty()) {
    const json j = parse_json(read_file(cfg.input), cfg.input);
    if (j.contains("points")) {
      const Branch br = branch_from_json(j);
      if (br.points.empty()) throw error(errc::config_error, "input: branch file has no points");
      const auto it = std::min_element(br.points.begin(), br.points.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.lambda - cfg.lambda) < std::abs(b.lambda - cfg.lambda);
      });
      spec = br.problem.multiplier;
      phi = it->u;
      lambda = it->lambda;
    } else {
      phi = field_from_json(j.contains("N") ? j : j.at("field"));
      if (j.contains("lambda")) lambda = j.at("lambda").get<double>();
    }
  } else {
    phi = solve_on_branch(cfg.problem(), cfg).u;
  }

  const ComplexField u0 = ComplexField::from_cosine(phi);
  const std::size_t m = linf_grid_size(phi.order());
  auto snapshot = [&](const std::string& stem, double t, const ComplexField& u) {
    const auto values = u.samples(m);
    if (cfg.format == "json") {
      json xs = json::array();
      for (std::size_t j = 0; j < m; ++j) xs.push_back(grid_point(j, m));
      write_file(out_path(cfg, stem + ".json"), json{{"t", t}, {"x", xs}, {"u", values}}.dump() + "\n");
    } else {
      std::string csv = "x,u\n";
      for (std::size_t j = 0; j < m; ++j) csv += csv_row({grid_point(j, m), values[j]});
      write_file(out_path(cfg, stem + ".csv"), csv);
    }
  };
  EvolveOptions opt;
  long step = 0;
  int index = 0;
  if (cfg.snapshot_every > 0) {
    snapshot("snapshot_00000", 0.0, u0);
    opt.on_step = [&](double t, const ComplexField& u) {
      if (++step % cfg.snapshot_every == 0) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%05d", ++index);
        snapshot(name, t, u);
      }
    };
  }
  const ComplexField u1 = evolve(spec, u0, cfg.dt, cfg.t_end, opt);
  snapshot("evolve_final", cfg.t_end, u1);

  const auto c0 = conserved_quantities(u0), c1 = conserved_quantities(u1);
  const double deviation = linf_norm(u1 - translate(u0, lambda * cfg.t_end));
  const json report = {{"lambda", lambda},
                       {"speed", -lambda},
                       {"t_end", cfg.t_end},
                       {"dt", cfg.dt},
                       {"traveling_wave_deviation", deviation},
                       {"mass", {c0.mass, c1.mass}},
                       {"momentum", {c0.momentum, c1.momentum}}};
  write_file(out_path(cfg, "evolve_summary.json"), report.dump(1) + "\n");
  std::printf("t=%s deviation from traveling wave=%s mass drift=%s momentum drift=%s\n",
              format_number(cfg.t_end).c_str(), format_number(deviation).c_str(),
              format_number(std::abs(c1.mass - c0.mass)).c_str(),
              format_number(std::abs(c1.momentum - c0.momentum)).c_str());
  return 0;
}

int cmd_verify(const RunConfig& cfg, const ConfigMap& map) {
  AcceptanceOptions opt;
  if (map.count("N")) opt.order = cfg.N;
  json checks = json::array();
  bool all = true;
  run_acceptance(opt, [&](const CheckResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    all = all && r.passed;
    checks.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
  });
  write_file(out_path(cfg, "verify.json"), json{{"passed", all}, {"order", opt.order}, {"checks", checks}}.dump(1) + "\n");
  if (!all) {
    std::fputs("failing checks:", stderr);
    for (const auto& c : checks)
      if (!c["passed"].get<bool>()) std::fprintf(stderr, " %d (%s)", c["id"].get<int>(), c["name"].get<std::string>().c_str());
    std::fputs("\n", stderr);
  }
  return all ? 0 : 1;
}

int exit_code(errc code) {
  switch (code) {
    case errc::config_error:
    case errc::table_out_of_range:
    case errc::unsupported_multiplier:
    case errc::unsupported_p:
    case errc::unsupported_regime:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation analysis of L u = lambda u + |u|^p on the torus"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& help, auto run) {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    c->run = run;
    add_common(*c);
    commands.push_back(std::move(c));
    return commands.back().get();
  };

  add("spectrum", "eigenvalues sigma_k and bifurcation curvature up to kmax", cmd_spectrum);
  auto* solve = add("solve", "solution at --lambda on the branch from mode --k", cmd_solve);
  auto* branch = add("branch", "continue the branch from mode --k across [lambda-min, lambda-max]", cmd_branch);
  auto* diagram = add("diagram", "trivial, constant and bifurcating branches with mirror images", cmd_diagram);
  auto* oracle = add("oracle", "closed-form Benjamin-Ono profile at --lambda", cmd_oracle);
  auto* bounds = add("bounds-check", "a-priori bounds at every point of a branch file", cmd_bounds_check);
  auto* evolve_cmd = add("evolve", "time evolution of a stationary profile", cmd_evolve);
  add("verify", "run the acceptance checks", cmd_verify);

  for (auto* c : {solve, branch, oracle, evolve_cmd}) {
    add_flag(*c, "--k", "k", "branch mode");
    add_flag(*c, "--sign", "sign", "branch-switch or closed-form sign, + or -");
  }
  for (auto* c : {solve, oracle, evolve_cmd}) add_flag(*c, "--lambda", "lambda", "parameter value");
  for (auto* c : {solve, branch, diagram, evolve_cmd}) add_flag(*c, "--amplitude", "amplitude", "branch-switch amplitude");
  for (auto* c : {bounds, evolve_cmd}) add_flag(*c, "--input", "input", "branch or field JSON file");
  add_flag(*evolve_cmd, "--t-end", "t_end", "final time");
  add_flag(*evolve_cmd, "--dt", "dt", "time step");
  add_flag(*evolve_cmd, "--snapshot-every", "snapshot_every", "steps between snapshots");
  add_flag(*diagram, "--threads", "threads", "worker threads (0: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& c : commands) {
    if (!c->app->parsed()) continue;
    try {
      const std::string text = c->config_path.empty() ? std::string() : read_file(c->config_path);
      ConfigMap map = parse_config_text(text);
      const ConfigMap over = overrides(*c);
      for (const auto& [k, v] : over) map[k] = v;
      const RunConfig cfg = build_config(map);
      return c->run(cfg, map);
    } catch (const error& e) {
      std::cerr << "pbif " << c->app->get_name() << ": " << e.what() << '\n';
      return exit_code(e.code());
    } catch (const std::exception& e) {
      std::cerr << "pbif " << c->app->get_name() << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
