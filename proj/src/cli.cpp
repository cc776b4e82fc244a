#include "hypcurv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>

#include "hypcurv/io.hpp"

namespace hypcurv {

namespace {

namespace fs = std::filesystem;

struct Options {
  int grid_level = kDefaultGridLevel;
  double tol = 0.0;
  int max_iter = 5000;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool svg = false, obj = false, force = false, json_errors = false;
  int samples = 100000;
  double h_cap = 0.0;
  bool experimental = false;
  std::vector<std::string> inputs;
};

// A failure that carries its own exit code and optional JSON detail.
struct CommandFailure {
  int code;
  std::string kind;
  std::string message;
  Json detail;
};

std::string output_dir(const Options& o, const std::string& fallback = ".") {
  const std::string dir = o.out_dir.empty() ? fallback : o.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io_error, "cannot create " + dir + ": " + ec.message());
  return dir;
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.grid_level = o.grid_level;
  c.tol_grad = o.tol;
  c.max_iter = o.max_iter;
  c.seed = o.seed;
  c.force = o.force;
  return c;
}

void emit_pictures(const Options& o, const HyperbolicPolytope& p, const std::string& stem) {
  if (!o.svg && !o.obj) return;
  const std::string dir = output_dir(o);
  if (o.svg) {
    if (p.dim != 1) fail(ErrorKind::invalid_argument, "--svg needs an m = 1 body");
    write_text_file(in_dir(dir, stem + ".svg"), svg_document(p));
  }
  if (o.obj) {
    if (p.dim != 2) fail(ErrorKind::invalid_argument, "--obj needs an m = 2 body");
    write_text_file(in_dir(dir, stem + ".obj"), obj_document(p));
  }
}

void write_report(const Options& o, std::ostream& out, const Json& report, const std::string& name) {
  out << report.dump(2) << "\n";
  if (!o.out_dir.empty()) write_json_file(in_dir(output_dir(o), name), report);
}

CheckMode check_mode(const DiscreteMeasure& mu, std::uint64_t seed) {
  return mu.size() <= kMaxExhaustive ? CheckMode{} : CheckMode::sampled(4096, seed);
}

Json condition_failure_detail(const ConditionReport& r) {
  Json d = {{"report", to_json(r)}};
  if (!r.vertex_ok) d["vertex_witness"] = r.max_weight_index;
  if (!r.alexandrov_ok) d["alexandrov_witness"] = r.worst_witness;
  return d;
}

std::string failed_conditions(const ConditionReport& r) {
  std::vector<std::string> names;
  if (!r.total_mass_ok) names.push_back("total mass");
  if (!r.vertex_ok) names.push_back("vertex");
  if (!r.alexandrov_ok) names.push_back("Alexandrov");
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
  return s;
}

int run_check(const Options& o, std::ostream& out) {
  const auto mu = measure_from_json(read_json_file(o.inputs.at(0)));
  const auto r = check_conditions(mu, check_mode(mu, o.seed));
  write_report(o, out, to_json(r), "conditions.json");
  if (!r.all_ok())
    throw CommandFailure{exit_validation, "condition-failed",
                         "conditions fail: " + failed_conditions(r), condition_failure_detail(r)};
  return exit_ok;
}

Json forward_json(const HyperbolicPolytope& p, const Grid& grid) {
  const auto by_integral = curvature_measure_integral(p, grid);
  const auto by_angles = curvature_measure_angles(p);
  const Vec diff = by_integral.weights - by_angles.weights;
  return {{"dim", p.dim},
          {"grid_level", grid.level},
          {"total_integral", by_integral.total()},
          {"total_angles", by_angles.total()},
          {"max_abs_diff", diff.cwiseAbs().maxCoeff()},
          {"max_rel_diff", (diff.array() / by_angles.weights.array()).abs().maxCoeff()},
          {"integral", to_json(by_integral)},
          {"angles", to_json(by_angles)}};
}

int run_forward(const Options& o, std::ostream& out) {
  const auto p = body_from_json(read_json_file(o.inputs.at(0)));
  const Json report = forward_json(p, cached_grid(p.dim, o.grid_level));
  write_report(o, out, report, "forward.json");
  if (!o.out_dir.empty())
    write_json_file(in_dir(output_dir(o), "measure.json"), report["angles"]);
  emit_pictures(o, p, "body");
  return exit_ok;
}

SolveReport checked_solve(const Options& o, const DiscreteMeasure& mu) {
  try {
    return solve(mu, solver_config(o));
  } catch (const PreconditionError& e) {
    throw CommandFailure{exit_validation, "precondition-failed", e.what(),
                         condition_failure_detail(e.report())};
  }
}

int run_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const auto mu = measure_from_json(read_json_file(o.inputs.at(0)));
  const auto rep = checked_solve(o, mu);
  for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
  write_report(o, out, to_json(rep), "solve.json");
  if (!rep.converged)
    throw CommandFailure{exit_no_convergence, "no-convergence", "solver stopped: " + rep.stop_reason, {}};
  if (!o.out_dir.empty() && rep.body) write_json_file(in_dir(output_dir(o), "body.json"), to_json(*rep.body));
  if (rep.body) emit_pictures(o, *rep.body, "body");
  return exit_ok;
}

int run_roundtrip(const Options& o, std::ostream& out, std::ostream& err) {
  const auto p = body_from_json(read_json_file(o.inputs.at(0)));
  const auto mu = curvature_measure_angles(p);
  const auto rep = checked_solve(o, mu);
  for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
  Json table = Json::array();
  double max_abs = 0, max_rel = 0;
  for (int i = 0; i < p.size(); ++i) {
    const double got = rep.body ? rep.body->radii(i) : std::nan("");
    const double d = got - p.radii(i);
    max_abs = std::max(max_abs, std::fabs(d));
    max_rel = std::max(max_rel, std::fabs(d) / p.radii(i));
    table.push_back({{"index", i}, {"radius", p.radii(i)}, {"recovered", got}, {"diff", d}});
  }
  const Json report = {{"dim", p.dim},
                       {"converged", rep.converged},
                       {"iterations", rep.iterations},
                       {"stop_reason", rep.stop_reason},
                       {"max_abs_diff", max_abs},
                       {"max_rel_diff", max_rel},
                       {"radii", table},
                       {"wall_seconds", rep.wall_seconds}};
  write_report(o, out, report, "roundtrip.json");
  if (!rep.converged)
    throw CommandFailure{exit_no_convergence, "no-convergence", "solver stopped: " + rep.stop_reason, {}};
  return exit_ok;
}

int run_crofton(const Options& o, std::ostream& out) {
  const auto p1 = body_from_json(read_json_file(o.inputs.at(0)));
  const auto p2 = body_from_json(read_json_file(o.inputs.at(1)));
  CroftonConfig c;
  c.samples = o.samples;
  c.h_cap = o.h_cap;
  c.seed = o.seed;
  c.experimental = o.experimental;
  const auto r = crofton_compare(p1, p2, cached_grid(p1.dim, o.grid_level), c);
  write_report(o, out, to_json(r), "crofton.json");
  return exit_ok;
}

DiscreteMeasure circle_measure(const std::vector<double>& angles, const std::vector<double>& w) {
  std::vector<Vec> pts;
  for (double a : angles) pts.push_back(circle_point(a));
  return make_measure(1, pts, Eigen::Map<const Vec>(w.data(), Eigen::Index(w.size())));
}

int run_demo(const Options& o, std::ostream& out) {
  using std::numbers::pi;
  const std::string dir = output_dir(o, "fixtures");
  Json index = Json::object();
  auto body = [&](const std::string& name, const HyperbolicPolytope& p) {
    write_json_file(in_dir(dir, name), to_json(p));
    index[name] = "body, m = " + std::to_string(p.dim) + ", " + std::to_string(p.size()) + " vertices";
  };
  auto measure = [&](const std::string& name, const DiscreteMeasure& mu, const std::string& what) {
    write_json_file(in_dir(dir, name), to_json(mu));
    index[name] = what;
  };
  body("square.json", ball_polytope(1, 4, 1.0));
  body("ball256_r1.json", ball_polytope(1, 256, 1.0));
  body("ball256_r05.json", ball_polytope(1, 256, 0.5));
  body("icosphere4_r1.json", ball_polytope(2, 4, 1.0));
  const double w = (2 * pi + 0.3) / 3;
  measure("valid3.json", circle_measure({0, 2 * pi / 3, 4 * pi / 3}, {w, w, w}),
          "measure, all conditions hold");
  measure("clustered4.json", circle_measure({0, 0.03, 0.07, 0.1}, {1.6, 1.6, 1.6, 1.6}),
          "measure, Alexandrov condition fails");
  measure("vertex_violating.json",
          circle_measure({0, pi / 2, pi, 3 * pi / 2}, {3.2, 1.5, 1.5, 1.5}),
          "measure, vertex condition fails at point 0");
  out << Json({{"directory", dir}, {"fixtures", index}}).dump(2) << "\n";
  return exit_ok;
}

void add_common(CLI::App* sub, Options& o, bool solver_flags) {
  sub->add_option("--grid-level", o.grid_level, "quadrature grid level")->check(CLI::Range(0, 10));
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_flag("--svg", o.svg, "write an SVG picture (m = 1)");
  sub->add_flag("--obj", o.obj, "write OBJ meshes (m = 2)");
  sub->add_flag("--json-errors", o.json_errors, "print errors as JSON on stderr");
  if (solver_flags) {
    sub->add_option("--tol", o.tol, "gradient tolerance (default 1e-8 |S^m|)")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-iter", o.max_iter, "iteration limit")->check(CLI::PositiveNumber);
    sub->add_flag("--force", o.force, "solve even when the conditions fail");
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::io_error: return exit_io;
    case ErrorKind::integration_failure: return exit_no_convergence;
    default: return exit_validation;
  }
}

void report_failure(const Options& o, std::ostream& err, int code, const std::string& kind,
                    const std::string& message, const Json& detail, long index = -1) {
  if (!o.json_errors) {
    err << "error: " << message << "\n";
    return;
  }
  Json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  if (index >= 0) j["index"] = index;
  if (detail.is_object())
    for (const auto& [k, v] : detail.items()) j[k] = v;
  err << j.dump() << "\n";
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic polytopes with prescribed curvature measure", "hypcurv"};
  app.require_subcommand(1);
  Options o;
  auto* check = app.add_subcommand("check", "check the existence conditions of a measure");
  check->add_option("measure", o.inputs, "measure JSON")->required()->expected(1);
  add_common(check, o, false);
  auto* forward = app.add_subcommand("forward", "curvature measure of a body by both methods");
  forward->add_option("body", o.inputs, "body JSON")->required()->expected(1);
  add_common(forward, o, false);
  auto* solve_cmd = app.add_subcommand("solve", "body with a prescribed curvature measure");
  solve_cmd->add_option("measure", o.inputs, "measure JSON")->required()->expected(1);
  add_common(solve_cmd, o, true);
  auto* roundtrip = app.add_subcommand("roundtrip", "forward then solve, compare radii");
  roundtrip->add_option("body", o.inputs, "body JSON")->required()->expected(1);
  add_common(roundtrip, o, true);
  auto* crofton = app.add_subcommand("crofton", "Monte Carlo Crofton comparison of two bodies");
  crofton->add_option("bodies", o.inputs, "two body JSON files")->required()->expected(2);
  crofton->add_option("--samples", o.samples, "geodesic samples")->check(CLI::PositiveNumber);
  crofton->add_option("--h-cap", o.h_cap, "sampling radius (default max support + 0.5)");
  crofton->add_flag("--experimental", o.experimental, "allow m = 2");
  add_common(crofton, o, false);
  auto* demo = app.add_subcommand("demo", "write the example fixtures");
  add_common(demo, o, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    report_failure(o, err, exit_validation, "usage", e.what(), {});
    return exit_validation;
  }

  try {
    if (check->parsed()) return run_check(o, out);
    if (forward->parsed()) return run_forward(o, out);
    if (solve_cmd->parsed()) return run_solve(o, out, err);
    if (roundtrip->parsed()) return run_roundtrip(o, out, err);
    if (crofton->parsed()) return run_crofton(o, out);
    return run_demo(o, out);
  } catch (const CommandFailure& f) {
    report_failure(o, err, f.code, f.kind, f.message, f.detail);
    return f.code;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_failure(o, err, code, to_string(e.kind()), e.what(), {}, e.index());
    return code;
  } catch (const std::exception& e) {
    report_failure(o, err, exit_io, "internal", e.what(), {});
    return exit_io;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace hypcurv
