#include "hypcurv/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "hypcurv/hull.hpp"

namespace hypcurv {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  fail(ErrorKind::invalid_argument, "schema: " + what);
}

// Non-finite doubles become the strings "inf", "-inf", "nan".
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_num(const Json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  schema_error("\"" + key + "\" must be a number");
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Json vec_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

// Object reader that rejects missing, mistyped and unknown fields.
class Fields {
 public:
  Fields(const Json& j, std::string what) : j_(j), what_(std::move(what)) {
    if (!j.is_object()) schema_error(what_ + " must be an object");
  }
  ~Fields() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) schema_error("unknown field \"" + k + "\" in " + what_);
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const Json& at(const std::string& k) {
    if (!j_.contains(k)) schema_error("missing field \"" + k + "\" in " + what_);
    seen_.insert(k);
    return j_.at(k);
  }
  double number(const std::string& k) { return get_num(at(k), k); }
  long integer(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_number_integer()) schema_error("\"" + k + "\" must be an integer");
    return v.get<long>();
  }
  bool boolean(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_boolean()) schema_error("\"" + k + "\" must be a boolean");
    return v.get<bool>();
  }
  std::string string(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_string()) schema_error("\"" + k + "\" must be a string");
    return v.get<std::string>();
  }
  const Json& array(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_array()) schema_error("\"" + k + "\" must be an array");
    return v;
  }
  Vec vec(const std::string& k) {
    const Json& a = array(k);
    Vec v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(i) = get_num(a[i], k);
    return v;
  }
  std::vector<double> list(const std::string& k) {
    const Vec v = vec(k);
    return {v.data(), v.data() + v.size()};
  }
  std::vector<int> ints(const std::string& k) {
    std::vector<int> out;
    for (const auto& x : array(k)) {
      if (!x.is_number_integer()) schema_error("\"" + k + "\" must hold integers");
      out.push_back(x.get<int>());
    }
    return out;
  }
  int dim() {
    const long m = integer("dim");
    if (m != 1 && m != 2) fail(ErrorKind::unsupported_dimension, "dim = " + std::to_string(m));
    return int(m);
  }
  // Array of unit vectors in R^{m+1}.
  std::vector<Vec> units(const std::string& k, int m) {
    std::vector<Vec> out;
    for (const auto& row : array(k)) {
      if (!row.is_array() || int(row.size()) != m + 1)
        schema_error("\"" + k + "\" entries must have " + std::to_string(m + 1) + " coordinates");
      Vec v(m + 1);
      for (int c = 0; c <= m; ++c) v(c) = get_num(row[c], k);
      const double n = v.norm();
      if (!(std::fabs(n - 1.0) <= kUnitTolerance))
        fail(ErrorKind::invalid_argument, "\"" + k + "\" entry " + std::to_string(out.size()) +
                                              " is not a unit vector",
             long(out.size()));
      // Vectors already unit to rounding are kept bit for bit.
      const bool unit = std::fabs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon();
      out.push_back(unit ? v : Vec(v / n));
    }
    return out;
  }

 private:
  const Json& j_;
  std::string what_;
  std::set<std::string> seen_;
};

Json units_json(const std::vector<Vec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

}  // namespace

Json to_json(const DiscreteMeasure& mu) {
  return {{"dim", mu.dim}, {"points", units_json(mu.points)}, {"weights", vec_json(mu.weights)}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  Fields f(j, "measure");
  const int m = f.dim();
  auto pts = f.units("points", m);
  Vec w = f.vec("weights");
  if (w.size() != Eigen::Index(pts.size())) schema_error("points and weights differ in length");
  return make_measure(m, std::move(pts), std::move(w));
}

Json to_json(const HyperbolicPolytope& p) {
  return {{"dim", p.dim}, {"directions", units_json(p.directions)}, {"radii", vec_json(p.radii)}};
}

HyperbolicPolytope body_from_json(const Json& j) {
  Fields f(j, "body");
  const int m = f.dim();
  auto dirs = f.units("directions", m);
  Vec r = f.vec("radii");
  if (r.size() != Eigen::Index(dirs.size())) schema_error("directions and radii differ in length");
  return from_vertices(m, std::move(dirs), std::move(r));
}

Json to_json(const ConditionReport& r) {
  return {{"total_mass_ok", r.total_mass_ok},
          {"total_mass_excess", num(r.total_mass_excess)},
          {"vertex_ok", r.vertex_ok},
          {"max_weight", num(r.max_weight)},
          {"max_weight_index", r.max_weight_index},
          {"alexandrov_ok", r.alexandrov_ok},
          {"alexandrov_slack", num(r.alexandrov_slack)},
          {"worst_witness", r.worst_witness},
          {"exhaustive", r.exhaustive},
          {"tested_sets", r.tested_sets},
          {"all_ok", r.all_ok()}};
}

ConditionReport condition_report_from_json(const Json& j) {
  Fields f(j, "condition report");
  ConditionReport r;
  r.total_mass_ok = f.boolean("total_mass_ok");
  r.total_mass_excess = f.number("total_mass_excess");
  r.vertex_ok = f.boolean("vertex_ok");
  r.max_weight = f.number("max_weight");
  r.max_weight_index = int(f.integer("max_weight_index"));
  r.alexandrov_ok = f.boolean("alexandrov_ok");
  r.alexandrov_slack = f.number("alexandrov_slack");
  r.worst_witness = f.ints("worst_witness");
  r.exhaustive = f.boolean("exhaustive");
  r.tested_sets = f.integer("tested_sets");
  if (f.boolean("all_ok") != r.all_ok()) schema_error("all_ok disagrees with the flags");
  return r;
}

namespace {

const char* to_string(CellMethod c) { return c == CellMethod::exact ? "exact" : "grid"; }

Json to_json(const SolverConfig& c) {
  return {{"grid_level", c.grid_level}, {"tol_grad", num(c.tol_grad)},
          {"tol_el", num(c.tol_el)},    {"max_iter", c.max_iter},
          {"armijo_c1", num(c.armijo_c1)}, {"backtrack", num(c.backtrack)},
          {"initial_step", num(c.initial_step)}, {"psi_floor", num(c.psi_floor)},
          {"seed", c.seed},             {"restarts", c.restarts},
          {"force", c.force},           {"cells", to_string(c.cells)}};
}

SolverConfig config_from_json(const Json& j) {
  Fields f(j, "config");
  SolverConfig c;
  c.grid_level = int(f.integer("grid_level"));
  c.tol_grad = f.number("tol_grad");
  c.tol_el = f.number("tol_el");
  c.max_iter = int(f.integer("max_iter"));
  c.armijo_c1 = f.number("armijo_c1");
  c.backtrack = f.number("backtrack");
  c.initial_step = f.number("initial_step");
  c.psi_floor = f.number("psi_floor");
  const Json& seed = f.at("seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) schema_error("\"seed\" must be an integer");
  c.seed = seed.get<std::uint64_t>();
  c.restarts = int(f.integer("restarts"));
  c.force = f.boolean("force");
  const auto cells = f.string("cells");
  if (cells != "exact" && cells != "grid") schema_error("\"cells\" must be exact or grid");
  c.cells = cells == "exact" ? CellMethod::exact : CellMethod::grid;
  return c;
}

}  // namespace

Json to_json(const SolveReport& r) {
  Json j = {{"dim", r.psi.dim},
            {"directions", units_json(r.psi.support)},
            {"psi", vec_json(r.psi.values)},
            {"clamped", r.psi.clamped},
            {"radii", r.body ? vec_json(r.body->radii) : Json(nullptr)},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"restarts_used", r.restarts_used},
            {"stop_reason", r.stop_reason},
            {"K_history", vec_json(r.K_history)},
            {"grad_history", vec_json(r.grad_history)},
            {"el_residuals", vec_json(r.el_residuals)},
            {"conditions", to_json(r.conditions)},
            {"warnings", r.warnings},
            {"wall_seconds", num(r.wall_seconds)},
            {"config", to_json(r.config)}};
  return j;
}

SolveReport solve_report_from_json(const Json& j) {
  Fields f(j, "solve report");
  SolveReport r;
  const int m = f.dim();
  r.psi.dim = m;
  r.psi.support = f.units("directions", m);
  r.psi.values = f.vec("psi");
  r.psi.clamped = f.ints("clamped");
  if (r.psi.values.size() != Eigen::Index(r.psi.support.size()))
    schema_error("directions and psi differ in length");
  if (!f.at("radii").is_null()) {
    Vec radii = f.vec("radii");
    if (radii.size() != r.psi.values.size()) schema_error("directions and radii differ in length");
    r.body = from_vertices(m, r.psi.support, radii);
  }
  r.converged = f.boolean("converged");
  r.iterations = int(f.integer("iterations"));
  r.restarts_used = int(f.integer("restarts_used"));
  r.stop_reason = f.string("stop_reason");
  r.K_history = f.list("K_history");
  r.grad_history = f.list("grad_history");
  r.el_residuals = f.vec("el_residuals");
  r.conditions = condition_report_from_json(f.at("conditions"));
  for (const auto& w : f.array("warnings")) {
    if (!w.is_string()) schema_error("\"warnings\" must hold strings");
    r.warnings.push_back(w.get<std::string>());
  }
  r.wall_seconds = f.number("wall_seconds");
  r.config = config_from_json(f.at("config"));
  return r;
}

Json to_json(const CroftonReport& r) {
  return {{"dim", r.dim},
          {"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"stderr", num(r.stderr_)},
          {"samples", r.samples},
          {"unstable", r.unstable},
          {"h_cap", num(r.h_cap)},
          {"kinematic_volume", num(r.kinematic_volume)},
          {"agree", r.agree},
          {"rhs_nonnegative", r.rhs_nonnegative},
          {"differences_valid", r.differences_valid},
          {"difference_histogram", r.difference_histogram}};
}

CroftonReport crofton_report_from_json(const Json& j) {
  Fields f(j, "crofton report");
  CroftonReport r;
  r.dim = f.dim();
  r.lhs = f.number("lhs");
  r.rhs = f.number("rhs");
  r.stderr_ = f.number("stderr");
  r.samples = int(f.integer("samples"));
  r.unstable = int(f.integer("unstable"));
  r.h_cap = f.number("h_cap");
  r.kinematic_volume = f.number("kinematic_volume");
  r.agree = f.boolean("agree");
  r.rhs_nonnegative = f.boolean("rhs_nonnegative");
  r.differences_valid = f.boolean("differences_valid");
  for (const auto& x : f.array("difference_histogram")) {
    if (!x.is_number_integer()) schema_error("\"difference_histogram\" must hold integers");
    r.difference_histogram.push_back(x.get<long>());
  }
  return r;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io_error, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io_error, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io_error, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::io_error, "write failed: " + path);
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string svg_document(const HyperbolicPolytope& p, bool polar_graph) {
  if (p.dim != 1) fail(ErrorKind::unsupported_dimension, "SVG output needs m = 1");
  // Klein coordinates scaled to a 400 px disk, y up.
  const double s = 200.0, c = 220.0;
  auto X = [&](double x) { return c + s * x; };
  auto Y = [&](double y) { return c - s * y; };
  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" viewBox=\"0 0 440 440\">\n";
  o << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << s
    << "\" fill=\"none\" stroke=\"#888\"/>\n";
  o << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"2\" fill=\"black\"/>\n";
  if (polar_graph) {
    // eta -> tanh(h(eta)) eta, a closed curve inside the disk.
    o << "<polygon fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"4 3\" points=\"";
    const int n = 720;
    for (int k = 0; k < n; ++k) {
      const Vec eta = circle_point(2 * std::numbers::pi * k / n);
      const double t = std::tanh(support_fn(p, eta));
      o << X(t * eta(0)) << "," << Y(t * eta(1)) << (k + 1 < n ? " " : "");
    }
    o << "\"/>\n";
  }
  o << "<polygon fill=\"#9cf\" fill-opacity=\"0.4\" stroke=\"#036\" points=\"";
  for (std::size_t k = 0; k < p.cyclic_order.size(); ++k) {
    const int i = p.cyclic_order[k];
    o << X(p.klein(i, 0)) << "," << Y(p.klein(i, 1)) << (k + 1 < p.cyclic_order.size() ? " " : "");
  }
  o << "\"/>\n";
  for (int i = 0; i < p.size(); ++i) {
    const double kx = p.klein(i, 0), ky = p.klein(i, 1);
    o << "<line x1=\"" << c << "\" y1=\"" << c << "\" x2=\"" << X(kx) << "\" y2=\"" << Y(ky)
      << "\" stroke=\"#036\" stroke-width=\"0.5\"/>\n";
    o << "<text x=\"" << X(kx * 1.08) << "\" y=\"" << Y(ky * 1.08)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << i << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string obj_document(const HyperbolicPolytope& p, int graph_level) {
  if (p.dim != 2) fail(ErrorKind::unsupported_dimension, "OBJ output needs m = 2");
  std::ostringstream o;
  o << std::setprecision(17);
  o << "o klein_hull\n";
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < p.size(); ++i) pts.push_back(p.klein.row(i).transpose());
  for (const auto& q : pts) o << "v " << q.x() << " " << q.y() << " " << q.z() << "\n";
  for (const auto& f : convex_hull_3d(pts).faces)
    o << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  o << "o polar_graph\n";
  const Grid g = build_grid(2, graph_level);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Vec eta = g.node(k);
    const Vec x = desitter_point(eta, support_fn(p, eta));
    o << "v " << x(1) / x(0) << " " << x(2) / x(0) << " " << x(3) / x(0) << "\n";
  }
  for (const auto& t : g.triangles) {
    o << "f " << t[0] + 1 + p.size() << " " << t[1] + 1 + p.size() << " " << t[2] + 1 + p.size()
      << "\n";
  }
  return o.str();
}

}  // namespace hypcurv
