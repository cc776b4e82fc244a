#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <numbers>
#include <random>

#include "hypcurv/io.hpp"
#include "random_bodies.hpp"

using namespace hypcurv;
using hypcurv::testing::random_polytope;
using std::numbers::pi;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!same_bits(a(i), b(i))) return false;
  return true;
}

Json reparse(const Json& j) { return Json::parse(j.dump()); }

}  // namespace

TEST_CASE("measure round trip is bit identical") {
  std::mt19937_64 rng(3);
  for (int m : {1, 2}) {
    const auto p = random_polytope(rng, m, 7, 0.2, 1.9);
    const auto mu = curvature_measure_angles(p);
    const auto back = measure_from_json(reparse(to_json(mu)));
    CHECK(back.dim == m);
    CHECK(same_bits(back.weights, mu.weights));
    for (int i = 0; i < mu.size(); ++i) CHECK(same_bits(back.points[i], mu.points[i]));
  }
}

TEST_CASE("body round trip") {
  std::mt19937_64 rng(4);
  for (int m : {1, 2}) {
    const auto p = random_polytope(rng, m, 8, 0.2, 1.9);
    const auto back = body_from_json(reparse(to_json(p)));
    CHECK(same_bits(back.radii, p.radii));
    for (int i = 0; i < p.size(); ++i) CHECK(same_bits(back.directions[i], p.directions[i]));
  }
}

TEST_CASE("strict schemas") {
  const Json good = Json::parse(R"({"dim": 1, "points": [[1, 0], [0, 1], [-1, 0]], "weights": [2.2, 2.2, 2.2]})");
  CHECK_NOTHROW(measure_from_json(good));
  Json extra = good;
  extra["note"] = "x";
  CHECK_THROWS_AS(measure_from_json(extra), Error);
  Json missing = good;
  missing.erase("dim");
  CHECK_THROWS_AS(measure_from_json(missing), Error);
  Json wrong_dim = good;
  wrong_dim["dim"] = 3;
  CHECK_THROWS_AS(measure_from_json(wrong_dim), Error);
  Json transposed = good;
  transposed["dim"] = 2;
  CHECK_THROWS_AS(measure_from_json(transposed), Error);
  Json text = good;
  text["weights"][0] = "2.2";
  CHECK_THROWS_AS(measure_from_json(text), Error);
  // Slightly off unit length is renormalized, far off is rejected.
  Json near = good;
  near["points"][0] = {1.0 + 5e-7, 0.0};
  CHECK(measure_from_json(near).points[0](0) == 1.0);
  Json far = good;
  far["points"][0] = {1.1, 0.0};
  try {
    measure_from_json(far);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(body_from_json(good), Error);
}

TEST_CASE("report round trips") {
  const auto p = ball_polytope(1, 6, 1.0);
  const auto mu = curvature_measure_angles(p);
  const auto cond = check_conditions(mu);
  const Json cj = to_json(cond);
  CHECK(to_json(condition_report_from_json(reparse(cj))) == cj);

  SolverConfig cfg;
  cfg.seed = 0xfedcba9876543210ULL;
  const auto rep = solve(mu, cfg);
  const Json sj = to_json(rep);
  const auto back = solve_report_from_json(reparse(sj));
  CHECK(to_json(back) == sj);
  REQUIRE(back.body);
  CHECK(same_bits(back.body->radii, rep.body->radii));
  CHECK(back.config.seed == cfg.seed);

  CroftonConfig cc;
  cc.samples = 500;
  const auto cr = crofton_compare(ball_polytope(1, 6, 0.5), p, default_grid(1), cc);
  const Json rj = to_json(cr);
  CHECK(to_json(crofton_report_from_json(reparse(rj))) == rj);
  Json bad = rj;
  bad["extra"] = 1;
  CHECK_THROWS_AS(crofton_report_from_json(bad), Error);
}

TEST_CASE("non-finite values survive") {
  ConditionReport r;
  r.alexandrov_slack = INFINITY;
  r.total_mass_excess = -INFINITY;
  const auto back = condition_report_from_json(reparse(to_json(r)));
  CHECK(back.alexandrov_slack == INFINITY);
  CHECK(back.total_mass_excess == -INFINITY);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "hypcurv_test_io";
  std::filesystem::create_directories(dir);
  const auto p = ball_polytope(1, 5, 0.8);
  const auto path = (dir / "body.json").string();
  write_json_file(path, to_json(p));
  CHECK(same_bits(body_from_json(read_json_file(path)).radii, p.radii));
  write_text_file((dir / "bad.json").string(), "{\"dim\": ");
  try {
    read_json_file((dir / "bad.json").string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg") {
  const auto p = ball_polytope(1, 5, 0.8);
  const auto svg = svg_document(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg_document(p, false).find("stroke-dasharray") == std::string::npos);
  CHECK_THROWS_AS(svg_document(ball_polytope(2, 1, 0.8)), Error);
}

TEST_CASE("obj faces point outward") {
  std::mt19937_64 rng(8);
  const auto p = random_polytope(rng, 2, 10, 0.5, 1.5);
  std::istringstream in(obj_document(p, 2));
  std::vector<Eigen::Vector3d> v;
  std::string line;
  int objects = 0, faces = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "o") ++objects;
    if (tag == "v") {
      Eigen::Vector3d x;
      ls >> x.x() >> x.y() >> x.z();
      v.push_back(x);
    }
    if (tag == "f") {
      int a, b, c;
      ls >> a >> b >> c;
      const Eigen::Vector3d n = (v[b - 1] - v[a - 1]).cross(v[c - 1] - v[a - 1]);
      // Both meshes are star-shaped about the origin.
      CHECK(n.dot(v[a - 1] + v[b - 1] + v[c - 1]) > 0);
      ++faces;
    }
  }
  CHECK(objects == 2);
  CHECK(faces > 100);
}
