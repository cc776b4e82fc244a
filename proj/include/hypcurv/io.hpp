#pragma once

// JSON persistence with strict schemas, and SVG (m = 1) / OBJ (m = 2) output.
// Doubles are written in the shortest decimal form that reads back to the
// same bits.

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "hypcurv/crofton.hpp"
#include "hypcurv/measures.hpp"
#include "hypcurv/polytope.hpp"
#include "hypcurv/solver.hpp"

namespace hypcurv {

using Json = nlohmann::ordered_json;

// Points within 1e-6 of unit length are renormalized; others are rejected.
inline constexpr double kUnitTolerance = 1e-6;

Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

// {"dim", "directions", "radii"}
Json to_json(const HyperbolicPolytope& p);
HyperbolicPolytope body_from_json(const Json& j);

Json to_json(const ConditionReport& r);
ConditionReport condition_report_from_json(const Json& j);

Json to_json(const SolveReport& r);
SolveReport solve_report_from_json(const Json& j);

Json to_json(const CroftonReport& r);
CroftonReport crofton_report_from_json(const Json& j);

// Throws io-error on unreadable files or malformed JSON.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

// Klein disk, unit circle, polygon, vertex directions and labels; with
// polar_graph also the curve eta -> tanh(h(eta)) eta.
std::string svg_document(const HyperbolicPolytope& p, bool polar_graph = true);

// Two objects: the Klein hull mesh and the polar boundary c'_eta(h(eta))
// projected by x -> x_spatial / x_0, over an icosphere of the given level.
// Faces are counterclockwise seen from outside.
std::string obj_document(const HyperbolicPolytope& p, int graph_level = 3);

}  // namespace hypcurv
