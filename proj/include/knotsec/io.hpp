#pragma once

// Knot file I/O (versioned JSON), OBJ scene export, and JSON report builders
// shared by the command-line front end and the tests.

#include "knotsec/approx.hpp"
#include "knotsec/knot.hpp"
#include "knotsec/measures.hpp"
#include "knotsec/secants.hpp"
#include "knotsec/topology.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace knotsec {

using ordered_json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- knot files: {"schema":1, "name", "vertices":[[x,y,z],...],
//     "unknotting_number"?} ---
ordered_json knot_to_json(const PolygonalKnot& K);
PolygonalKnot knot_from_json(const ordered_json& j, const ToleranceConfig& tol);
PolygonalKnot load_knot(const std::string& path, const ToleranceConfig& tol);
void save_knot(const PolygonalKnot& K, const std::string& path);

// --- OBJ export: knot polyline, quadrisecant lines, optional extra loops ---
void write_obj(std::ostream& os, const PolygonalKnot& K,
               const std::vector<Quadrisecant>& quads,
               const std::vector<std::vector<Point3>>& extra_loops = {});

// --- report fragments ---
ordered_json point_to_json(const Point3& p);
ordered_json knot_point_to_json(const KnotPoint& p);
ordered_json line_to_json(const OrientedLine& l);
ordered_json genericity_to_json(const GenericityReport& g);
ordered_json verdict_to_json(const EssentialityVerdict& v);
ordered_json quadrisecant_to_json(const Quadrisecant& q);
ordered_json measure_report_to_json(const MeasureReport& r);
ordered_json conjecture_to_json(const ConjectureReport& r);
ordered_json second_hull_to_json(const SecondHullResult& r);

}  // namespace knotsec
