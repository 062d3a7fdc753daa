#include "knotsec/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace knotsec {

ordered_json knot_to_json(const PolygonalKnot& K) {
    ordered_json j;
    j["schema"] = 1;
    j["name"] = K.name();
    ordered_json verts = ordered_json::array();
    for (const auto& p : K.vertices())
        verts.push_back(ordered_json::array({p.x, p.y, p.z}));
    j["vertices"] = std::move(verts);
    if (K.unknotting_number())
        j["unknotting_number"] = *K.unknotting_number();
    return j;
}

PolygonalKnot knot_from_json(const ordered_json& j, const ToleranceConfig& tol) {
    if (!j.is_object()) throw IoError("knot file: top level must be an object");
    if (j.contains("schema") && j["schema"] != 1)
        throw IoError("knot file: unsupported schema version");
    std::string name = j.value("name", std::string{});
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw IoError("knot file: missing \"vertices\" array");
    std::vector<Point3> verts;
    for (const auto& row : j["vertices"]) {
        if (!row.is_array() || row.size() != 3)
            throw IoError("knot file: each vertex must be [x, y, z]");
        for (const auto& c : row)
            if (!c.is_number())
                throw IoError("knot file: vertex coordinates must be numbers");
        double x = row[0].get<double>();
        double y = row[1].get<double>();
        double z = row[2].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw IoError("knot file: vertex coordinates must be finite");
        verts.push_back({x, y, z});
    }
    std::optional<int> u;
    if (j.contains("unknotting_number")) {
        if (!j["unknotting_number"].is_number_integer() ||
            j["unknotting_number"].get<int>() < 0)
            throw IoError(
                "knot file: unknotting_number must be a non-negative integer");
        u = j["unknotting_number"].get<int>();
    }
    return PolygonalKnot(std::move(verts), std::move(name), u, tol);
}

PolygonalKnot load_knot(const std::string& path, const ToleranceConfig& tol) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open knot file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("knot file " + path + ": " + e.what());
    }
    return knot_from_json(j, tol);
}

void save_knot(const PolygonalKnot& K, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write knot file: " + path);
    out << knot_to_json(K).dump(2) << "\n";
}

void write_obj(std::ostream& os, const PolygonalKnot& K,
               const std::vector<Quadrisecant>& quads,
               const std::vector<std::vector<Point3>>& extra_loops) {
    os << "# closed polygonal knot with quadrisecant lines\n";
    os << "o knot\n";
    char buf[128];
    auto emit_vertex = [&](const Point3& p) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
        os << buf;
    };
    int base = 1;  // OBJ indices are 1-based
    for (const auto& p : K.vertices()) emit_vertex(p);
    os << "l";
    for (int i = 0; i < K.size(); ++i) os << " " << base + i;
    os << " " << base << "\n";  // close the loop
    base += K.size();

    int qi = 0;
    for (const auto& q : quads) {
        os << "o quadrisecant_" << qi++ << "\n";
        // extend the segment [first, last] of the four points by 10% each way
        double t0 = (q.a.point - q.line.base).dot(q.line.direction);
        double t1 = t0;
        for (const KnotPoint* p : {&q.b, &q.c, &q.d}) {
            double t = (p->point - q.line.base).dot(q.line.direction);
            t0 = std::min(t0, t);
            t1 = std::max(t1, t);
        }
        double pad = 0.1 * (t1 - t0);
        emit_vertex(q.line.at(t0 - pad));
        emit_vertex(q.line.at(t1 + pad));
        os << "l " << base << " " << base + 1 << "\n";
        base += 2;
    }
    int li = 0;
    for (const auto& loop : extra_loops) {
        os << "o loop_" << li++ << "\n";
        for (const auto& p : loop) emit_vertex(p);
        os << "l";
        for (size_t i = 0; i < loop.size(); ++i)
            os << " " << base + static_cast<int>(i);
        os << " " << base << "\n";
        base += static_cast<int>(loop.size());
    }
}

ordered_json point_to_json(const Point3& p) {
    return ordered_json::array({p.x, p.y, p.z});
}

ordered_json knot_point_to_json(const KnotPoint& p) {
    ordered_json j;
    j["edge"] = p.edge_index;
    j["t"] = p.t;
    j["point"] = point_to_json(p.point);
    return j;
}

ordered_json line_to_json(const OrientedLine& l) {
    ordered_json j;
    j["base"] = point_to_json(l.base);
    j["direction"] = point_to_json(l.direction);
    return j;
}

ordered_json genericity_to_json(const GenericityReport& g) {
    ordered_json j;
    j["is_generic"] = g.is_generic;
    ordered_json cq = ordered_json::array();
    for (const auto& q : g.coplanar_quadruples)
        cq.push_back(ordered_json::array({q[0], q[1], q[2], q[3]}));
    j["coplanar_quadruples"] = std::move(cq);
    ordered_json ct = ordered_json::array();
    for (const auto& t : g.collinear_triples)
        ct.push_back(ordered_json::array({t[0], t[1], t[2]}));
    j["collinear_triples"] = std::move(ct);
    ordered_json qv = ordered_json::array();
    for (const auto& q : g.quadric_violations)
        qv.push_back(ordered_json::array({q[0], q[1], q[2], q[3]}));
    j["quadric_violations"] = std::move(qv);
    ordered_json ns = ordered_json::array();
    for (const auto& e : g.n_secant_excess) ns.push_back(e);
    j["n_secant_excess"] = std::move(ns);
    return j;
}

ordered_json verdict_to_json(const EssentialityVerdict& v) {
    ordered_json j;
    j["status"] = to_string(v.status);
    j["witness"] = v.witness;
    return j;
}

ordered_json quadrisecant_to_json(const Quadrisecant& q) {
    ordered_json j;
    j["class"] = to_string(q.dihedral_class);
    j["a"] = knot_point_to_json(q.a);
    j["b"] = knot_point_to_json(q.b);
    j["c"] = knot_point_to_json(q.c);
    j["d"] = knot_point_to_json(q.d);
    j["line"] = line_to_json(q.line);
    j["line_order"] = ordered_json::array(
        {q.line_order[0], q.line_order[1], q.line_order[2], q.line_order[3]});
    j["r"] = q.r;
    j["s"] = q.s;
    j["t"] = q.t;
    j["essential"] = to_string(q.essential);
    return j;
}

ordered_json measure_report_to_json(const MeasureReport& r) {
    ordered_json j;
    j["total_curvature"] = r.total_curvature;
    if (r.thickness_degenerate) {
        j["thickness"] = nullptr;
        j["thickness_degenerate"] = true;
        j["ropelength"] = nullptr;
    } else {
        j["thickness"] = r.thickness;
        j["thickness_degenerate"] = false;
        j["ropelength"] = r.ropelength;
    }
    j["distortion_interval"] =
        ordered_json::array({r.distortion.lo, r.distortion.hi});
    j["bridge_counts"] = r.bridge_counts;
    j["superbridge_estimate"] = r.superbridge_estimate;
    return j;
}

ordered_json conjecture_to_json(const ConjectureReport& r) {
    ordered_json j;
    j["embedded"] = r.embedded;
    j["same_signature"] = r.same_signature;
    j["same_quadrisecant_set"] = r.same_quadrisecant_set;
    j["source_quadrisecants"] = r.source_count;
    j["approx_quadrisecants"] = r.approx_count;
    return j;
}

ordered_json second_hull_to_json(const SecondHullResult& r) {
    ordered_json j;
    switch (r.kind) {
        case SecondHullKind::MemberSampled: j["kind"] = "member_sampled"; break;
        case SecondHullKind::ExactMember: j["kind"] = "exact_member"; break;
        case SecondHullKind::NotMember: j["kind"] = "not_member"; break;
    }
    j["min_crossings"] = r.min_crossings;
    j["witness_normal"] = point_to_json(r.witness_normal);
    j["planes_checked"] = r.planes_checked;
    return j;
}

}  // namespace knotsec
