#include "knotsec/approx.hpp"

#include <algorithm>
#include <cmath>

namespace knotsec {

bool lines_match(const OrientedLine& l1, const OrientedLine& l2,
                 double tol_match, double scale) {
    Vec3 d1 = l1.direction.normalized();
    Vec3 d2 = l2.direction.normalized();
    if (d1.dot(d2) < 0) d2 = d2 * -1.0;  // unoriented comparison
    if (d1.cross(d2).norm() > tol_match) return false;
    auto off_line = [](const Point3& p, const OrientedLine& l) {
        Vec3 w = p - l.base;
        return (w - l.direction * w.dot(l.direction)).norm();
    };
    double s = std::max(scale, 1.0);
    return off_line(l2.base, l1) <= tol_match * s &&
           off_line(l1.base, l2) <= tol_match * s;
}

namespace {

// closed-polygon embeddedness: distinct vertices, non-adjacent edges disjoint,
// adjacent edges meeting only at the shared vertex
bool polygon_embedded(const std::vector<Point3>& v, const ToleranceConfig& tol) {
    int n = static_cast<int>(v.size());
    if (n < 3) return false;
    double clear_tol = tol.tol_embed();
    for (int i = 0; i < n; ++i) {
        Segment ei{v[i], v[(i + 1) % n]};
        if (ei.length() <= clear_tol) return false;
        for (int j = i + 1; j < n; ++j) {
            bool adj = (j == i + 1) || (i == 0 && j == n - 1);
            Segment ej{v[j], v[(j + 1) % n]};
            if (!adj) {
                if (segment_segment_distance(ei, ej) <= clear_tol)
                    return false;
                continue;
            }
            // shared vertex: the edges must leave it in distinct directions
            Point3 shared = (j == i + 1) ? v[j] : v[0];
            Point3 other_i = (j == i + 1) ? v[i] : v[1];
            Point3 other_j = (j == i + 1) ? v[(j + 1) % n] : v[n - 1];
            Vec3 a = (other_i - shared).normalized();
            Vec3 b = (other_j - shared).normalized();
            if (a.cross(b).norm() < tol.tol_dir && a.dot(b) > 0)
                return false;  // fold-back: overlapping collinear edges
        }
    }
    return true;
}

}  // namespace

QuadApprox quadrisecant_approximation(const PolygonalKnot& K,
                                      const ToleranceConfig& tol_in,
                                      const EnumerationOptions& opts,
                                      uint64_t seed) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);

    QuadApprox A;
    A.source_quadrisecants = enumerate_quadrisecants(K, tol, opts);
    if (A.source_quadrisecants.empty())
        throw NoQuadrisecants("knot has no quadrisecants to approximate with");

    struct Cut {
        KnotPoint kp;
        double arc;
    };
    std::vector<Cut> cuts;
    for (const auto& q : A.source_quadrisecants)
        for (const KnotPoint* p : {&q.a, &q.b, &q.c, &q.d})
            cuts.push_back({*p, arc_position(K, *p)});
    std::sort(cuts.begin(), cuts.end(),
              [](const Cut& x, const Cut& y) { return x.arc < y.arc; });

    // merge cut points closer than tol_len along the knot (cyclically)
    double L = K.total_length();
    double merge = tol.tol_len * L;
    std::vector<Cut> merged;
    for (const auto& c : cuts) {
        if (!merged.empty() && c.arc - merged.back().arc <= merge) continue;
        merged.push_back(c);
    }
    while (merged.size() > 1 &&
           (L - merged.back().arc) + merged.front().arc <= merge)
        merged.pop_back();

    for (const auto& c : merged) {
        A.cut_points.push_back(c.kp);
        A.polyline.push_back(c.kp.point);
    }

    A.embedded = A.polyline.size() >= 3 && polygon_embedded(A.polyline, tol);
    if (A.embedded) {
        A.signature = knot_signature(A.polyline, tol, seed);
        PolygonalKnot hat(A.polyline, K.name() + "_approx",
                          K.unknotting_number());
        try {
            A.approx_quadrisecants = enumerate_quadrisecants(hat, tol, opts);
        } catch (const FiveSecantDetected&) {
            A.approx_five_secant = true;
            A.approx_quadrisecants.clear();
        }
    }
    return A;
}

ConjectureReport conjecture_report(const QuadApprox& A, const PolygonalKnot& K,
                                   const ToleranceConfig& tol_in,
                                   uint64_t seed) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);

    ConjectureReport rep;
    rep.embedded = A.embedded;
    rep.source_count = static_cast<int>(A.source_quadrisecants.size());
    rep.approx_count = static_cast<int>(A.approx_quadrisecants.size());
    if (!A.embedded) return rep;

    KnotSignature src = knot_signature(K, tol, seed);
    rep.same_signature = A.signature.has_value() && *A.signature == src;

    if (A.approx_five_secant ||
        rep.approx_count != rep.source_count) {
        rep.same_quadrisecant_set = false;
        return rep;
    }
    // canonical unordered line-set comparison: greedy matching is sound here
    // because matching is an equivalence at this tolerance (lines are either
    // near-identical or far apart)
    double match_tol = tol.tol_line;
    double scale = tol.scene_diameter;
    std::vector<bool> used(A.approx_quadrisecants.size(), false);
    for (const auto& qs : A.source_quadrisecants) {
        bool found = false;
        for (size_t k = 0; k < A.approx_quadrisecants.size(); ++k) {
            if (used[k]) continue;
            if (lines_match(qs.line, A.approx_quadrisecants[k].line, match_tol,
                            scale)) {
                used[k] = true;
                found = true;
                break;
            }
        }
        if (!found) return rep;  // same_quadrisecant_set stays false
    }
    rep.same_quadrisecant_set = true;
    return rep;
}

ConjectureReport conjecture_report(const PolygonalKnot& K,
                                   const ToleranceConfig& tol,
                                   const EnumerationOptions& opts,
                                   uint64_t seed) {
    QuadApprox A = quadrisecant_approximation(K, tol, opts, seed);
    return conjecture_report(A, K, tol, seed);
}

}  // namespace knotsec
