#include "knotsec/knot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace knotsec {

using std::numbers::pi;

PolygonalKnot::PolygonalKnot(std::vector<Point3> vertices, std::string name,
                             std::optional<int> unknotting_number,
                             const ToleranceConfig& tol)
    : verts_(std::move(vertices)), name_(std::move(name)), u_(unknotting_number) {
    int n = size();
    if (n < 3) throw KnotError("polygon needs at least 3 vertices");
    if (u_ && *u_ < 0) throw KnotError("unknotting number must be non-negative");

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            diameter_ = std::max(diameter_, (verts_[i] - verts_[j]).norm());

    elen_.resize(n);
    cum_.resize(n + 1);
    cum_[0] = 0;
    for (int i = 0; i < n; ++i) {
        elen_[i] = (verts_[(i + 1) % n] - verts_[i]).norm();
        if (elen_[i] <= tol.tol_len * std::max(diameter_, 1.0))
            throw KnotError("zero-length edge at index " + std::to_string(i));
        cum_[i + 1] = cum_[i] + elen_[i];
    }
    total_len_ = cum_[n];

    // embeddedness: non-adjacent edges must keep clearance
    double tol_embed = tol.tol_embed_rel * std::max(diameter_, 1e-300);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segment_segment_distance(edge(i), edge(j)) <= tol_embed)
                throw KnotError("self-intersecting polygon (edges " +
                                std::to_string(i) + "," + std::to_string(j) + ")");
        }
}

KnotPoint KnotPoint::on(const PolygonalKnot& K, int edge, double t) {
    KnotPoint p;
    p.edge_index = K.mod(edge);
    p.t = t;
    p.point = K.edge(edge).at(t);
    return p;
}

double arc_position(const PolygonalKnot& K, const KnotPoint& p) {
    return K.cum_length(p.edge_index) + p.t * K.edge_length(p.edge_index);
}

double arc_length(const PolygonalKnot& K, const KnotPoint& a, const KnotPoint& b) {
    double sa = arc_position(K, a), sb = arc_position(K, b);
    double d = sb - sa;
    if (d < 0) d += K.total_length();
    return d;
}

bool common_straight_subarc(const PolygonalKnot& K, const KnotPoint& a,
                            const KnotPoint& b, const ToleranceConfig& tol) {
    if (a.edge_index == b.edge_index) return true;
    int n = K.size();
    // walk the chain of collinear adjacent edges from a's edge in both
    // directions; b is excluded iff its edge belongs to the chain
    auto edges_collinear = [&](int i, int j) {
        Segment ei = K.edge(i), ej = K.edge(j);
        return collinear(ei.p0, ei.p1, ej.p0, tol.tol_collinear) &&
               collinear(ei.p0, ei.p1, ej.p1, tol.tol_collinear);
    };
    for (int step = 1; step < n; ++step) {
        int e = K.mod(a.edge_index + step);
        if (!edges_collinear(K.mod(a.edge_index + step - 1), e)) break;
        if (e == b.edge_index) return true;
    }
    for (int step = 1; step < n; ++step) {
        int e = K.mod(a.edge_index - step);
        if (!edges_collinear(K.mod(a.edge_index - step + 1), e)) break;
        if (e == b.edge_index) return true;
    }
    return false;
}

GenericityReport check_genericity_local(const PolygonalKnot& K,
                                        const ToleranceConfig& tol) {
    GenericityReport rep;
    int n = K.size();
    const auto& V = K.vertices();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                if (collinear(V[a], V[b], V[c], tol.tol_collinear))
                    rep.collinear_triples.push_back({a, b, c});
                for (int d = c + 1; d < n; ++d)
                    if (coplanar(V[a], V[b], V[c], V[d], tol.tol_coplanar))
                        rep.coplanar_quadruples.push_back({a, b, c, d});
            }

    // for each pairwise-skew edge triple, no OTHER edge may lie on its quadric
    ToleranceConfig qt = tol;
    qt.scene_diameter = std::max(K.diameter(), 1e-12);
    for (int i = 0; i < n && rep.coplanar_quadruples.empty(); ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Segment ei = K.edge(i), ej = K.edge(j), ek = K.edge(k);
                OrientedLine li = make_line(ei.p0, ei.dir());
                OrientedLine lj = make_line(ej.p0, ej.dir());
                OrientedLine lk = make_line(ek.p0, ek.dir());
                Quadric Q;
                try {
                    Q = quadric_through_lines(li, lj, lk, qt);
                } catch (const GeomError&) {
                    continue;  // non-skew triple: no quadric constraint
                }
                for (int m = 0; m < n; ++m) {
                    if (m == i || m == j || m == k) continue;
                    Segment em = K.edge(m);
                    OrientedLine lm = make_line(em.p0, em.dir());
                    auto hit = line_quadric_intersection(Q, lm, qt);
                    if (hit.contained)
                        rep.quadric_violations.push_back({i, j, k, m});
                }
            }

    rep.is_generic = rep.coplanar_quadruples.empty() &&
                     rep.collinear_triples.empty() &&
                     rep.quadric_violations.empty() && rep.n_secant_excess.empty();
    return rep;
}

double min_edge_clearance(const PolygonalKnot& K) {
    int n = K.size();
    double best = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            best = std::min(best, segment_segment_distance(K.edge(i), K.edge(j)));
        }
    return best;
}

PolygonalKnot perturb_to_generic(const PolygonalKnot& K, double magnitude,
                                 uint64_t seed, const ToleranceConfig& tol,
                                 int max_retries) {
    if (magnitude == 0.0) {
        if (check_genericity_local(K, tol).is_generic) return K;
        throw CannotPerturb("magnitude 0 and knot not generic");
    }
    double min_edge = 1e300;
    for (int i = 0; i < K.size(); ++i)
        min_edge = std::min(min_edge, K.edge_length(i));
    if (!(magnitude < min_edge / 10))
        throw CannotPerturb("magnitude too large vs min edge length");
    if (min_edge_clearance(K) <= 2 * magnitude)
        throw CannotPerturb("knot too tight for isotopy-safe perturbation");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Point3> verts = K.vertices();
        for (auto& v : verts)
            v += Vec3{U(rng), U(rng), U(rng)} * magnitude;
        try {
            PolygonalKnot out(std::move(verts), K.name(), K.unknotting_number(),
                              tol);
            if (check_genericity_local(out, tol).is_generic) return out;
        } catch (const KnotError&) {
            // embedding check failed; retry with fresh noise
        }
    }
    throw CannotPerturb("perturbation retries exhausted");
}

// ---------------------------------------------------------------------------
// built-in families
// ---------------------------------------------------------------------------
namespace {

std::vector<Point3> torus_vertices(int p, int q, int n, double offset = 0.0) {
    std::vector<Point3> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) {
        double t = 2 * pi * (k + offset) / n;
        double r = 2.0 + std::cos(q * t);
        v.push_back({r * std::cos(p * t), r * std::sin(p * t), -std::sin(q * t)});
    }
    return v;
}

std::vector<Point3> figure8_vertices(int n) {
    std::vector<Point3> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) {
        double t = 2 * pi * k / n;
        double r = 2.0 + std::cos(2 * t);
        v.push_back({r * std::cos(3 * t), r * std::sin(3 * t), std::sin(4 * t)});
    }
    return v;
}

std::vector<Point3> circle_vertices(int n) {
    std::vector<Point3> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) {
        double t = 2 * pi * k / n;
        v.push_back({std::cos(t), std::sin(t), 0.0});
    }
    return v;
}

std::vector<Point3> hexagonal_trefoil_vertices() {
    // C3-symmetric two-orbit hexagon; verified embedded with trefoil signature
    std::vector<Point3> v;
    for (int k = 0; k < 3; ++k) {
        double aA = pi / 180.0 * (120.0 * k);
        double aB = pi / 180.0 * (120.0 * k + 270.0);
        v.push_back({2 * std::cos(aA), 2 * std::sin(aA), 1.0});
        v.push_back({3 * std::cos(aB), 3 * std::sin(aB), -1.0});
    }
    return v;
}

// Polygonal twist knot with 3 half-twists realized as a 3-band pretzel
// (bands of 1, 1, 3 half-twists); det 7 / polynomial 2t^2-3t+2 verified.
std::vector<Point3> five_two_base() {
    const double R = 0.5;
    const double XS[3] = {0.0, 2.0, 4.0};
    const int NK[3] = {1, 1, 3};
    auto region = [&](int k, bool antipodal, std::vector<Point3>& out,
                      bool reversed) {
        int npts = 4 + 4 * NK[k];
        std::vector<Point3> tmp;
        for (int s = 0; s < npts; ++s) {
            double y = -1.0 + 2.0 * s / (npts - 1);
            double th = pi * NK[k] * (y + 1) / 2;
            double sgn = antipodal ? -1.0 : 1.0;
            tmp.push_back({XS[k] + sgn * R * std::cos(th), y,
                           sgn * R * std::sin(th)});
        }
        if (reversed) std::reverse(tmp.begin(), tmp.end());
        for (auto& p : tmp) out.push_back(p);
    };
    std::vector<Point3> pts;
    // strand P in region k: right-bottom -> left-top; strand Q antipodal
    region(0, false, pts, false);                                   // RB0..LT0
    pts.push_back({XS[0] - R, 2.0, 0});  pts.push_back({XS[2] + R, 2.0, 0});
    region(2, true, pts, true);                                     // RT2..LB2
    pts.push_back({XS[2] - R, -1.5, 0}); pts.push_back({XS[1] + R, -1.5, 0});
    region(1, false, pts, false);                                   // RB1..LT1
    pts.push_back({XS[1] - R, 1.5, 0});  pts.push_back({XS[0] + R, 1.5, 0});
    region(0, true, pts, true);                                     // RT0..LB0
    pts.push_back({XS[0] - R, -2.0, 0}); pts.push_back({XS[2] + R, -2.0, 0});
    region(2, false, pts, false);                                   // RB2..LT2
    pts.push_back({XS[2] - R, 1.5, 0});  pts.push_back({XS[1] + R, 1.5, 0});
    region(1, true, pts, true);                                     // RT1..LB1
    pts.push_back({XS[1] - R, -1.5, 0}); pts.push_back({XS[0] + R, -1.5, 0});
    // drop consecutive duplicates (region endpoints coincide with link points)
    std::vector<Point3> out;
    for (const auto& p : pts)
        if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
    while (out.size() > 1 && (out.front() - out.back()).norm() < 1e-12)
        out.pop_back();
    return out;
}

std::vector<Point3> resample_closed(const std::vector<Point3>& V, int n) {
    int m = static_cast<int>(V.size());
    std::vector<double> cum(m + 1, 0.0);
    for (int i = 0; i < m; ++i)
        cum[i + 1] = cum[i] + (V[(i + 1) % m] - V[i]).norm();
    double L = cum[m];
    std::vector<Point3> out;
    out.reserve(n);
    int i = 0;
    for (int k = 0; k < n; ++k) {
        double s = L * k / n;
        while (i + 1 < m && cum[i + 1] <= s) ++i;
        double t = (s - cum[i]) / (cum[i + 1] - cum[i]);
        out.push_back(V[i] + (V[(i + 1) % m] - V[i]) * t);
    }
    return out;
}

}  // namespace

PolygonalKnot builtin_knot(const std::string& family, const BuiltinParams& params,
                           int n_vertices) {
    if (family == "round_circle") {
        if (n_vertices < 3) throw TooFewVertices("round_circle needs >= 3");
        return PolygonalKnot(circle_vertices(n_vertices), "round_circle", 0);
    }
    if (family == "torus") {
        int need = 3 * std::max(params.p, params.q);
        if (n_vertices < need)
            throw TooFewVertices("torus(" + std::to_string(params.p) + "," +
                                 std::to_string(params.q) + ") needs >= " +
                                 std::to_string(need));
        std::optional<int> u;
        if (params.p == 2 && params.q == 3) u = 1;        // trefoil
        if (params.p == 2 && params.q == 5) u = 2;        // (2,5) torus knot
        return PolygonalKnot(torus_vertices(params.p, params.q, n_vertices),
                             "torus_" + std::to_string(params.p) + "_" +
                                 std::to_string(params.q),
                             u);
    }
    if (family == "hexagonal_trefoil") {
        if (n_vertices != 6 && n_vertices != 0)
            throw TooFewVertices("hexagonal_trefoil is fixed at 6 vertices");
        return PolygonalKnot(hexagonal_trefoil_vertices(), "hexagonal_trefoil", 1);
    }
    if (family == "figure8_sampled") {
        if (n_vertices < 16) throw TooFewVertices("figure8_sampled needs >= 16");
        return PolygonalKnot(figure8_vertices(n_vertices), "figure8_sampled", 1);
    }
    if (family == "five_two") {
        if (n_vertices < 24) throw TooFewVertices("five_two needs >= 24");
        return PolygonalKnot(resample_closed(five_two_base(), n_vertices),
                             "five_two", 1);
    }
    throw UnknownFamily("unknown builtin family: " + family);
}

}  // namespace knotsec
