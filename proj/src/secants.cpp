#include "knotsec/secants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <thread>

namespace knotsec {

std::string to_string(DihedralClass c) {
    switch (c) {
        case DihedralClass::Simple: return "simple";
        case DihedralClass::Flipped: return "flipped";
        case DihedralClass::Alternating: return "alternating";
    }
    return "?";
}

std::string to_string(EssentialState s) {
    switch (s) {
        case EssentialState::Certified: return "certified";
        case EssentialState::Refuted: return "refuted";
        case EssentialState::Inconclusive: return "inconclusive";
        case EssentialState::NotRequiredChecked: return "not_required_checked";
    }
    return "?";
}

long long quadrisecant_count_upper_bound(int n) {
    if (n < 6) return 0;
    return static_cast<long long>(n) * (n - 3) * (n - 4) * (n - 5) / 12;
}

DihedralClass classify_dihedral(const std::array<int, 4>& cyc) {
    // cyc: knot-cyclic order of the line-ordered points (labels 0..3 = line
    // positions). Normalize to start at 0, in both directions.
    int k = 0;
    while (cyc[k] != 0) ++k;
    std::array<int, 4> fwd{}, bwd{};
    for (int i = 0; i < 4; ++i) {
        fwd[i] = cyc[(k + i) % 4];
        bwd[i] = cyc[(k - i + 4) % 4];
    }
    auto cls = [](const std::array<int, 4>& c) -> std::optional<DihedralClass> {
        if (c == std::array<int, 4>{0, 1, 2, 3} || c == std::array<int, 4>{0, 3, 2, 1})
            return DihedralClass::Simple;
        if (c == std::array<int, 4>{0, 1, 3, 2} || c == std::array<int, 4>{0, 2, 3, 1})
            return DihedralClass::Flipped;
        if (c == std::array<int, 4>{0, 2, 1, 3} || c == std::array<int, 4>{0, 3, 1, 2})
            return DihedralClass::Alternating;
        return std::nullopt;
    };
    if (auto r = cls(fwd)) return *r;
    if (auto r = cls(bwd)) return *r;
    return DihedralClass::Simple;  // unreachable for valid permutations
}

namespace {

struct Hit {
    int edge;
    double s;       // param on edge, in [0,1)
    double tline;   // param along the candidate line
    Point3 p;
};

// one intersection component of a line with the knot
struct Component {
    Hit rep;  // representative hit (first along line)
};

struct Candidate {
    OrientedLine line;       // canonicalized
    std::array<int, 4> quad; // generating edge quadruple (sorted)
};

// Intersect a candidate line with every edge; group hits into components
// (merging hits that coincide in space or share a straight subarc).
// Returns nullopt if the line contains an edge (degenerate).
std::optional<std::vector<Component>> scan_line(const PolygonalKnot& K,
                                                const OrientedLine& L,
                                                const ToleranceConfig& tol) {
    int n = K.size();
    double hit_tol = std::max(tol.tol_skew() * 10, 1e-12);
    double merge_tol = 1e-7 * std::max(K.diameter(), 1e-12);
    std::vector<Hit> hits;
    for (int e = 0; e < n; ++e) {
        Segment seg = K.edge(e);
        Vec3 d = seg.dir();
        Vec3 cr = d.normalized().cross(L.direction);
        if (cr.norm() < tol.tol_dir) {
            // parallel: contained edge is degenerate for enumeration
            if (point_segment_distance(L.base +
                                           L.direction * (seg.p0 - L.base).dot(L.direction),
                                       seg) < hit_tol)
                return std::nullopt;
            continue;
        }
        auto s = param_on_line(L, seg.p0, d);
        if (!s || *s < 0.0 || *s >= 1.0) continue;
        Point3 p = seg.at(*s);
        Vec3 off = p - L.base;
        double dist = (off - L.direction * off.dot(L.direction)).norm();
        if (dist > hit_tol) continue;
        hits.push_back({e, *s, off.dot(L.direction), p});
    }
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return a.tline < b.tline; });
    std::vector<Component> comps;
    for (const auto& h : hits) {
        bool merged = false;
        for (auto& c : comps) {
            if ((c.rep.p - h.p).norm() < merge_tol) {
                merged = true;
                break;
            }
            KnotPoint ka = KnotPoint::on(K, c.rep.edge, c.rep.s);
            KnotPoint kb = KnotPoint::on(K, h.edge, h.s);
            if (common_straight_subarc(K, ka, kb, tol)) {
                merged = true;
                break;
            }
        }
        if (!merged) comps.push_back({h});
    }
    return comps;
}

// cyclic adjacency of two edge indices
inline bool edges_adjacent(int i, int j, int n) {
    return (i + 1) % n == j || (j + 1) % n == i;
}

// ---- candidate construction per quadruple case ----

// all four edges pairwise skew: quadric route with memoized triple quadrics
struct QuadricCache {
    std::map<std::array<int, 3>, std::optional<Quadric>> cache;

    const std::optional<Quadric>& get(const PolygonalKnot& K,
                                      const std::array<int, 3>& key,
                                      const ToleranceConfig& tol) {
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::optional<Quadric> q;
        try {
            Segment e0 = K.edge(key[0]), e1 = K.edge(key[1]), e2 = K.edge(key[2]);
            q = quadric_through_lines(make_line(e0.p0, e0.dir()),
                                      make_line(e1.p0, e1.dir()),
                                      make_line(e2.p0, e2.dir()), tol);
        } catch (const GeomError&) {
            q = std::nullopt;
        }
        return cache.emplace(key, std::move(q)).first->second;
    }
};

void candidates_skew(const PolygonalKnot& K, const std::array<int, 4>& quad,
                     QuadricCache& qc, const ToleranceConfig& tol,
                     std::vector<Candidate>& out) {
    const auto& Q =
        qc.get(K, {quad[0], quad[1], quad[2]}, tol);
    if (!Q) return;
    Segment e3 = K.edge(quad[3]);
    OrientedLine l3 = make_line(e3.p0, e3.dir());
    auto hit = line_quadric_intersection(*Q, l3, tol);
    if (hit.contained) return;  // genericity violation surfaced elsewhere
    std::array<OrientedLine, 3> gens;
    for (int i = 0; i < 3; ++i) {
        Segment ei = K.edge(quad[i]);
        gens[i] = make_line(ei.p0, ei.dir());
    }
    for (int k = 0; k < hit.count; ++k) {
        Point3 p = l3.at(hit.t[k]);
        try {
            OrientedLine r = ruling_through_point(*Q, p, gens, tol);
            out.push_back({canonical_line(r.base, r.direction), quad});
        } catch (const GeomError&) {
        }
    }
}

// exactly one adjacent pair: candidate line joins the plane crossings of the
// two remaining edges in the plane spanned by the adjacent pair
void candidates_one_pair(const PolygonalKnot& K, const std::array<int, 4>& quad,
                         int pi, int pj, const ToleranceConfig& tol,
                         std::vector<Candidate>& out) {
    int n = K.size();
    int lead = ((pi + 1) % n == pj) ? pi : pj;  // lead, lead+1 adjacent
    Point3 a = K.vertex(lead), b = K.vertex(lead + 1), c = K.vertex(lead + 2);
    auto pl = plane_through(a, b, c, tol.tol_collinear);
    if (!pl) return;  // collinear adjacent pair: non-generic
    std::array<Point3, 2> xs;
    int xi = 0;
    for (int q : quad) {
        if (q == pi || q == pj) continue;
        Segment e = K.edge(q);
        double denom = pl->n.dot(e.dir());
        if (std::abs(denom) < tol.tol_dir * e.length()) return;  // edge near-parallel to plane
        double s = -pl->signed_dist(e.p0) / denom;
        if (s < 0.0 || s >= 1.0) return;
        xs[xi++] = e.at(s);
    }
    Vec3 d = xs[1] - xs[0];
    if (d.norm() < tol.tol_len) return;
    out.push_back({canonical_line(xs[0], d), quad});
}

// two disjoint adjacent pairs: line = intersection of the two spanned planes
void candidates_two_pairs(const PolygonalKnot& K, const std::array<int, 4>& quad,
                          const std::array<std::pair<int, int>, 2>& pairs,
                          const ToleranceConfig& tol,
                          std::vector<Candidate>& out) {
    int n = K.size();
    Plane pls[2];
    for (int k = 0; k < 2; ++k) {
        auto [i, j] = pairs[k];
        int lead = ((i + 1) % n == j) ? i : j;
        auto pl = plane_through(K.vertex(lead), K.vertex(lead + 1),
                                K.vertex(lead + 2), tol.tol_collinear);
        if (!pl) return;
        pls[k] = *pl;
    }
    Vec3 d = pls[0].n.cross(pls[1].n);
    double dn = d.norm();
    if (dn < tol.tol_dir) return;  // parallel planes
    Point3 p = (pls[0].c * pls[1].n.cross(d) + pls[1].c * d.cross(pls[0].n)) /
               (dn * dn);
    out.push_back({canonical_line(p, d), quad});
}

// conservative bounding-volume prefilter: the four hit points are collinear,
// so the two middle ones lie in the convex hull of the outer two; for some
// pair (w,z) of the quadruple, both remaining edges must cross the box of
// e_w union e_z.
bool prefilter_pass(const PolygonalKnot& K, const std::array<int, 4>& quad,
                    const std::vector<Aabb>& boxes, double pad) {
    for (int w = 0; w < 4; ++w)
        for (int z = w + 1; z < 4; ++z) {
            Aabb box = boxes[quad[w]];
            box.expand(boxes[quad[z]]);
            box.lo -= Vec3{pad, pad, pad};
            box.hi += Vec3{pad, pad, pad};
            bool ok = true;
            for (int r = 0; r < 4 && ok; ++r) {
                if (r == w || r == z) continue;
                if (!box.intersects_segment(K.edge(quad[r]))) ok = false;
            }
            if (ok) return true;
        }
    return false;
}

// label the four line-sorted components a,b,c,d in knot-cyclic order such
// that the line order (or its reversal) reads abcd / abdc / acbd
struct Labeled {
    std::array<int, 4> knot_to_line;  // line position of label a,b,c,d
    DihedralClass cls;
    std::array<int, 4> comp_of_label;  // component index (line-sorted) of a..d
};

Labeled label_quadrisecant(const std::array<double, 4>& arcpos) {
    // knot order of line positions: sort line indices 0..3 by arc position
    std::array<int, 4> knot_order{0, 1, 2, 3};
    std::sort(knot_order.begin(), knot_order.end(),
              [&](int x, int y) { return arcpos[x] < arcpos[y]; });
    // try rotations and both directions: labels a..d assigned to knot_order
    // rotated; accept if line order pattern (possibly reversed) starts at a
    for (int dir : {+1, -1}) {
        for (int rot = 0; rot < 4; ++rot) {
            std::array<int, 4> comp_of_label{};  // line index of a,b,c,d
            for (int k = 0; k < 4; ++k)
                comp_of_label[k] = knot_order[((rot + dir * k) % 4 + 4) % 4];
            // line sequence of labels: position p holds label l with
            // comp_of_label[l] == p
            std::array<int, 4> label_at_pos{};
            for (int l = 0; l < 4; ++l) label_at_pos[comp_of_label[l]] = l;
            for (bool rev : {false, true}) {
                std::array<int, 4> seq = label_at_pos;
                if (rev) std::reverse(seq.begin(), seq.end());
                if (seq[0] != 0) continue;  // must start with a
                DihedralClass cls;
                if (seq == std::array<int, 4>{0, 1, 2, 3})
                    cls = DihedralClass::Simple;
                else if (seq == std::array<int, 4>{0, 1, 3, 2})
                    cls = DihedralClass::Flipped;
                else if (seq == std::array<int, 4>{0, 2, 1, 3})
                    cls = DihedralClass::Alternating;
                else
                    continue;
                Labeled out;
                out.comp_of_label = comp_of_label;
                for (int l = 0; l < 4; ++l) out.knot_to_line[l] = comp_of_label[l];
                out.cls = cls;
                return out;
            }
        }
    }
    // valid permutations always reduce to one of the three normal forms
    throw KnotError("dihedral labeling failed");
}

}  // namespace

std::vector<Quadrisecant> enumerate_quadrisecants(const PolygonalKnot& K,
                                                  const ToleranceConfig& tol_in,
                                                  const EnumerationOptions& opts) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    int n = K.size();

    std::vector<Aabb> boxes(n);
    for (int i = 0; i < n; ++i) {
        boxes[i].expand(K.edge(i).p0);
        boxes[i].expand(K.edge(i).p1);
    }
    double pad = 1e-7 * tol.scene_diameter;

    // --- generate candidates over all edge quadruples ---
    // Work is bucketed by the first edge index; buckets are concatenated in
    // index order afterwards, so the candidate sequence (and therefore dedup
    // and output order) is identical for any thread count.
    std::vector<std::vector<Candidate>> buckets(n);
    auto process_first = [&](int i0, QuadricCache& qc) {
        std::vector<Candidate>& out = buckets[i0];
        std::array<int, 4> quad{};
        quad[0] = i0;
        for (quad[1] = quad[0] + 1; quad[1] < n; ++quad[1])
            for (quad[2] = quad[1] + 1; quad[2] < n; ++quad[2])
                for (quad[3] = quad[2] + 1; quad[3] < n; ++quad[3]) {
                    // adjacency structure
                    std::array<std::pair<int, int>, 4> adj{};
                    int nadj = 0;
                    for (int x = 0; x < 4; ++x)
                        for (int y = x + 1; y < 4; ++y)
                            if (edges_adjacent(quad[x], quad[y], n)) {
                                if (nadj < 4) adj[nadj] = {quad[x], quad[y]};
                                ++nadj;
                            }
                    if (nadj >= 3) continue;  // 3+ consecutive edges
                    if (nadj == 2) {
                        // disjoint pairs? (a shared edge means 3 consecutive)
                        auto [a1, b1] = adj[0];
                        auto [a2, b2] = adj[1];
                        if (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2)
                            continue;
                    }
                    if (opts.use_prefilter &&
                        !prefilter_pass(K, quad, boxes, pad))
                        continue;
                    if (nadj == 0)
                        candidates_skew(K, quad, qc, tol, out);
                    else if (nadj == 1)
                        candidates_one_pair(K, quad, adj[0].first, adj[0].second,
                                            tol, out);
                    else
                        candidates_two_pairs(
                            K, quad, {adj[0], adj[1]}, tol, out);
                }
    };
    int nthreads = std::max(1, opts.threads);
    if (nthreads == 1) {
        QuadricCache qc;
        for (int i0 = 0; i0 < n; ++i0) process_first(i0, qc);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                QuadricCache qc;  // per-thread cache (recomputation is benign)
                for (;;) {
                    int i0 = next.fetch_add(1);
                    if (i0 >= n) break;
                    process_first(i0, qc);
                }
            });
        for (auto& th : pool) th.join();
    }
    std::vector<Candidate> candidates;
    for (auto& b : buckets)
        candidates.insert(candidates.end(), b.begin(), b.end());

    // --- scan, componentize, dedup ---
    std::vector<Quadrisecant> result;
    std::vector<OrientedLine> seen;
    for (const auto& cand : candidates) {
        // dedup tolerance grows with base magnitude so equality survives
        // rigid motions that move the scene far from the origin
        double dtol = tol.tol_line * (1.0 + cand.line.base.norm());
        bool dup = false;
        for (const auto& s : seen)
            if (lines_equal(cand.line, s, dtol)) {
                dup = true;
                break;
            }
        if (dup) continue;
        auto comps = scan_line(K, cand.line, tol);
        if (!comps) continue;  // contained edge
        if (static_cast<int>(comps->size()) >= 5) {
            if (opts.check_five_secants) {
                std::vector<int> edges;
                for (const auto& c : *comps) edges.push_back(c.rep.edge);
                std::sort(edges.begin(), edges.end());
                throw FiveSecantDetected("line meets knot in 5+ components",
                                         edges);
            }
            seen.push_back(cand.line);
            continue;
        }
        if (comps->size() != 4) {
            // spurious candidate (clipping lost a point); not a quadrisecant
            continue;
        }
        seen.push_back(cand.line);

        std::array<double, 4> arcpos{};
        std::array<KnotPoint, 4> pts;
        for (int i = 0; i < 4; ++i) {
            const Hit& h = (*comps)[i].rep;
            pts[i] = KnotPoint::on(K, h.edge, h.s);
            arcpos[i] = arc_position(K, pts[i]);
        }
        Labeled lab = label_quadrisecant(arcpos);
        Quadrisecant q;
        q.a = pts[lab.comp_of_label[0]];
        q.b = pts[lab.comp_of_label[1]];
        q.c = pts[lab.comp_of_label[2]];
        q.d = pts[lab.comp_of_label[3]];
        q.line = cand.line;
        q.line_order = lab.knot_to_line;
        q.dihedral_class = lab.cls;
        q.r = (q.a.point - q.b.point).norm();
        q.s = (q.b.point - q.c.point).norm();
        q.t = (q.c.point - q.d.point).norm();
        result.push_back(q);
    }

    std::sort(result.begin(), result.end(),
              [](const Quadrisecant& x, const Quadrisecant& y) {
                  auto key = [](const Quadrisecant& q) {
                      return std::array<double, 8>{
                          static_cast<double>(q.a.edge_index), q.a.t,
                          static_cast<double>(q.b.edge_index), q.b.t,
                          static_cast<double>(q.c.edge_index), q.c.t,
                          static_cast<double>(q.d.edge_index), q.d.t};
                  };
                  return key(x) < key(y);
              });
    return result;
}

// ---------------------------------------------------------------------------
// trisecant families
// ---------------------------------------------------------------------------
namespace {

// one sample attempt for a given triple at sweep parameter u on the sweep edge
std::optional<Trisecant> trisecant_sample_skew(
    const PolygonalKnot& K, const std::array<int, 3>& tri, const Quadric& Q,
    const std::array<OrientedLine, 3>& gens, double u,
    const ToleranceConfig& tol) {
    Segment e0 = K.edge(tri[0]);
    Point3 p = e0.at(u);
    OrientedLine L;
    try {
        L = ruling_through_point(Q, p, gens, tol);
    } catch (const GeomError&) {
        return std::nullopt;
    }
    double params[3] = {u, 0, 0};
    for (int k = 1; k < 3; ++k) {
        Segment e = K.edge(tri[k]);
        auto s = param_on_line(L, e.p0, e.dir());
        if (!s || *s < 0.0 || *s >= 1.0) return std::nullopt;
        params[k] = *s;
    }
    // orient: sort the three points along the line
    struct PP {
        double t;
        int which;
        KnotPoint kp;
    };
    std::array<PP, 3> pp;
    for (int k = 0; k < 3; ++k) {
        KnotPoint kp = KnotPoint::on(K, tri[k], params[k]);
        pp[k] = {(kp.point - L.base).dot(L.direction), k, kp};
    }
    std::sort(pp.begin(), pp.end(), [](const PP& a, const PP& b) { return a.t < b.t; });
    // distinct components
    for (int k = 0; k < 2; ++k)
        if ((pp[k].kp.point - pp[k + 1].kp.point).norm() <
            1e-9 * std::max(K.diameter(), 1e-12))
            return std::nullopt;
    Trisecant T;
    T.a = pp[0].kp;
    T.b = pp[1].kp;
    T.c = pp[2].kp;
    double sa = arc_position(K, T.a), sb = arc_position(K, T.b),
           sc = arc_position(K, T.c);
    // cyclic order abc (direct) vs acb (reversed)
    auto ahead = [&](double x, double y) {
        double d = y - x;
        if (d < 0) d += K.total_length();
        return d;
    };
    T.order_class = (ahead(sa, sb) < ahead(sa, sc)) ? TrisecantOrderClass::Direct
                                                    : TrisecantOrderClass::Reversed;
    return T;
}

std::optional<Trisecant> trisecant_sample_adjacent(
    const PolygonalKnot& K, int lead, int m, const Point3& x, double u,
    const ToleranceConfig& tol) {
    // line through x and the point at param u on edge `lead`, within the plane
    int n = K.size();
    Segment ei = K.edge(lead), ej = K.edge((lead + 1) % n);
    Point3 p = ei.at(u);
    Vec3 d = p - x;
    if (d.norm() < tol.tol_len) return std::nullopt;
    OrientedLine L = make_line(x, d);
    auto sj = param_on_line(L, ej.p0, ej.dir());
    if (!sj || *sj < 0.0 || *sj >= 1.0) return std::nullopt;
    KnotPoint kpi = KnotPoint::on(K, lead, u);
    KnotPoint kpj = KnotPoint::on(K, (lead + 1) % n, *sj);
    KnotPoint kpm;
    {
        Segment em = K.edge(m);
        auto sm = param_on_line(L, em.p0, em.dir());
        if (!sm || *sm < 0.0 || *sm >= 1.0) return std::nullopt;
        kpm = KnotPoint::on(K, m, *sm);
    }
    // distinct points (esp. the shared vertex)
    double dtol = 1e-9 * std::max(K.diameter(), 1e-12);
    if ((kpi.point - kpj.point).norm() < dtol) return std::nullopt;
    if ((kpi.point - kpm.point).norm() < dtol) return std::nullopt;
    if ((kpj.point - kpm.point).norm() < dtol) return std::nullopt;
    struct PP {
        double t;
        KnotPoint kp;
    };
    std::array<PP, 3> pp{{{(kpi.point - L.base).dot(L.direction), kpi},
                          {(kpj.point - L.base).dot(L.direction), kpj},
                          {(kpm.point - L.base).dot(L.direction), kpm}}};
    std::sort(pp.begin(), pp.end(), [](const PP& a, const PP& b) { return a.t < b.t; });
    Trisecant T;
    T.a = pp[0].kp;
    T.b = pp[1].kp;
    T.c = pp[2].kp;
    double sa = arc_position(K, T.a), sb = arc_position(K, T.b),
           sc = arc_position(K, T.c);
    auto ahead = [&](double xx, double yy) {
        double dd = yy - xx;
        if (dd < 0) dd += K.total_length();
        return dd;
    };
    T.order_class = (ahead(sa, sb) < ahead(sa, sc)) ? TrisecantOrderClass::Direct
                                                    : TrisecantOrderClass::Reversed;
    return T;
}

// split a sampled validity mask into runs and classify their topology;
// each run is extended to its true validity boundary by bisecting the
// sampler between the last valid and first invalid grid points, so family
// endpoints land on edge boundaries (or degeneracy onsets) instead of
// stopping one grid step short
template <typename Sampler>
void emit_families(const PolygonalKnot& K, const std::array<int, 3>& tri,
                   const std::vector<std::optional<Trisecant>>& samples,
                   const Sampler& sample_at,
                   std::vector<TrisecantFamily>& out) {
    int m = static_cast<int>(samples.size());
    int steps = m - 1;
    auto grid_u = [&](int s) {
        return std::min(static_cast<double>(s) / steps, 1.0 - 1e-12);
    };
    // bisect between a valid and an invalid parameter; returns the valid-side
    // boundary sample
    auto boundary = [&](double u_valid,
                        double u_invalid) -> std::optional<Trisecant> {
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (u_valid + u_invalid);
            if (sample_at(mid))
                u_valid = mid;
            else
                u_invalid = mid;
        }
        return sample_at(u_valid);
    };
    int i = 0;
    while (i < m) {
        if (!samples[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < m && samples[j + 1]) ++j;
        TrisecantFamily fam;
        fam.edge_triple = tri;
        if (i > 0)
            if (auto b = boundary(grid_u(i), grid_u(i - 1)))
                fam.samples.push_back(*b);
        for (int k = i; k <= j; ++k) fam.samples.push_back(*samples[k]);
        if (j < steps)
            if (auto b = boundary(grid_u(j), grid_u(j + 1)))
                fam.samples.push_back(*b);
        if (fam.samples.size() == 1) {
            fam.topology = FamilyTopology::PointFamily;
        } else {
            // endpoint type: open (two points merging in the limit) vs closed
            auto end_open = [&](const Trisecant& t) {
                double d1 = (t.a.point - t.b.point).norm();
                double d2 = (t.b.point - t.c.point).norm();
                double scale = 0.05 * std::max(K.diameter(), 1e-12);
                return std::min(d1, d2) < scale;
            };
            bool lo_open = end_open(fam.samples.front());
            bool hi_open = end_open(fam.samples.back());
            fam.topology = (lo_open || hi_open) ? FamilyTopology::HalfOpen
                                                : FamilyTopology::ClosedInterval;
        }
        out.push_back(std::move(fam));
        i = j + 1;
    }
}

}  // namespace

std::vector<TrisecantFamily> trisecant_families(const PolygonalKnot& K,
                                                const ToleranceConfig& tol_in) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    int n = K.size();
    int steps = std::max(2, static_cast<int>(std::lround(1.0 / tol.family_step)));
    std::vector<TrisecantFamily> out;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                std::array<int, 3> tri{i, j, k};
                int adj_ij = edges_adjacent(i, j, n), adj_jk = edges_adjacent(j, k, n),
                    adj_ik = edges_adjacent(i, k, n);
                int nadj = adj_ij + adj_jk + adj_ik;
                if (nadj >= 2) continue;  // three consecutive edges
                std::vector<std::optional<Trisecant>> samples(steps + 1);
                if (nadj == 0) {
                    // pairwise skew (generic): sweep along edge i on the quadric
                    Quadric Q;
                    std::array<OrientedLine, 3> gens;
                    try {
                        Segment e0 = K.edge(i), e1 = K.edge(j), e2 = K.edge(k);
                        gens = {make_line(e0.p0, e0.dir()),
                                make_line(e1.p0, e1.dir()),
                                make_line(e2.p0, e2.dir())};
                        Q = quadric_through_lines(gens[0], gens[1], gens[2], tol);
                    } catch (const GeomError&) {
                        continue;
                    }
                    auto sample_at = [&](double u) {
                        return trisecant_sample_skew(K, tri, Q, gens, u, tol);
                    };
                    for (int s = 0; s <= steps; ++s) {
                        double u = std::min(static_cast<double>(s) / steps,
                                            1.0 - 1e-12);
                        samples[s] = sample_at(u);
                    }
                    emit_families(K, tri, samples, sample_at, out);
                } else {
                    // identify the adjacent pair and the third edge
                    int lead, m;
                    if (adj_ij) {
                        lead = ((i + 1) % n == j) ? i : j;
                        m = k;
                    } else if (adj_jk) {
                        lead = ((j + 1) % n == k) ? j : k;
                        m = i;
                    } else {
                        lead = ((i + 1) % n == k) ? i : k;
                        m = j;
                    }
                    auto pl = plane_through(K.vertex(lead), K.vertex(lead + 1),
                                            K.vertex(lead + 2), tol.tol_collinear);
                    if (!pl) continue;
                    Segment em = K.edge(m);
                    double denom = pl->n.dot(em.dir());
                    if (std::abs(denom) < tol.tol_dir * em.length()) continue;
                    double sx = -pl->signed_dist(em.p0) / denom;
                    if (sx < 0.0 || sx >= 1.0) continue;
                    Point3 x = em.at(sx);
                    auto sample_at = [&](double u) {
                        return trisecant_sample_adjacent(K, lead, m, x, u, tol);
                    };
                    for (int s = 0; s <= steps; ++s) {
                        double u = std::min(static_cast<double>(s) / steps,
                                            1.0 - 1e-12);
                        samples[s] = sample_at(u);
                    }
                    emit_families(K, tri, samples, sample_at, out);
                }
            }
    return out;
}

CoverageReport trisecant_coverage(const PolygonalKnot& K,
                                  const ToleranceConfig& tol_in) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    auto families = trisecant_families(K, tol);
    double L = K.total_length();
    int bins_per_edge = std::max(2, static_cast<int>(std::lround(1.0 / tol.family_step)));
    int B = K.size() * bins_per_edge;
    std::vector<char> covered(B, 0);
    auto mark = [&](double s0, double s1) {
        if (s1 < s0) std::swap(s0, s1);
        double w = L / B;
        int b0 = static_cast<int>(std::floor((s0 - 0.5 * w) / L * B));
        int b1 = static_cast<int>(std::floor((s1 + 0.5 * w) / L * B));
        for (int b = b0; b <= b1; ++b) covered[((b % B) + B) % B] = 1;
    };
    for (const auto& fam : families) {
        for (size_t s = 0; s + 1 < fam.samples.size(); ++s) {
            const Trisecant &t0 = fam.samples[s], &t1 = fam.samples[s + 1];
            // outer points: a and c (first/last along the line, covering both
            // orientations). The two outer points move continuously with the
            // family parameter, but their a/c labels swap where the canonical
            // line orientation flips. Recover the continuous runs by choosing
            // the label pairing with the smaller total cyclic gap, then mark
            // both swept arcs (cyclic short way), which stays correct across
            // vertex crossings and label swaps.
            {
                double sa0 = arc_position(K, t0.a), sc0 = arc_position(K, t0.c);
                double sa1 = arc_position(K, t1.a), sc1 = arc_position(K, t1.c);
                auto gap = [&](double u, double v) {
                    double d = std::abs(u - v);
                    return std::min(d, L - d);
                };
                auto mark_cyclic = [&](double u, double v) {
                    if (std::abs(u - v) > L / 2) {  // short way wraps origin
                        mark(std::max(u, v), L);
                        mark(0.0, std::min(u, v));
                    } else {
                        mark(u, v);
                    }
                };
                if (gap(sa0, sa1) + gap(sc0, sc1) <=
                    gap(sa0, sc1) + gap(sc0, sa1)) {
                    mark_cyclic(sa0, sa1);
                    mark_cyclic(sc0, sc1);
                } else {
                    mark_cyclic(sa0, sc1);
                    mark_cyclic(sc0, sa1);
                }
            }
        }
        if (fam.samples.size() == 1) {
            mark(arc_position(K, fam.samples[0].a),
                 arc_position(K, fam.samples[0].a));
            mark(arc_position(K, fam.samples[0].c),
                 arc_position(K, fam.samples[0].c));
        }
    }
    CoverageReport rep;
    rep.samples = B;
    for (char c : covered) rep.covered += c;
    rep.fraction = static_cast<double>(rep.covered) / B;
    return rep;
}

bool pannwitz_lower_check(const PolygonalKnot& K, const ToleranceConfig& tol) {
    auto u = K.unknotting_number();
    if (!u) throw MissingMetadata("unknotting_number metadata required");
    long long need = 2LL * (*u) * (*u);
    if (need == 0) return true;
    auto qs = enumerate_quadrisecants(K, tol);
    return static_cast<long long>(qs.size()) >= need;
}

GenericityReport check_genericity(const PolygonalKnot& K,
                                  const ToleranceConfig& tol_in) {
    ToleranceConfig tol = tol_in;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    GenericityReport rep = check_genericity_local(K, tol);
    // 5-secant scan via enumeration (only meaningful if locally generic)
    if (rep.coplanar_quadruples.empty() && rep.collinear_triples.empty()) {
        try {
            enumerate_quadrisecants(K, tol);
        } catch (const FiveSecantDetected& f) {
            rep.n_secant_excess.push_back(f.edges);
        }
    }
    rep.is_generic = rep.coplanar_quadruples.empty() &&
                     rep.collinear_triples.empty() &&
                     rep.quadric_violations.empty() && rep.n_secant_excess.empty();
    return rep;
}

}  // namespace knotsec
