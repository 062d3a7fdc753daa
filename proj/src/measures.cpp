#include "knotsec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <vector>

namespace knotsec {

namespace {

constexpr double PI = 3.14159265358979323846;
const double INF = std::numeric_limits<double>::infinity();

// consecutive-duplicate-free copy of a closed polyline
std::vector<Point3> dedup_closed(const std::vector<Point3>& P) {
    std::vector<Point3> v;
    v.reserve(P.size());
    double diam = 0;
    for (size_t i = 1; i < P.size(); ++i)
        diam = std::max(diam, (P[i] - P[0]).norm());
    double tol = 1e-12 * std::max(diam, 1e-300);
    for (const auto& p : P) {
        if (v.empty() || (p - v.back()).norm() > tol) v.push_back(p);
    }
    while (v.size() > 1 && (v.front() - v.back()).norm() <= tol) v.pop_back();
    return v;
}

double circumradius(const Point3& a, const Point3& b, const Point3& c) {
    Vec3 u = b - a, v = c - a;
    double area2 = u.cross(v).norm();  // twice the triangle area
    if (area2 < 1e-300) return INF;
    return u.norm() * v.norm() * (u - v).norm() / (2.0 * area2);
}

}  // namespace

// ---------------------------------------------------------------------------
// total curvature
// ---------------------------------------------------------------------------

double total_curvature(const std::vector<Point3>& P) {
    std::vector<Point3> v = dedup_closed(P);
    int n = static_cast<int>(v.size());
    if (n < 3) throw DomainError("total_curvature needs >= 3 distinct points");
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        Vec3 e0 = (v[i] - v[(i + n - 1) % n]).normalized();
        Vec3 e1 = (v[(i + 1) % n] - v[i]).normalized();
        sum += std::atan2(e0.cross(e1).norm(), e0.dot(e1));
    }
    return sum;
}

// ---------------------------------------------------------------------------
// thickness / ropelength
// ---------------------------------------------------------------------------

double thickness(const std::vector<Point3>& P, int smoothing_window) {
    std::vector<Point3> v = dedup_closed(P);
    int n = static_cast<int>(v.size());
    if (n < 3) throw DomainError("thickness needs >= 3 distinct points");

    // triple (i < j < k) admissible iff its minimal covering window of
    // consecutive edges has >= smoothing_window edges; that window spans
    // n - (largest cyclic gap) edges
    auto span_of = [n](int i, int j, int k) {
        int g1 = j - i, g2 = k - j, g3 = n - k + i;
        return n - std::max({g1, g2, g3});
    };

    double best = INF;
    // seed with tight local triples so the pair-level prune engages early
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n, k = (i + smoothing_window) % n;
        int a = i, b = j, c = k;
        if (a == b || b == c || a == c) continue;
        best = std::min(best, circumradius(v[a], v[b], v[c]));
    }
    if (!(best < INF)) best = INF;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dij = (v[j] - v[i]).norm();
            if (dij * 0.5 >= best) continue;  // R >= longest chord / 2
            for (int k = j + 1; k < n; ++k) {
                if (span_of(i, j, k) < smoothing_window) continue;
                double dik = (v[k] - v[i]).norm();
                double djk = (v[k] - v[j]).norm();
                if (std::max(dik, djk) * 0.5 >= best) continue;
                double r = circumradius(v[i], v[j], v[k]);
                if (r < best) best = r;
            }
        }
    }
    return 2.0 * best;
}

double ropelength(const std::vector<Point3>& P, int smoothing_window) {
    std::vector<Point3> v = dedup_closed(P);
    int n = static_cast<int>(v.size());
    if (n < 3) throw DomainError("ropelength needs >= 3 distinct points");
    double len = 0, diam = 0;
    for (int i = 0; i < n; ++i) {
        len += (v[(i + 1) % n] - v[i]).norm();
        for (int j = i + 1; j < n; ++j)
            diam = std::max(diam, (v[j] - v[i]).norm());
    }
    double tau = thickness(v, smoothing_window);
    if (!(tau > 1e-9 * diam))
        throw ZeroThickness("thickness not positive at this scale");
    return len / tau;
}

// ---------------------------------------------------------------------------
// bound functions f, g, m and the quadrisecant length bounds
// ---------------------------------------------------------------------------

double bound_f(double r) {
    if (r < 1.0 - 1e-12) throw DomainError("f requires r >= 1");
    r = std::max(r, 1.0);
    return std::sqrt(r * r - 1.0) + std::asin(1.0 / r);
}

double bound_g(double d) {
    if (d < -1e-12) throw DomainError("g requires d >= 0");
    d = std::max(d, 0.0);
    if (d >= 2.0) return PI;
    return 2.0 * PI - 2.0 * std::asin(d / 2.0);
}

double min_length_outside_ball(double r, double s, double theta) {
    if (r < 1.0 - 1e-12 || s < 1.0 - 1e-12)
        throw DomainError("m requires r, s >= 1");
    if (theta < -1e-12 || theta > PI + 1e-12)
        throw DomainError("m requires theta in [0, pi]");
    r = std::max(r, 1.0);
    s = std::max(s, 1.0);
    theta = std::clamp(theta, 0.0, PI);
    double thr = std::acos(1.0 / r) + std::acos(1.0 / s);
    if (theta <= thr) {
        double c2 = r * r + s * s - 2.0 * r * s * std::cos(theta);
        return std::sqrt(std::max(c2, 0.0));
    }
    return bound_f(r) + bound_f(s) + (theta - PI);
}

double eval_bounds(DihedralClass type, double r, double s, double t) {
    if (r < 1.0 - 1e-12 || s < 1.0 - 1e-12 || t < 1.0 - 1e-12)
        throw DomainError("bound arguments must be >= 1");
    r = std::max(r, 1.0);
    s = std::max(s, 1.0);
    t = std::max(t, 1.0);
    switch (type) {
        case DihedralClass::Simple:
            return (bound_g(r) + bound_f(r)) + (bound_g(s) + s) +
                   (bound_g(t) + bound_f(t));
        case DihedralClass::Flipped:
            return (bound_g(r) + bound_f(r)) + 2.0 * bound_f(s) +
                   (bound_g(t) + bound_f(t));
        case DihedralClass::Alternating:
            return 2.0 * bound_f(r) +
                   (2.0 * bound_f(s) + bound_g(s) + s) + 2.0 * bound_f(t);
    }
    throw DomainError("unknown bound type");
}

namespace {

// minimize a 1-D function on [1, 2]: grid scan then golden-section refine
std::pair<double, double> minimize_on_unit_two(
    const std::function<double(double)>& fn, double opt_tol) {
    const int grid = 256;
    double bx = 1.0, bv = fn(1.0);
    for (int i = 1; i <= grid; ++i) {
        double x = 1.0 + i / static_cast<double>(grid);
        double y = fn(x);
        if (y < bv) {
            bv = y;
            bx = x;
        }
    }
    double lo = std::max(1.0, bx - 1.0 / grid);
    double hi = std::min(2.0, bx + 1.0 / grid);
    const double gr = 0.6180339887498949;  // 1/phi
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > opt_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(d);
        }
    }
    double x = 0.5 * (a + b), y = fn(x);
    if (bv < y) return {bx, bv};
    return {x, y};
}

}  // namespace

BoundMinimum minimize_bound(DihedralClass type, double opt_tol) {
    std::function<double(double)> end_term, mid_term;
    switch (type) {
        case DihedralClass::Simple:
            end_term = [](double x) { return bound_g(x) + bound_f(x); };
            mid_term = [](double x) { return bound_g(x) + x; };
            break;
        case DihedralClass::Flipped:
            end_term = [](double x) { return bound_g(x) + bound_f(x); };
            mid_term = [](double x) { return 2.0 * bound_f(x); };
            break;
        case DihedralClass::Alternating:
            end_term = [](double x) { return 2.0 * bound_f(x); };
            mid_term = [](double x) {
                return 2.0 * bound_f(x) + bound_g(x) + x;
            };
            break;
        default:
            throw DomainError("unknown bound type");
    }
    auto [xr, vr] = minimize_on_unit_two(end_term, opt_tol);
    auto [xs, vs] = minimize_on_unit_two(mid_term, opt_tol);
    BoundMinimum out;
    out.r = xr;
    out.s = xs;
    out.t = xr;
    out.value = 2.0 * vr + vs;
    return out;
}

// ---------------------------------------------------------------------------
// distortion
// ---------------------------------------------------------------------------

namespace {

struct DistCell {
    int ei, ej;              // edge indices, ei != ej
    double a1, b1, a2, b2;   // fractional sub-intervals of each edge
    double ub;               // upper bound for the ratio over the cell
};

struct CellCmp {
    bool operator()(const DistCell& x, const DistCell& y) const {
        return x.ub < y.ub;
    }
};

}  // namespace

DistortionInterval distortion(const std::vector<Point3>& P, double tol,
                              long cell_budget) {
    std::vector<Point3> v = dedup_closed(P);
    int n = static_cast<int>(v.size());
    if (n < 3) throw DomainError("distortion needs >= 3 distinct points");

    std::vector<double> elen(n), cum(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        elen[i] = (v[(i + 1) % n] - v[i]).norm();
        cum[i + 1] = cum[i] + elen[i];
    }
    const double L = cum[n];

    auto point_at = [&](int e, double f) {
        return v[e] + (v[(e + 1) % n] - v[e]) * f;
    };
    auto arc_at = [&](int e, double f) { return cum[e] + f * elen[e]; };
    auto arc_dist = [&](double s, double t) {
        double u = std::fabs(s - t);
        return std::min(u, L - u);
    };

    double lo = 1.0;
    // exact corner suprema: points x = y on the two edges at a vertex give
    // ratio (x+y)/chord = 1/sin(psi/2), attained for every small x = y
    for (int i = 0; i < n; ++i) {
        Vec3 u = (v[(i + n - 1) % n] - v[i]).normalized();
        Vec3 w = (v[(i + 1) % n] - v[i]).normalized();
        double psi = std::atan2(u.cross(w).norm(), u.dot(w));
        double sp = std::sin(psi / 2.0);
        if (sp > 1e-12) lo = std::max(lo, 1.0 / sp);
    }
    // vertex-pair samples
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = (v[j] - v[i]).norm();
            if (d > 1e-300) lo = std::max(lo, arc_dist(cum[i], cum[j]) / d);
        }

    auto cell_ub = [&](const DistCell& c) {
        Segment s1{point_at(c.ei, c.a1), point_at(c.ei, c.b1)};
        Segment s2{point_at(c.ej, c.a2), point_at(c.ej, c.b2)};
        double mind = segment_segment_distance(s1, s2);
        if (!(mind > 0)) return INF;
        double s1a = arc_at(c.ei, c.a1), s1b = arc_at(c.ei, c.b1);
        double s2a = arc_at(c.ej, c.a2), s2b = arc_at(c.ej, c.b2);
        double umin = s2a - s1b, umax = s2b - s1a;
        // max over u in [umin, umax] of min(u mod L, L - u mod L)
        double u0 = std::fmod(umin, L);
        if (u0 < 0) u0 += L;
        double w = umax - umin;
        double maxg;
        auto tent = [&](double x) {  // x in [0, 2L)
            double m = std::fmod(x, L);
            return std::min(m, L - m);
        };
        // tent peaks at L/2 (mod L); check whether the interval covers one
        double k = std::ceil((u0 - L / 2) / L);
        double peak = L / 2 + k * L;  // smallest peak >= u0
        if (peak <= u0 + w)
            maxg = L / 2;
        else
            maxg = std::max(tent(u0), tent(u0 + w));
        return maxg / mind;
    };
    // The reported lo is kept to vertex-pair ratios plus the exact corner
    // suprema: both are attained values, and keeping lo at the coarse vertex
    // scale lets the reported interval still contain the limiting smooth-curve
    // value when the polygon only approximates it from one side. A separate
    // attained maximum `att` (midpoint samples) drives branch-and-bound
    // termination so hi still converges to within tol of the true supremum.
    double att = lo;

    std::priority_queue<DistCell, std::vector<DistCell>, CellCmp> heap;
    auto push_cell = [&](int ei, int ej, double a1, double b1, double a2,
                         double b2) {
        DistCell c{ei, ej, a1, b1, a2, b2, 0.0};
        c.ub = cell_ub(c);
        double f1 = 0.5 * (a1 + b1), f2 = 0.5 * (a2 + b2);
        Point3 p = point_at(ei, f1), q = point_at(ej, f2);
        double d = (q - p).norm();
        if (d > 1e-300)
            att = std::max(att,
                           arc_dist(arc_at(ei, f1), arc_at(ej, f2)) / d);
        if (c.ub > att) heap.push(c);  // cells below att cannot raise hi
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool adj_fwd = (j == i + 1);           // share vertex v[j]
            bool adj_wrap = (i == 0 && j == n - 1);  // share vertex v[0]
            if (!adj_fwd && !adj_wrap) {
                push_cell(i, j, 0, 1, 0, 1);
                continue;
            }
            // adjacent pair: the corner rectangle is covered by the exact
            // 1/sin(psi/2) supremum already in lo; cover the rest with two
            // cells that stay off the shared vertex
            double wi = std::min(0.5, (0.25 * L) / std::max(elen[i], 1e-300));
            double wj = std::min(0.5, (0.25 * L) / std::max(elen[j], 1e-300));
            if (adj_fwd) {
                // shared vertex is end of edge i (fraction 1), start of j (0)
                push_cell(i, j, 0, 1 - wi, 0, 1);
                push_cell(i, j, 1 - wi, 1, wj, 1);
            } else {
                // shared vertex is start of edge i (0) and end of edge j (1)
                push_cell(i, j, wi, 1, 0, 1);
                push_cell(i, j, 0, wi, 0, 1 - wj);
            }
        }
    }

    long processed = 0;
    while (!heap.empty() && heap.top().ub - att > tol &&
           processed < cell_budget) {
        DistCell c = heap.top();
        heap.pop();
        ++processed;
        double l1 = (c.b1 - c.a1) * elen[c.ei];
        double l2 = (c.b2 - c.a2) * elen[c.ej];
        if (l1 >= l2) {
            double m = 0.5 * (c.a1 + c.b1);
            push_cell(c.ei, c.ej, c.a1, m, c.a2, c.b2);
            push_cell(c.ei, c.ej, m, c.b1, c.a2, c.b2);
        } else {
            double m = 0.5 * (c.a2 + c.b2);
            push_cell(c.ei, c.ej, c.a1, c.b1, c.a2, m);
            push_cell(c.ei, c.ej, c.a1, c.b1, m, c.b2);
        }
    }
    double hi = std::max(att, heap.empty() ? lo : heap.top().ub);
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// second hull
// ---------------------------------------------------------------------------

namespace {

// transversal crossing count of the closed polygon with the plane through p
// of normal u; -1 when some vertex sits too close to the plane (degenerate)
int plane_crossings(const std::vector<Point3>& V, const Point3& p,
                    const Vec3& u, double eps) {
    int n = static_cast<int>(V.size());
    int prev = 0, count = 0;
    for (int i = 0; i <= n; ++i) {  // i == n re-tests V[0] to close the loop
        double d = (V[i % n] - p).dot(u);
        if (std::fabs(d) < eps) return -1;
        int s = d > 0 ? 1 : -1;
        if (i > 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

Vec3 fibonacci_dir(int k, int n) {
    double ga = PI * (3.0 - std::sqrt(5.0));
    double z = 1.0 - 2.0 * (k + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = ga * k;
    return Vec3{r * std::cos(th), r * std::sin(th), z};
}

}  // namespace

SecondHullResult second_hull_membership(const PolygonalKnot& K,
                                        const Point3& p, int order,
                                        int n_planes,
                                        int exact_max_vertices) {
    const auto& V = K.vertices();
    int n = K.size();
    double diam = std::max(K.diameter(), 1e-300);
    for (int i = 0; i < n; ++i) {
        Segment e{V[i], V[(i + 1) % n]};
        if (segment_segment_distance(Segment{p, p}, e) < 1e-9 * diam)
            throw PointOnKnot("probe point lies on the knot");
    }
    double eps = 1e-12 * diam;
    std::mt19937_64 rng(0xc0ffee12345ull);
    std::uniform_real_distribution<double> U(-1.0, 1.0);

    auto robust_count = [&](Vec3 u) -> std::pair<int, Vec3> {
        for (int t = 0; t < 16; ++t) {
            int c = plane_crossings(V, p, u, eps);
            if (c >= 0) return {c, u};
            u = (u + Vec3{U(rng), U(rng), U(rng)} * 1e-6).normalized();
        }
        return {-1, u};
    };

    SecondHullResult res;
    res.min_crossings = std::numeric_limits<int>::max();
    int checked = 0;

    if (n <= exact_max_vertices) {
        // arrangement of great circles {u : (v_i - p) . u = 0}: the crossing
        // count is constant on each cell; every cell somewhere touches an
        // intersection of two circles, so the four corner samples around
        // every pair intersection cover all cells
        std::vector<Vec3> w(n);
        for (int i = 0; i < n; ++i) w[i] = (V[i] - p).normalized();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                Vec3 c = w[i].cross(w[j]);
                if (c.norm() < 1e-9) continue;
                c = c.normalized();
                for (int s1 = -1; s1 <= 1; s1 += 2) {
                    for (int s2 = -1; s2 <= 1; s2 += 2) {
                        Vec3 u = (c + (w[i] * s1 + w[j] * s2) * 1e-4)
                                     .normalized();
                        auto [cnt, uu] = robust_count(u);
                        if (cnt < 0) continue;
                        ++checked;
                        if (cnt < res.min_crossings) {
                            res.min_crossings = cnt;
                            res.witness_normal = uu;
                        }
                    }
                }
            }
        }
        res.planes_checked = checked;
        res.kind = res.min_crossings >= 2 * order ? SecondHullKind::ExactMember
                                                  : SecondHullKind::NotMember;
        return res;
    }

    for (int k = 0; k < n_planes; ++k) {
        auto [cnt, uu] = robust_count(fibonacci_dir(k, n_planes));
        if (cnt < 0) continue;
        ++checked;
        if (cnt < res.min_crossings) {
            res.min_crossings = cnt;
            res.witness_normal = uu;
        }
        if (cnt < 2 * order) break;  // witness found
    }
    res.planes_checked = checked;
    res.kind = res.min_crossings >= 2 * order ? SecondHullKind::MemberSampled
                                              : SecondHullKind::NotMember;
    return res;
}

// ---------------------------------------------------------------------------
// bridges
// ---------------------------------------------------------------------------

int bridge_count(const PolygonalKnot& K, const Vec3& v) {
    const auto& V = K.vertices();
    int n = K.size();
    std::vector<double> h(n);
    double hmin = INF, hmax = -INF;
    for (int i = 0; i < n; ++i) {
        h[i] = V[i].dot(v);
        hmin = std::min(hmin, h[i]);
        hmax = std::max(hmax, h[i]);
    }
    double spread = std::max(hmax - hmin, 1e-300);
    for (int i = 0; i < n; ++i)
        if (std::fabs(h[i] - h[(i + 1) % n]) < 1e-12 * spread)
            throw DegenerateDirection("tied consecutive heights");
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (h[i] > h[(i + n - 1) % n] && h[i] > h[(i + 1) % n]) ++count;
    return count;
}

int superbridge_estimate(const PolygonalKnot& K, int n_dirs, uint64_t seed) {
    std::mt19937_64 rng(seed * 1000003ull + 17ull);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int best = 0;
    for (int k = 0; k < n_dirs; ++k) {
        Vec3 u = fibonacci_dir(k, n_dirs);
        for (int t = 0; t < 8; ++t) {
            try {
                best = std::max(best, bridge_count(K, u));
                break;
            } catch (const DegenerateDirection&) {
                u = (u + Vec3{U(rng), U(rng), U(rng)} * 1e-6).normalized();
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// supercrossing floor
// ---------------------------------------------------------------------------

namespace {

// transversal crossing count of the knot projected along u; -1 if the
// projection is not generic enough to count reliably
int projection_crossings(const std::vector<Point3>& V, const Vec3& u) {
    int n = static_cast<int>(V.size());
    Vec3 ref = std::fabs(u.x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = ref.cross(u).normalized(), e2 = u.cross(e1);
    std::vector<double> x(n), y(n);
    double scale = 0;
    for (int i = 0; i < n; ++i) {
        x[i] = V[i].dot(e1);
        y[i] = V[i].dot(e2);
        scale = std::max({scale, std::fabs(x[i]), std::fabs(y[i])});
    }
    scale = std::max(scale, 1e-300);
    int count = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            double ax = x[(i + 1) % n] - x[i], ay = y[(i + 1) % n] - y[i];
            double bx = x[(j + 1) % n] - x[j], by = y[(j + 1) % n] - y[j];
            double den = ax * by - ay * bx;
            double rx = x[j] - x[i], ry = y[j] - y[i];
            if (std::fabs(den) < 1e-12 * scale * scale) {
                // near-parallel: ambiguous only if the segments come close
                Segment s1{Point3{x[i], y[i], 0},
                           Point3{x[(i + 1) % n], y[(i + 1) % n], 0}};
                Segment s2{Point3{x[j], y[j], 0},
                           Point3{x[(j + 1) % n], y[(j + 1) % n], 0}};
                if (segment_segment_distance(s1, s2) < 1e-9 * scale)
                    return -1;
                continue;
            }
            double s = (rx * by - ry * bx) / den;
            double t = (rx * ay - ry * ax) / den;
            double ep = 1e-9;
            if (s <= -ep || s >= 1 + ep || t <= -ep || t >= 1 + ep) continue;
            if (s < ep || s > 1 - ep || t < ep || t > 1 - ep)
                return -1;  // endpoint graze: not generic
            ++count;
        }
    }
    return count;
}

}  // namespace

SupercrossingWitness supercrossing_floor(const PolygonalKnot& K,
                                         const ToleranceConfig& tol,
                                         const EnumerationOptions& opts) {
    auto quads = enumerate_quadrisecants(K, tol, opts);
    if (quads.empty())
        throw NoQuadrisecants("knot has no quadrisecant to perturb along");
    const auto& V = K.vertices();
    for (const auto& q : quads) {
        Vec3 d = q.line.direction.normalized();
        Vec3 ref = std::fabs(d.x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 e1 = ref.cross(d).normalized(), e2 = d.cross(e1);
        for (double eps : {1e-3, 3e-3, 1e-2, 3e-2, 0.1}) {
            for (int az = 0; az < 8; ++az) {
                double phi = 2.0 * PI * az / 8.0;
                Vec3 u = (d + (e1 * std::cos(phi) + e2 * std::sin(phi)) * eps)
                             .normalized();
                int c = projection_crossings(V, u);
                if (c >= 6) return {6, u, c};
            }
        }
    }
    throw DegenerateDirection(
        "no perturbed projection exhibited six crossings");
}

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

MeasureReport measure_report(const PolygonalKnot& K, double distortion_tol,
                             int bridge_dirs, uint64_t seed) {
    MeasureReport rep;
    const auto& V = K.vertices();
    rep.total_curvature = total_curvature(V);
    rep.thickness = thickness(V);
    double diam = std::max(K.diameter(), 1e-300);
    rep.thickness_degenerate =
        !(rep.thickness > 1e-6 * diam) || !std::isfinite(rep.thickness);
    rep.ropelength =
        rep.thickness_degenerate ? 0.0 : K.total_length() / rep.thickness;
    rep.distortion = distortion(V, distortion_tol);
    std::mt19937_64 rng(seed * 7919ull + 3ull);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < bridge_dirs; ++k) {
        Vec3 u = fibonacci_dir(k, bridge_dirs);
        for (int t = 0; t < 8; ++t) {
            try {
                rep.bridge_counts.push_back(bridge_count(K, u));
                break;
            } catch (const DegenerateDirection&) {
                u = (u + Vec3{U(rng), U(rng), U(rng)} * 1e-6).normalized();
            }
        }
    }
    rep.superbridge_estimate = 0;
    for (int b : rep.bridge_counts)
        rep.superbridge_estimate = std::max(rep.superbridge_estimate, b);
    return rep;
}

}  // namespace knotsec
