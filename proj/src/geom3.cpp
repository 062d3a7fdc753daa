#include "knotsec/geom3.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>

namespace knotsec {

// ---------------------------------------------------------------------------
// lines
// ---------------------------------------------------------------------------
OrientedLine make_line(const Point3& p, const Vec3& d) {
    Dir3 u = d.normalized();
    Point3 base = p - u * p.dot(u);  // closest point to origin
    return {base, u};
}

OrientedLine canonical_line(const Point3& p, const Vec3& d) {
    OrientedLine l = make_line(p, d);
    // orient direction lexicographically positive
    const double* c[3] = {&l.direction.x, &l.direction.y, &l.direction.z};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(*c[i]) > 1e-12) {
            if (*c[i] < 0) l.direction = -l.direction;
            break;
        }
    }
    return l;
}

bool lines_equal(const OrientedLine& a, const OrientedLine& b, double tol_line) {
    OrientedLine ca = canonical_line(a.base, a.direction);
    OrientedLine cb = canonical_line(b.base, b.direction);
    return (ca.base - cb.base).norm() <= tol_line &&
           (ca.direction - cb.direction).norm() <= tol_line;
}

std::optional<Plane> plane_through(const Point3& a, const Point3& b,
                                   const Point3& c, double tol_area) {
    Vec3 n = (b - a).cross(c - a);
    double nn = n.norm();
    double scale = std::max({(b - a).norm(), (c - a).norm(), 1e-300});
    if (nn <= tol_area * scale * scale) return std::nullopt;
    Dir3 u = n / nn;
    return Plane{u, u.dot(a)};
}

double line_line_distance(const OrientedLine& a, const OrientedLine& b) {
    Vec3 n = a.direction.cross(b.direction);
    double nn = n.norm();
    Vec3 w = b.base - a.base;
    if (nn < 1e-14) {  // parallel: distance of b.base to line a
        return (w - a.direction * w.dot(a.direction)).norm();
    }
    return std::abs(w.dot(n)) / nn;
}

std::optional<double> param_on_line(const OrientedLine& L, const Point3& a,
                                    const Vec3& e) {
    // point on (a,e): a + s e lying closest to line L along the common normal;
    // when the lines actually meet, this is the intersection parameter.
    Vec3 c = e.cross(L.direction);
    double n2 = c.norm2();
    if (n2 < 1e-20) return std::nullopt;
    double s = (L.base - a).cross(L.direction).dot(c) / n2;
    return s;
}

std::optional<double> nearest_param_on_support(const OrientedLine& L,
                                               const Point3& a, const Vec3& e) {
    return param_on_line(L, a, e);
}

double point_segment_distance(const Point3& p, const Segment& s) {
    Vec3 d = s.dir();
    double dd = d.norm2();
    double t = dd > 0 ? std::clamp((p - s.p0).dot(d) / dd, 0.0, 1.0) : 0.0;
    return (p - s.at(t)).norm();
}

double segment_segment_distance(const Segment& s1, const Segment& s2) {
    // standard clamped closest-approach
    Vec3 u = s1.dir(), v = s2.dir(), w = s1.p0 - s2.p0;
    double a = u.norm2(), b = u.dot(v), c = v.norm2();
    double d = u.dot(w), e = v.dot(w);
    double D = a * c - b * b;
    double sc, tc;
    if (D < 1e-14 * a * c + 1e-300) {
        sc = 0.0;
        tc = (c > 0) ? e / c : 0.0;
    } else {
        sc = (b * e - c * d) / D;
        tc = (a * e - b * d) / D;
    }
    sc = std::clamp(sc, 0.0, 1.0);
    tc = (c > 0) ? std::clamp((b * sc + e) / c, 0.0, 1.0) : 0.0;
    sc = (a > 0) ? std::clamp((b * tc - d) / a, 0.0, 1.0) : 0.0;
    return (s1.at(sc) - s2.at(tc)).norm();
}

bool coplanar(const Point3& a, const Point3& b, const Point3& c,
              const Point3& d, double rel_tol) {
    // Height-based test: the quadruple is coplanar when some vertex lies
    // within rel_tol * scale of the plane of the other three. Using the
    // raw tetrahedron volume against scale^3 would trap nearly-collinear
    // quadruples (volume shrinks quadratically with the transverse spread),
    // making them impossible to escape by small perturbation.
    Vec3 u = b - a, v = c - a, w = d - a;
    double vol = std::abs(u.cross(v).dot(w));
    double scale = std::max({u.norm(), v.norm(), w.norm(), 1e-300});
    double area_max = std::max({u.cross(v).norm(), u.cross(w).norm(),
                                v.cross(w).norm(),
                                (c - b).cross(d - b).norm(), 1e-300});
    return vol <= rel_tol * scale * area_max;
}

bool collinear(const Point3& a, const Point3& b, const Point3& c,
               double rel_tol) {
    Vec3 u = b - a, v = c - a;
    double area = u.cross(v).norm();
    double scale = std::max({u.norm(), v.norm(), 1e-300});
    return area <= rel_tol * scale * scale;
}

// ---------------------------------------------------------------------------
// quadric through three skew lines
// ---------------------------------------------------------------------------
double Quadric::eval(const Point3& p) const {
    double h[4] = {p.x, p.y, p.z, 1.0};
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += h[i] * Q[i][j] * h[j];
    return s;
}

Vec3 Quadric::gradient3(const Point3& p) const {
    double h[4] = {p.x, p.y, p.z, 1.0};
    double g[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) g[i] += 2.0 * Q[i][j] * h[j];
    return {g[0], g[1], g[2]};
}

namespace {

// symmetric-form coefficient layout used by the 9x10 fit:
// q = (Qxx, Qyy, Qzz, Qxy, Qxz, Qyz, Qxw, Qyw, Qzw, Qww)
void row_for_point(Eigen::Matrix<double, 1, 10>& row, const Point3& p) {
    double x = p.x, y = p.y, z = p.z;
    row << x * x, y * y, z * z, 2 * x * y, 2 * x * z, 2 * y * z, 2 * x, 2 * y,
        2 * z, 1.0;
}

Quadric quadric_from_coeffs(const Eigen::Matrix<double, 10, 1>& q) {
    Quadric out;
    auto& Q = out.Q;
    Q[0][0] = q[0]; Q[1][1] = q[1]; Q[2][2] = q[2];
    Q[0][1] = Q[1][0] = q[3];
    Q[0][2] = Q[2][0] = q[4];
    Q[1][2] = Q[2][1] = q[5];
    Q[0][3] = Q[3][0] = q[6];
    Q[1][3] = Q[3][1] = q[7];
    Q[2][3] = Q[3][2] = q[8];
    Q[3][3] = q[9];
    return out;
}

}  // namespace

Quadric quadric_through_lines(const OrientedLine& l1, const OrientedLine& l2,
                              const OrientedLine& l3,
                              const ToleranceConfig& tol) {
    const OrientedLine ls[3] = {l1, l2, l3};
    // preconditions: pairwise skew, no near-parallel pair
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if (ls[i].direction.cross(ls[j].direction).norm() < tol.tol_dir)
                throw DegenerateConfiguration("near-parallel line pair");
            if (line_line_distance(ls[i], ls[j]) < tol.tol_skew())
                throw DegenerateConfiguration("line pair not skew");
        }

    // work in a translated/scaled frame for conditioning
    Vec3 centroid{0, 0, 0};
    for (const auto& l : ls) centroid += l.base;
    centroid = centroid / 3.0;
    double scale = 0;
    for (const auto& l : ls)
        scale = std::max(scale, (l.base - centroid).norm() + 1.0);

    Eigen::Matrix<double, 9, 10> A;
    const double sample_t[3] = {-0.7, 0.13, 0.91};  // arbitrary distinct params
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            Point3 p = (ls[i].at(sample_t[k] * scale) - centroid) / scale;
            Eigen::Matrix<double, 1, 10> row;
            row_for_point(row, p);
            A.row(i * 3 + k) = row;
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 9, 10>> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double condition = sv[0] / std::max(sv[8], 1e-300);
    if (condition > tol.cond_max)
        throw IllConditioned("quadric fit condition " + std::to_string(condition));
    Eigen::Matrix<double, 10, 1> q = svd.matrixV().col(9);

    Quadric local = quadric_from_coeffs(q);

    // transform back: x_local = (x - centroid)/scale = T x (projectively)
    // Q_world = T^T Q_local T with T = [[I/s, -c/s],[0,1]]
    double s = scale;
    double T[4][4] = {{1 / s, 0, 0, -centroid.x / s},
                      {0, 1 / s, 0, -centroid.y / s},
                      {0, 0, 1 / s, -centroid.z / s},
                      {0, 0, 0, 1}};
    Quadric out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double v = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    v += T[a][i] * local.Q[a][b] * T[b][j];
            out.Q[i][j] = v;
        }

    // Frobenius normalize
    double fro = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) fro += out.Q[i][j] * out.Q[i][j];
    fro = std::sqrt(fro);
    if (fro < 1e-300) throw IllConditioned("vanishing quadric");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.Q[i][j] /= fro;

    out.condition = condition;

    // kind: hyperbolic paraboloid iff the three directions are coplanar
    double dirvol = std::abs(
        ls[0].direction.cross(ls[1].direction).dot(ls[2].direction));
    out.kind = (dirvol <= 10 * tol.tol_coplanar)
                   ? QuadricKind::HyperbolicParaboloid
                   : QuadricKind::HyperboloidOneSheet;

    // verify: generators vanish on the quadric
    for (const auto& l : ls)
        for (double t : {-0.37 * scale, 0.41 * scale, 1.07 * scale})
            if (std::abs(out.eval(l.at(t))) >
                tol.tol_quadric * (1.0 + scale * scale))
                throw IllConditioned("generator residual too large");
    return out;
}

// ---------------------------------------------------------------------------
// ruling through a point
// ---------------------------------------------------------------------------
OrientedLine ruling_through_point(const Quadric& Q, const Point3& p,
                                  const std::array<OrientedLine, 3>& generators,
                                  const ToleranceConfig& tol) {
    double scale2 = 1.0 + p.norm2();
    if (std::abs(Q.eval(p)) > tol.tol_on_surface * scale2)
        throw NotOnSurface("point not on quadric");

    // tangent plane basis at p
    Vec3 g = Q.gradient3(p);
    double gn = g.norm();
    if (gn < 1e-12) throw DegenerateTangency("singular point (vanishing gradient)");
    Dir3 n = g / gn;
    Vec3 any = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Dir3 u = n.cross(any).normalized();
    Dir3 v = n.cross(u);

    // restriction of the form to p + alpha u + beta v: A a^2 + B ab + C b^2
    // (linear terms vanish: direction w is tangent iff w^T grad = 0 holds for
    // u, v by construction; constant vanishes since p on Q)
    auto qform = [&](const Vec3& a, const Vec3& b) {
        // bilinear form a^T Q_33 b restricted to spatial part
        double ha[4] = {a.x, a.y, a.z, 0.0};
        double hb[4] = {b.x, b.y, b.z, 0.0};
        double s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += ha[i] * Q.Q[i][j] * hb[j];
        return s;
    };
    double A = qform(u, u), B = 2 * qform(u, v), C = qform(v, v);
    double mag = std::max({std::abs(A), std::abs(B), std::abs(C), 1e-300});
    double disc = B * B - 4 * A * C;
    if (disc < tol.tol_quadric * mag * mag)
        throw DegenerateTangency("tangent conic does not split");
    double sq = std::sqrt(std::max(disc, 0.0));

    // two ruling directions
    std::vector<Dir3> dirs;
    if (std::abs(A) >= std::abs(C)) {
        for (double sgn : {+1.0, -1.0}) {
            double alpha = (-B + sgn * sq) / (2 * A);
            dirs.push_back((u * alpha + v).normalized());
        }
    } else {
        for (double sgn : {+1.0, -1.0}) {
            double beta = (-B + sgn * sq) / (2 * C);
            dirs.push_back((u + v * beta).normalized());
        }
    }

    // pick the direction whose line meets all three generators
    double best_err = 1e300;
    OrientedLine best{};
    for (const Dir3& d : dirs) {
        OrientedLine cand = make_line(p, d);
        double err = 0;
        for (const auto& gline : generators)
            err = std::max(err, line_line_distance(cand, gline));
        if (err < best_err) {
            best_err = err;
            best = cand;
        }
    }
    double scale = 1.0 + std::sqrt(scale2);
    if (best_err > 1e3 * tol.tol_line * scale)
        throw DegenerateTangency("no ruling direction meets all generators");
    return best;
}

// ---------------------------------------------------------------------------
// line-quadric intersection
// ---------------------------------------------------------------------------
LineQuadricResult line_quadric_intersection(const Quadric& Q,
                                            const OrientedLine& l,
                                            const ToleranceConfig& tol) {
    // (b + t d)^T Q (b + t d) = l2 t^2 + l1 t + l0
    double hb[4] = {l.base.x, l.base.y, l.base.z, 1.0};
    double hd[4] = {l.direction.x, l.direction.y, l.direction.z, 0.0};
    double l2 = 0, l1 = 0, l0 = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            l2 += hd[i] * Q.Q[i][j] * hd[j];
            l1 += 2.0 * hb[i] * Q.Q[i][j] * hd[j];
            l0 += hb[i] * Q.Q[i][j] * hb[j];
        }
    LineQuadricResult res;
    // Containment decision via a first-order distance model: near the surface
    // eval(p) ~ dist(p, surface) * |grad eval(p)|, so the line is declared
    // contained only if three well-separated probe points all lie within
    // tol-distance of the surface. (A plain coefficient threshold misfires on
    // near-degenerate quadrics, e.g. almost-doubled planes, whose eval and
    // gradient are both uniformly small.)
    double D = std::max(tol.scene_diameter, 1.0);
    bool cont = true;
    for (double tp : {-D, 0.0, D}) {
        double lv = (l2 * tp + l1) * tp + l0;
        Point3 p = l.at(tp);
        double g = Q.gradient3(p).norm();
        double floor_abs = 1e-13 * (1.0 + p.norm2());
        if (std::abs(lv) > std::max(tol.tol_contained * D * g, floor_abs)) {
            cont = false;
            break;
        }
    }
    if (cont) {
        res.contained = true;
        return res;
    }
    // near-linear resolution: compare |leading| against |linear|
    if (std::abs(l2) < 1e-10 * std::max(std::abs(l1), 1e-300)) {
        if (std::abs(l1) < 1e-300) return res;  // constant nonzero: empty
        res.count = 1;
        res.t[0] = -l0 / l1;
        return res;
    }
    double disc = l1 * l1 - 4 * l2 * l0;
    if (disc < 0) return res;
    double sq = std::sqrt(disc);
    // stable quadratic formula
    double q = -0.5 * (l1 + (l1 >= 0 ? sq : -sq));
    double t0 = q / l2;
    double t1 = (std::abs(q) > 1e-300) ? l0 / q : t0;
    if (disc == 0 || std::abs(t0 - t1) < 1e-14 * (1 + std::abs(t0))) {
        res.count = 1;
        res.t[0] = t0;
    } else {
        res.count = 2;
        res.t[0] = std::min(t0, t1);
        res.t[1] = std::max(t0, t1);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Plucker route
// ---------------------------------------------------------------------------
PluckerLine to_plucker(const OrientedLine& l) {
    return {l.direction, l.base.cross(l.direction)};
}

double plucker_side(const PluckerLine& a, const PluckerLine& b) {
    return a.d.dot(b.m) + b.d.dot(a.m);
}

TransversalResult transversals_of_four_lines_plucker(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol) {
    TransversalResult out;
    // 4 linear conditions side(L_i, X) = 0 on X = (d, m) in R^6
    Eigen::Matrix<double, 4, 6> A;
    for (int i = 0; i < 4; ++i) {
        PluckerLine L = to_plucker(ls[i]);
        A(i, 0) = L.m.x; A(i, 1) = L.m.y; A(i, 2) = L.m.z;
        A(i, 3) = L.d.x; A(i, 4) = L.d.y; A(i, 5) = L.d.z;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 6>> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < 4; ++i)
        if (sv[i] > 1e-10 * sv[0]) ++rank;
    if (rank < 4) {
        out.infinite = true;  // >=3-dim solution space cuts the Plucker quadric
        return out;           // in infinitely many lines
    }
    Eigen::Matrix<double, 6, 1> u = svd.matrixV().col(4);
    Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(5);
    auto qp = [](const Eigen::Matrix<double, 6, 1>& X,
                 const Eigen::Matrix<double, 6, 1>& Y) {
        // half the polarized Plucker form d . m
        return 0.5 * (X[0] * Y[3] + X[1] * Y[4] + X[2] * Y[5] + Y[0] * X[3] +
                      Y[1] * X[4] + Y[2] * X[5]);
    };
    double a = qp(u, u), b = 2 * qp(u, v), c = qp(v, v);
    double mag = std::max({std::abs(a), std::abs(b), std::abs(c)});
    std::vector<std::pair<double, double>> roots;
    if (mag < 1e-26) {
        out.infinite = true;  // whole pencil inside the Plucker quadric
        return out;
    }
    if (std::abs(a) >= std::abs(c)) {
        double disc = b * b - 4 * a * c;
        if (std::abs(a) < 1e-13 * mag) {
            if (std::abs(b) > 1e-13 * mag) roots.push_back({-c / b, 1.0});
        } else if (disc >= -1e-12 * mag * mag) {
            double sq = std::sqrt(std::max(disc, 0.0));
            roots.push_back({(-b + sq) / (2 * a), 1.0});
            roots.push_back({(-b - sq) / (2 * a), 1.0});
        }
    } else {
        double disc = b * b - 4 * a * c;
        if (disc >= -1e-12 * mag * mag) {
            double sq = std::sqrt(std::max(disc, 0.0));
            roots.push_back({1.0, (-b + sq) / (2 * c)});
            roots.push_back({1.0, (-b - sq) / (2 * c)});
        }
    }
    for (auto [lam, mu] : roots) {
        Eigen::Matrix<double, 6, 1> X = lam * u + mu * v;
        Vec3 d{X[0], X[1], X[2]}, m{X[3], X[4], X[5]};
        double dn2 = d.norm2();
        if (dn2 < 1e-18 * (m.norm2() + 1e-300)) continue;  // line at infinity
        Point3 p0 = d.cross(m) / dn2;
        OrientedLine cand = canonical_line(p0, d);
        bool dup = false;
        for (const auto& got : out.lines)
            if (lines_equal(cand, got, tol.tol_line)) dup = true;
        if (!dup) out.lines.push_back(cand);
    }
    return out;
}

TransversalResult transversals_of_four_lines_quadric(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol) {
    TransversalResult out;
    Quadric Q = quadric_through_lines(ls[0], ls[1], ls[2], tol);
    LineQuadricResult hit = line_quadric_intersection(Q, ls[3], tol);
    if (hit.contained) {
        out.infinite = true;
        return out;
    }
    std::array<OrientedLine, 3> gens{ls[0], ls[1], ls[2]};
    for (int k = 0; k < hit.count; ++k) {
        Point3 p = ls[3].at(hit.t[k]);
        try {
            OrientedLine r = ruling_through_point(Q, p, gens, tol);
            // transversal to l4 as well by construction (passes through p)
            OrientedLine cand = canonical_line(r.base, r.direction);
            bool dup = false;
            for (const auto& got : out.lines)
                if (lines_equal(cand, got, tol.tol_line)) dup = true;
            if (!dup) out.lines.push_back(cand);
        } catch (const DegenerateTangency&) {
            // tangential intersection: no transversal through this point
        }
    }
    return out;
}

TransversalResult transversals_of_four_lines(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol) {
    return transversals_of_four_lines_quadric(ls, tol);
}

// ---------------------------------------------------------------------------
// AABB
// ---------------------------------------------------------------------------
void Aabb::expand(const Point3& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
}
void Aabb::expand(const Aabb& o) {
    expand(o.lo);
    expand(o.hi);
}

bool Aabb::intersects_segment(const Segment& s) const {
    // slab test for the parametric segment
    double t0 = 0.0, t1 = 1.0;
    Vec3 d = s.dir();
    const double pv[3] = {s.p0.x, s.p0.y, s.p0.z};
    const double dv[3] = {d.x, d.y, d.z};
    const double lv[3] = {lo.x, lo.y, lo.z};
    const double hv[3] = {hi.x, hi.y, hi.z};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(dv[i]) < 1e-300) {
            if (pv[i] < lv[i] || pv[i] > hv[i]) return false;
            continue;
        }
        double ta = (lv[i] - pv[i]) / dv[i];
        double tb = (hv[i] - pv[i]) / dv[i];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace knotsec
