#pragma once
// Robust 3-D primitives: points, oriented lines, segments, planes, quadrics,
// rulings of doubly-ruled surfaces, and transversal solvers (two independent
// routes: quadric rulings and Plucker coordinates).

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace knotsec {

// ---------------------------------------------------------------------------
// Tolerance policy: every geometric predicate takes this explicitly.
// ---------------------------------------------------------------------------
struct ToleranceConfig {
    double scene_diameter = 1.0;   // set from input; scales relative tolerances

    double tol_skew_rel   = 1e-9;  // pairwise line distance, relative to diameter
    double tol_quadric    = 1e-9;  // residual of generators on the quadric
    double tol_line       = 1e-7;  // canonical-line equality / dedup
    double cond_max       = 1e12;  // 9x10 system condition ceiling
    double tol_dir        = 1e-9;  // direction parallelism
    double tol_contained  = 1e-9;  // line-in-quadric branch: probe points must
                                   // be within this fraction of the diameter
                                   // from the surface (gradient distance model)
    double tol_coplanar   = 1e-9;  // relative plane-distance for coplanarity
    double tol_collinear  = 1e-9;  // relative area for collinearity
    double tol_embed_rel  = 1e-9;  // embeddedness, relative to diameter
    double tol_len        = 1e-9;  // minimal segment length / arclength merge
    double tol_unit       = 1e-9;  // unit-vector checks
    double tol_on_surface = 1e-7;  // |p^T Q p| for ruling_through_point
    double family_step    = 1.0 / 64.0;  // trisecant family sweep resolution
    double opt_tol        = 1e-6;  // 1-D minimizer tolerance

    double tol_skew() const { return tol_skew_rel * scene_diameter; }
    double tol_embed() const { return tol_embed_rel * scene_diameter; }
};

// ---------------------------------------------------------------------------
// Vectors and points
// ---------------------------------------------------------------------------
struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0 ? *this / n : Vec3{0, 0, 0};
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
using Point3 = Vec3;
using Dir3 = Vec3;  // invariant: unit length within tol_unit

// ---------------------------------------------------------------------------
// Lines, segments, planes
// ---------------------------------------------------------------------------
// Oriented line in canonical form: base = point closest to origin,
// direction unit. Equality = canonical forms agree within tol_line.
struct OrientedLine {
    Point3 base;
    Dir3 direction;

    Point3 at(double t) const { return base + direction * t; }
};

// Build a line through p with direction d (d need not be unit); canonicalize.
OrientedLine make_line(const Point3& p, const Vec3& d);
// Same but additionally orient the direction lexicographically positive
// (used for dedup identity, where orientation must not matter).
OrientedLine canonical_line(const Point3& p, const Vec3& d);
bool lines_equal(const OrientedLine& a, const OrientedLine& b, double tol_line);

struct Segment {
    Point3 p0, p1;
    Vec3 dir() const { return p1 - p0; }         // not normalized
    Point3 at(double t) const { return p0 + (p1 - p0) * t; }
    double length() const { return (p1 - p0).norm(); }
};

struct Plane {  // n . x = c, |n| = 1
    Dir3 n;
    double c = 0;
    double signed_dist(const Point3& p) const { return n.dot(p) - c; }
};

std::optional<Plane> plane_through(const Point3& a, const Point3& b,
                                   const Point3& c, double tol_area);

// distance and closest-approach parameters of two (infinite) lines
double line_line_distance(const OrientedLine& a, const OrientedLine& b);
// parameter s of the point a + s e closest to line L (the intersection
// parameter when the lines meet); nullopt if parallel
std::optional<double> param_on_line(const OrientedLine& L, const Point3& a,
                                    const Vec3& e);
// parameter of the point of line (a,e) nearest to line L (works for skew pairs)
std::optional<double> nearest_param_on_support(const OrientedLine& L,
                                               const Point3& a, const Vec3& e);
double segment_segment_distance(const Segment& s1, const Segment& s2);
double point_segment_distance(const Point3& p, const Segment& s);

// predicates
bool coplanar(const Point3& a, const Point3& b, const Point3& c,
              const Point3& d, double rel_tol);
bool collinear(const Point3& a, const Point3& b, const Point3& c,
               double rel_tol);

// ---------------------------------------------------------------------------
// Quadrics (projective symmetric 4x4 form, Frobenius-normalized)
// ---------------------------------------------------------------------------
enum class QuadricKind { HyperboloidOneSheet, HyperbolicParaboloid, Degenerate };

struct Quadric {
    std::array<std::array<double, 4>, 4> Q{};  // symmetric
    QuadricKind kind = QuadricKind::Degenerate;
    double condition = 0;  // sigma_1 / sigma_9 of the fitting system

    double eval(const Point3& p) const;           // p^T Q p with w=1
    Vec3 gradient3(const Point3& p) const;        // spatial gradient of eval
};

struct GeomError : std::runtime_error {
    explicit GeomError(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateConfiguration : GeomError {
    using GeomError::GeomError;
};
struct IllConditioned : GeomError {
    using GeomError::GeomError;
};
struct NotOnSurface : GeomError {
    using GeomError::GeomError;
};
struct DegenerateTangency : GeomError {
    using GeomError::GeomError;
};

// The unique doubly-ruled quadric through three pairwise-skew lines.
Quadric quadric_through_lines(const OrientedLine& l1, const OrientedLine& l2,
                              const OrientedLine& l3, const ToleranceConfig& tol);

// The ruling line through p on Q belonging to the ruling transversal to the
// three generators.
OrientedLine ruling_through_point(const Quadric& Q, const Point3& p,
                                  const std::array<OrientedLine, 3>& generators,
                                  const ToleranceConfig& tol);

// Line-quadric intersection: 0..2 parameters, or contained.
struct LineQuadricResult {
    bool contained = false;
    int count = 0;           // 0, 1, 2 when !contained
    std::array<double, 2> t{};
};
LineQuadricResult line_quadric_intersection(const Quadric& Q,
                                            const OrientedLine& l,
                                            const ToleranceConfig& tol);

// ---------------------------------------------------------------------------
// Plucker route (independent transversal oracle)
// ---------------------------------------------------------------------------
struct PluckerLine {
    Vec3 d;  // direction
    Vec3 m;  // moment = p x d
};
PluckerLine to_plucker(const OrientedLine& l);
// reciprocal product: zero iff lines meet (or are parallel & coplanar)
double plucker_side(const PluckerLine& a, const PluckerLine& b);

struct TransversalResult {
    bool infinite = false;
    std::vector<OrientedLine> lines;  // size 0..2 when finite
};

// Lines meeting all four given lines; l1..l3 must be pairwise skew.
// Two independent implementations (must agree within tol_line):
TransversalResult transversals_of_four_lines_plucker(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol);
TransversalResult transversals_of_four_lines_quadric(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol);
// Default entry point (quadric route, spot-checkable against Plucker).
TransversalResult transversals_of_four_lines(
    const std::array<OrientedLine, 4>& ls, const ToleranceConfig& tol);

// Transversals to THREE pairwise-skew lines through a point constraint are a
// full ruling; exposed for trisecant family sweeps via ruling_through_point.

// axis-aligned bounding box (prefilter support)
struct Aabb {
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    void expand(const Point3& p);
    void expand(const Aabb& o);
    bool intersects_segment(const Segment& s) const;  // slab test
};

}  // namespace knotsec
