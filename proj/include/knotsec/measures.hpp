#pragma once
// Geometric measures of closed polylines: total curvature, thickness,
// ropelength, length lower bounds from secant geometry, distortion,
// second-hull membership, bridge counts, and the supercrossing floor.

#include "knotsec/knot.hpp"
#include "knotsec/secants.hpp"

#include <cstdint>
#include <vector>

namespace knotsec {

struct ZeroThickness : KnotError {
    using KnotError::KnotError;
};
struct DomainError : KnotError {
    using KnotError::KnotError;
};
struct PointOnKnot : KnotError {
    using KnotError::KnotError;
};
struct DegenerateDirection : KnotError {
    using KnotError::KnotError;
};

// ---------------------------------------------------------------------------
// curvature / thickness / ropelength
// ---------------------------------------------------------------------------

// Sum of exterior angles at the vertices of a closed polyline (>= 3 points).
// A collinear reversal contributes pi. Accepts non-embedded inputs.
double total_curvature(const std::vector<Point3>& P);

// Twice the infimal circumradius over vertex triples, excluding triples that
// lie within a window of fewer than `smoothing_window` consecutive edges
// (corner triples of a polygon otherwise force the value to zero; intended
// inputs are dense samplings of smooth curves). Returns +infinity when no
// admissible triple exists.
double thickness(const std::vector<Point3>& P, int smoothing_window = 3);

// Perimeter divided by thickness. Throws ZeroThickness when the thickness is
// not positive (below 1e-9 of the bounding-box diameter).
double ropelength(const std::vector<Point3>& P, int smoothing_window = 3);

// ---------------------------------------------------------------------------
// length lower-bound functions
// ---------------------------------------------------------------------------

// f(r) = sqrt(r^2-1) + arcsin(1/r), for r >= 1: the least length of an arc
// from distance r down to a unit ball's surface and around it.
double bound_f(double r);

// g(d) = 2*pi - 2*arcsin(d/2) for d <= 2 and pi beyond: the least length of
// an essential arc whose endpoints are d apart (unit thickness scale).
double bound_g(double d);

// m(r, s, theta): least length of an arc outside the unit ball joining
// points at distances r and s seen at angle theta from the center. Chord
// branch below theta* = arccos(1/r) + arccos(1/s), wrap branch above.
double min_length_outside_ball(double r, double s, double theta);

// Length lower bound for a knot with an essential quadrisecant of the given
// dihedral class with gap distances r, s, t (all >= 1):
//   simple:      (g(r)+f(r)) + (g(s)+s) + (g(t)+f(t))
//   flipped:     (g(r)+f(r)) + 2 f(s)   + (g(t)+f(t))
//   alternating: 2 f(r) + (2 f(s)+g(s)+s) + 2 f(t)
double eval_bounds(DihedralClass type, double r, double s, double t);

struct BoundMinimum {
    double value = 0;
    double r = 1, s = 1, t = 1;  // argmin
};

// Termwise 1-D minimization of eval_bounds over [1, 2] per variable
// (each term is constant beyond 2), grid scan plus golden-section refine.
BoundMinimum minimize_bound(DihedralClass type, double opt_tol = 1e-6);

// ---------------------------------------------------------------------------
// distortion
// ---------------------------------------------------------------------------

struct DistortionInterval {
    double lo = 1;  // largest ratio found at sampled pairs
    double hi = 1;  // certified upper bound for the supremum
};

// Certified interval for sup d_curve(p,q) / |p-q| over a closed embedded
// polyline: branch-and-bound over parameter-cell pairs, corner suprema in
// closed form, bisected until hi - lo < tol or the cell budget is exhausted
// (the interval stays valid either way).
DistortionInterval distortion(const std::vector<Point3>& P, double tol,
                              long cell_budget = 200000);

// ---------------------------------------------------------------------------
// second hull
// ---------------------------------------------------------------------------

enum class SecondHullKind {
    MemberSampled,  // no sampled plane cut fewer than 2*order times
    ExactMember,    // exact minimum over all planes is >= 2*order
    NotMember,      // witness plane cuts fewer than 2*order times
};

struct SecondHullResult {
    SecondHullKind kind = SecondHullKind::NotMember;
    int min_crossings = 0;       // smallest transversal crossing count seen
    Vec3 witness_normal{0, 0, 1};  // plane normal achieving min_crossings
    int planes_checked = 0;
};

// Does every plane through p cut K at least 2*order times? Exact mode
// (arrangement of the great circles normal to v_i - p) when K has at most
// `exact_max_vertices` vertices; otherwise n_planes sampled directions.
// Tangential contacts are perturbed away; only transversal crossings count.
SecondHullResult second_hull_membership(const PolygonalKnot& K,
                                        const Point3& p, int order,
                                        int n_planes = 2000,
                                        int exact_max_vertices = 64);

// ---------------------------------------------------------------------------
// bridges and supercrossing
// ---------------------------------------------------------------------------

// Number of strict local maxima of the height function v . x along the
// closed polygon. Throws DegenerateDirection when consecutive heights tie.
int bridge_count(const PolygonalKnot& K, const Vec3& v);

// Max bridge count over n_dirs sampled directions (degenerate directions are
// re-jittered). A lower bound for the supremum over all directions of this
// conformation; reported as an estimate.
int superbridge_estimate(const PolygonalKnot& K, int n_dirs,
                         uint64_t seed = 1);

struct SupercrossingWitness {
    int floor_value = 6;
    Vec3 direction{0, 0, 1};  // projection direction exhibiting >= 6 crossings
    int crossings = 0;
};

// Every knot with a quadrisecant shows >= 6 crossings in projections near
// the quadrisecant line; returns that witness. Throws NoQuadrisecants when
// the knot has none.
SupercrossingWitness supercrossing_floor(const PolygonalKnot& K,
                                         const ToleranceConfig& tol,
                                         const EnumerationOptions& opts = {});

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

struct MeasureReport {
    double total_curvature = 0;
    double thickness = 0;
    bool thickness_degenerate = false;  // thickness below 1e-6 of diameter
    double ropelength = 0;              // 0 when thickness is degenerate
    DistortionInterval distortion;
    std::vector<int> bridge_counts;  // per sampled direction
    int superbridge_estimate = 0;
};

MeasureReport measure_report(const PolygonalKnot& K, double distortion_tol,
                             int bridge_dirs, uint64_t seed = 1);

}  // namespace knotsec
