#pragma once

// Quadrisecant approximation: the closed polygon through all quadrisecant
// points of a knot, in knot order, together with the checks needed to compare
// it against the source knot (embeddedness, signature, quadrisecant lines).
// The comparison record reports evidence only; whether the approximation
// always preserves knot type is known to fail in general.

#include "knotsec/secants.hpp"
#include "knotsec/topology.hpp"

#include <optional>
#include <vector>

namespace knotsec {

struct QuadApprox {
    std::vector<KnotPoint> cut_points;  // sorted by arc position along the source
    std::vector<Point3> polyline;       // closed polygon through the cut points
    bool embedded = false;
    std::optional<KnotSignature> signature;  // set when embedded

    std::vector<Quadrisecant> source_quadrisecants;
    std::vector<Quadrisecant> approx_quadrisecants;  // re-enumerated on the polyline
    bool approx_five_secant = false;  // re-enumeration aborted on a 5-point line
};

// Builds the approximation of K: every quadrisecant contributes its four
// points, the points are sorted along K and near-coincident ones merged, and
// the resulting closed polygon is tested for embeddedness. When embedded, its
// signature is computed and its own quadrisecants are enumerated for
// comparison. Throws NoQuadrisecants when K has none.
QuadApprox quadrisecant_approximation(const PolygonalKnot& K,
                                      const ToleranceConfig& tol,
                                      const EnumerationOptions& opts = {},
                                      uint64_t seed = 1);

struct ConjectureReport {
    bool embedded = false;
    bool same_signature = false;
    bool same_quadrisecant_set = false;
    int source_count = 0;
    int approx_count = 0;
};

// Evidence record for the knot-type-preservation question: never a proof,
// just the three observable comparisons.
ConjectureReport conjecture_report(const QuadApprox& A, const PolygonalKnot& K,
                                   const ToleranceConfig& tol, uint64_t seed = 1);
ConjectureReport conjecture_report(const PolygonalKnot& K,
                                   const ToleranceConfig& tol,
                                   const EnumerationOptions& opts = {},
                                   uint64_t seed = 1);

// True when the two lines coincide as unoriented lines within tol_match
// (direction angle and mutual base offsets, scale-aware).
bool lines_match(const OrientedLine& l1, const OrientedLine& l2,
                 double tol_match, double scale);

}  // namespace knotsec
