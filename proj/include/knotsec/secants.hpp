#pragma once
// Secant, trisecant-family, and quadrisecant enumeration for generic
// polygonal knots, with dihedral order classification and count bounds.

#include "knotsec/geom3.hpp"
#include "knotsec/knot.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace knotsec {

struct NotGeneric : KnotError {
    using KnotError::KnotError;
};
struct FiveSecantDetected : KnotError {
    std::vector<int> edges;
    FiveSecantDetected(std::string m, std::vector<int> e)
        : KnotError(std::move(m)), edges(std::move(e)) {}
};
struct MissingMetadata : KnotError {
    using KnotError::KnotError;
};
struct NoQuadrisecants : KnotError {
    using KnotError::KnotError;
};

struct Secant {
    KnotPoint a, b;  // ordered along the knot
    OrientedLine line;
};

enum class TrisecantOrderClass { Direct, Reversed };

struct Trisecant {
    KnotPoint a, b, c;  // in order along the oriented line
    TrisecantOrderClass order_class;
};

enum class FamilyTopology { ClosedInterval, HalfOpen, PointFamily, Empty };

struct TrisecantFamily {
    std::array<int, 3> edge_triple;
    FamilyTopology topology = FamilyTopology::Empty;
    std::vector<Trisecant> samples;  // parametrized chain
};

enum class DihedralClass { Simple, Flipped, Alternating };
enum class EssentialState { Certified, Refuted, Inconclusive, NotRequiredChecked };

std::string to_string(DihedralClass c);
std::string to_string(EssentialState s);

struct Quadrisecant {
    // labeled in order along K, orientation chosen so b in arc(a,d)
    KnotPoint a, b, c, d;
    OrientedLine line;
    std::array<int, 4> line_order{};  // permutation: position along line of a,b,c,d
    DihedralClass dihedral_class = DihedralClass::Simple;
    double r = 0, s = 0, t = 0;  // |a-b|, |b-c|, |c-d|
    EssentialState essential = EssentialState::NotRequiredChecked;
};

struct EnumerationOptions {
    bool use_prefilter = true;    // conservative bounding-volume prefilter
    bool check_five_secants = true;
    int threads = 1;
};

// Enumerate all quadrisecants of a generic knot. Dedups by canonical line,
// classifies dihedral order, sorts deterministically.
std::vector<Quadrisecant> enumerate_quadrisecants(
    const PolygonalKnot& K, const ToleranceConfig& tol,
    const EnumerationOptions& opts = {});

// Dihedral classification from the knot order (arc positions) of the four
// points and their order along the line. knot_order holds indices 0..3 of the
// line-ordered points sorted by knot position.
DihedralClass classify_dihedral(const std::array<int, 4>& knot_cycle_of_line_points);

// Trisecant families per edge triple.
std::vector<TrisecantFamily> trisecant_families(const PolygonalKnot& K,
                                                const ToleranceConfig& tol);

struct CoverageReport {
    double fraction = 0;          // of arclength covered by trisecant first points
    int samples = 0;
    int covered = 0;
};
CoverageReport trisecant_coverage(const PolygonalKnot& K,
                                  const ToleranceConfig& tol);

// quadrisecant count >= 2 u^2 (requires unknotting_number metadata)
bool pannwitz_lower_check(const PolygonalKnot& K, const ToleranceConfig& tol);

// n(n-3)(n-4)(n-5)/12
long long quadrisecant_count_upper_bound(int n);

// full genericity including the 5-secant scan
GenericityReport check_genericity(const PolygonalKnot& K,
                                  const ToleranceConfig& tol);

}  // namespace knotsec
