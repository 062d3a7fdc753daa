#pragma once
// Polygonal knot model: arclength/arc bookkeeping, genericity validation,
// built-in knot families.

#include "knotsec/geom3.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace knotsec {

struct KnotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CannotPerturb : KnotError {
    using KnotError::KnotError;
};
struct UnknownFamily : KnotError {
    using KnotError::KnotError;
};
struct TooFewVertices : KnotError {
    using KnotError::KnotError;
};

class PolygonalKnot {
  public:
    // validates: >=3 vertices, consecutive distinct, embedded closed curve
    PolygonalKnot(std::vector<Point3> vertices, std::string name = {},
                  std::optional<int> unknotting_number = std::nullopt,
                  const ToleranceConfig& tol = {});

    int size() const { return static_cast<int>(verts_.size()); }
    const std::vector<Point3>& vertices() const { return verts_; }
    const Point3& vertex(int i) const { return verts_[mod(i)]; }
    Segment edge(int i) const { return {verts_[mod(i)], verts_[mod(i + 1)]}; }
    double edge_length(int i) const { return elen_[mod(i)]; }
    double total_length() const { return total_len_; }
    double diameter() const { return diameter_; }
    const std::string& name() const { return name_; }
    std::optional<int> unknotting_number() const { return u_; }

    // cumulative arclength of vertex i (cum(0) = 0, cum(n) = total)
    double cum_length(int i) const { return cum_[i]; }

    int mod(int i) const {
        int n = size();
        return ((i % n) + n) % n;
    }

  private:
    std::vector<Point3> verts_;
    std::vector<double> elen_;
    std::vector<double> cum_;  // size n+1
    double total_len_ = 0;
    double diameter_ = 0;
    std::string name_;
    std::optional<int> u_;
};

// point on the knot keyed by (edge, parameter in [0,1))
struct KnotPoint {
    int edge_index = 0;
    double t = 0;
    Point3 point;  // cached interpolation

    static KnotPoint on(const PolygonalKnot& K, int edge, double t);
};

// arclength position of a knot point
double arc_position(const PolygonalKnot& K, const KnotPoint& p);
// length of oriented arc from a to b (follows knot orientation)
double arc_length(const PolygonalKnot& K, const KnotPoint& a, const KnotPoint& b);

struct Arc {
    KnotPoint start, end;  // oriented with the knot
};

// Delta-exclusion: a, b lie on a common straight subarc (same edge, or
// adjacent collinear edges)
bool common_straight_subarc(const PolygonalKnot& K, const KnotPoint& a,
                            const KnotPoint& b, const ToleranceConfig& tol);

struct GenericityReport {
    std::vector<std::array<int, 4>> coplanar_quadruples;
    std::vector<std::array<int, 3>> collinear_triples;
    std::vector<std::array<int, 4>> quadric_violations;  // (i,j,k, offending edge)
    std::vector<std::vector<int>> n_secant_excess;       // edges of 5+-secants
    bool is_generic = false;
};

// Exhaustive local genericity checks (coplanarity / collinearity / edge-on-
// quadric). The 5-secant check is filled in by the secants module wrapper.
GenericityReport check_genericity_local(const PolygonalKnot& K,
                                        const ToleranceConfig& tol);

// Deterministic seeded perturbation until generic; preserves isotopy class by
// requiring min inter-edge clearance > 2 * magnitude before perturbing.
PolygonalKnot perturb_to_generic(const PolygonalKnot& K, double magnitude,
                                 uint64_t seed, const ToleranceConfig& tol,
                                 int max_retries = 64);

// minimum distance between non-adjacent edges
double min_edge_clearance(const PolygonalKnot& K);

// --- built-in families ---
struct BuiltinParams {
    int p = 2, q = 3;  // torus family parameters
};
// family in {round_circle, torus, hexagonal_trefoil, figure8_sampled, five_two}
PolygonalKnot builtin_knot(const std::string& family, const BuiltinParams& params,
                           int n_vertices);

}  // namespace knotsec
