#pragma once
// Essentiality machinery: theta-graphs, zero-linking parallel loops, linking
// numbers, Wirtinger presentations, finite-quotient certificates, and knot
// signatures (normalized Alexander polynomial + determinant).

#include "knotsec/knot.hpp"
#include "knotsec/secants.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace knotsec {

struct ProjectionDegenerate : KnotError {
    using KnotError::KnotError;
};
struct CannotEmbed : KnotError {
    using KnotError::KnotError;
};
struct NotDisjoint : KnotError {
    using KnotError::KnotError;
};
struct OffsetCollision : KnotError {
    using KnotError::KnotError;
};
struct NoneCertified : KnotError {
    using KnotError::KnotError;
};

// ---------------------------------------------------------------------------
// knot signature: normalized Alexander polynomial + determinant
// ---------------------------------------------------------------------------
struct KnotSignature {
    // coefficients low-degree first, normalized: nonzero constant term,
    // value +1 at t=1
    std::vector<long long> alexander{1};
    long long determinant = 1;  // |alexander(-1)|

    bool operator==(const KnotSignature&) const = default;
    bool is_unknot() const {
        return determinant == 1 && alexander == std::vector<long long>{1};
    }
};

std::string to_string(const KnotSignature& s);

// signature of a closed polyline (multi-projection consistency vote)
KnotSignature knot_signature(const std::vector<Point3>& loop,
                             const ToleranceConfig& tol, uint64_t seed = 1);
KnotSignature knot_signature(const PolygonalKnot& K,
                             const ToleranceConfig& tol, uint64_t seed = 1);

// ---------------------------------------------------------------------------
// linking number of two disjoint closed polylines
// ---------------------------------------------------------------------------
int linking_number(const std::vector<Point3>& c1, const std::vector<Point3>& c2,
                   const ToleranceConfig& tol, uint64_t seed = 1);

// ---------------------------------------------------------------------------
// theta graphs and parallel loops
// ---------------------------------------------------------------------------
struct ThetaGraph {
    // three arcs from a to b: alpha, gamma along the knot (alpha = a->b with
    // the orientation, gamma = the complementary arc, also stored a->b),
    // beta the (possibly detoured) secant
    std::vector<Point3> alpha, beta, gamma;
    Point3 a, b;
    KnotPoint ka, kb;  // original knot points
};

struct ParallelLoop {
    std::vector<Point3> delta;  // closed polyline, disjoint from alpha u gamma
    int homology_check = 0;     // lk(delta, alpha u gamma); invariant: 0
};

// beta = straight segment when it clears K \ {a,b}; otherwise a seeded
// two-segment detour of magnitude epsilon (retried with fresh directions)
ThetaGraph build_theta(const PolygonalKnot& K, const KnotPoint& a,
                       const KnotPoint& b, double epsilon,
                       const ToleranceConfig& tol, uint64_t seed = 1);

// offset parallel of alpha u beta, twist-adjusted to zero linking with K
ParallelLoop parallel_with_zero_linking(const ThetaGraph& theta,
                                        const ToleranceConfig& tol,
                                        double offset_frac = 0.25,
                                        uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Wirtinger presentations and finite-quotient certificates
// ---------------------------------------------------------------------------
struct WirtingerPresentation {
    int n_generators = 0;  // one per diagram arc
    struct Relation {
        int out = 0, in = 0, over = 0;  // x_out = x_over^sign x_in x_over^-sign
        int sign = +1;
    };
    std::vector<Relation> relations;
};

// precomputed complement data for one knot: valid projections with their
// presentations, plus homomorphisms into small finite quotients found within
// the time box. Reused across all secants of the same knot.
class ComplementModel {
  public:
    struct Hom {
        std::string group;             // e.g. "S3", "D4", "A5"
        std::vector<uint16_t> images;  // per-arc permutation id
    };
    struct Projection;  // opaque: basis, diagram, presentation

    static ComplementModel build(const std::vector<Point3>& loop,
                                 const ToleranceConfig& tol, uint64_t seed = 1,
                                 int timebox_ms = 200);

    const KnotSignature& signature() const { return sig_; }
    const WirtingerPresentation& presentation() const { return pres_; }
    int hom_count() const { return static_cast<int>(homs_.size()); }

    // word of a disjoint closed loop in the Wirtinger generators of the first
    // projection where the combined picture is generic (letters: +-(arc+1))
    std::vector<int> loop_word(const std::vector<Point3>& delta) const;
    // evaluate a word under hom k; true iff image is the identity
    bool word_trivial(const std::vector<int>& word, int k) const;
    const Hom& hom(int k) const { return homs_[k]; }

    ~ComplementModel();
    ComplementModel(ComplementModel&&) noexcept;
    ComplementModel& operator=(ComplementModel&&) noexcept;

  private:
    ComplementModel();
    std::vector<std::shared_ptr<const Projection>> projections_;
    WirtingerPresentation pres_;  // of the first projection
    std::vector<Hom> homs_;
    KnotSignature sig_;
};

// ---------------------------------------------------------------------------
// essentiality verdicts
// ---------------------------------------------------------------------------
enum class VerdictStatus { EssentialCertified, InessentialCertified, Inconclusive };

struct EssentialityVerdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::string witness;  // quotient group + images, or disk/ball criterion
};

std::string to_string(VerdictStatus s);

struct CertifyOptions {
    int timebox_ms = 200;      // homomorphism search budget per secant
    double known_thickness = 0;  // > 0 enables the diameter-ball criterion
    uint64_t seed = 1;
};

// certificate for the triple (alpha, beta, gamma) with loop class delta
EssentialityVerdict certify_essential(const ThetaGraph& theta,
                                      const ParallelLoop& delta,
                                      const ToleranceConfig& tol,
                                      const CertifyOptions& opts = {});
// same, reusing a prepared complement model of alpha u gamma
EssentialityVerdict certify_essential(const ThetaGraph& theta,
                                      const ParallelLoop& delta,
                                      const ComplementModel& model,
                                      const ToleranceConfig& tol,
                                      const CertifyOptions& opts = {});

// secant-level verdict: essential iff both subarc triples are essential
EssentialityVerdict secant_essential(const PolygonalKnot& K, const KnotPoint& a,
                                     const KnotPoint& b,
                                     const ComplementModel& model,
                                     const ToleranceConfig& tol,
                                     const CertifyOptions& opts = {});

// class-dependent check: simple -> ab, bc, cd; flipped -> ab, cd;
// alternating -> bc. Updates q.essential.
Quadrisecant essential_quadrisecant_check(const PolygonalKnot& K,
                                          const Quadrisecant& q,
                                          const ComplementModel& model,
                                          const ToleranceConfig& tol,
                                          const CertifyOptions& opts = {});
// convenience: builds the model internally
Quadrisecant essential_quadrisecant_check(const PolygonalKnot& K,
                                          const Quadrisecant& q,
                                          const ToleranceConfig& tol,
                                          const CertifyOptions& opts = {});

// grid search for the shortest arc certified essential
struct ShortestEssentialArc {
    Arc arc;
    double length = 0;
    EssentialityVerdict verdict;
    bool near_trisecant_witness = false;  // diagnostic, not required
};
ShortestEssentialArc shortest_essential_arc(const PolygonalKnot& K,
                                            double resolution,
                                            const ToleranceConfig& tol,
                                            const CertifyOptions& opts = {});

}  // namespace knotsec
