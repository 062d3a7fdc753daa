// Polygonal knot model tests: construction validation, arclength bookkeeping,
// genericity reports, seeded perturbation, built-in families.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "knotsec/knot.hpp"

#include <cmath>
#include <numbers>

using namespace knotsec;

namespace {

PolygonalKnot unit_square() {
    return PolygonalKnot({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, "square");
}

}  // namespace

TEST_CASE("construction validates vertex count, edges, and embedding") {
    CHECK_THROWS_AS(PolygonalKnot({{0, 0, 0}, {1, 0, 0}}), KnotError);
    // repeated consecutive vertex -> zero-length edge
    CHECK_THROWS_AS(PolygonalKnot({{0, 0, 0}, {0, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                    KnotError);
    // figure-eight shaped planar polygon self-intersects
    CHECK_THROWS_AS(
        PolygonalKnot({{0, 0, 0}, {2, 2, 0}, {2, 0, 0}, {0, 2, 0}}),
        KnotError);
    // negative unknotting number is invalid metadata
    CHECK_THROWS_AS(PolygonalKnot({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, "t", -1),
                    KnotError);
    // a clean triangle passes
    PolygonalKnot T({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, "tri", 0);
    CHECK(T.size() == 3);
    CHECK(T.name() == "tri");
    REQUIRE(T.unknotting_number().has_value());
    CHECK(*T.unknotting_number() == 0);
}

TEST_CASE("arclength and diameter bookkeeping on the unit square") {
    auto K = unit_square();
    CHECK(K.total_length() == doctest::Approx(4.0));
    CHECK(K.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(K.edge_length(2) == doctest::Approx(1.0));
    CHECK(K.cum_length(0) == 0.0);
    CHECK(K.cum_length(4) == doctest::Approx(4.0));

    auto p = KnotPoint::on(K, 1, 0.5);
    CHECK(p.point.x == doctest::Approx(1.0));
    CHECK(p.point.y == doctest::Approx(0.5));
    CHECK(arc_position(K, p) == doctest::Approx(1.5));

    // edge index wraps modulo n
    auto q = KnotPoint::on(K, 5, 0.25);
    CHECK(q.edge_index == 1);
    CHECK(q.point.y == doctest::Approx(0.25));

    // oriented arc length follows the knot, including wraparound
    auto a = KnotPoint::on(K, 0, 0.25);
    auto b = KnotPoint::on(K, 2, 0.25);
    CHECK(arc_length(K, a, b) == doctest::Approx(2.0));
    CHECK(arc_length(K, b, a) == doctest::Approx(2.0));
    auto c = KnotPoint::on(K, 3, 0.5);
    CHECK(arc_length(K, c, a) == doctest::Approx(0.75));
}

TEST_CASE("common straight subarc detection") {
    ToleranceConfig tol;
    // hexagon with one straight corner: vertices 1,2,3 are collinear, so
    // edges 1 and 2 form a straight subarc
    PolygonalKnot K({{0, 0, 0},
                     {1, 0, 0},
                     {2, 0, 0},
                     {3, 0, 0},
                     {3, 2, 0},
                     {0, 2, 1}},
                    "flat-corner");
    auto p1 = KnotPoint::on(K, 1, 0.5);
    auto p2 = KnotPoint::on(K, 2, 0.5);
    auto p0 = KnotPoint::on(K, 0, 0.5);
    auto p4 = KnotPoint::on(K, 4, 0.5);
    CHECK(common_straight_subarc(K, p1, p2, tol));
    CHECK(common_straight_subarc(K, p2, p1, tol));
    CHECK(common_straight_subarc(K, p0, p2, tol));  // chain 0-1-2 collinear
    CHECK_FALSE(common_straight_subarc(K, p1, p4, tol));
    // same edge always counts
    CHECK(common_straight_subarc(K, p4, KnotPoint::on(K, 4, 0.9), tol));
}

TEST_CASE("planar polygons are flagged non-generic with witnesses") {
    ToleranceConfig tol;
    auto C = builtin_knot("round_circle", {}, 8);
    auto rep = check_genericity_local(C, tol);
    CHECK_FALSE(rep.is_generic);
    // every vertex quadruple of a planar polygon is coplanar: C(8,4) = 70
    CHECK(rep.coplanar_quadruples.size() == 70);
    CHECK(rep.collinear_triples.empty());
}

TEST_CASE("hexagonal trefoil is generic as built") {
    ToleranceConfig tol;
    auto H = builtin_knot("hexagonal_trefoil", {}, 6);
    auto rep = check_genericity_local(H, tol);
    CHECK(rep.is_generic);
    CHECK(rep.coplanar_quadruples.empty());
    CHECK(rep.collinear_triples.empty());
    CHECK(rep.quadric_violations.empty());
    CHECK(min_edge_clearance(H) > 0.5);
}

TEST_CASE("seeded perturbation reaches genericity and is deterministic") {
    ToleranceConfig tol;
    auto C = builtin_knot("round_circle", {}, 12);
    auto P1 = perturb_to_generic(C, 1e-4, 7, tol);
    auto P2 = perturb_to_generic(C, 1e-4, 7, tol);
    CHECK(check_genericity_local(P1, tol).is_generic);
    REQUIRE(P1.size() == C.size());
    for (int i = 0; i < C.size(); ++i) {
        // same seed, same output
        CHECK(P1.vertex(i).x == P2.vertex(i).x);
        CHECK(P1.vertex(i).y == P2.vertex(i).y);
        CHECK(P1.vertex(i).z == P2.vertex(i).z);
        // bounded displacement
        CHECK((P1.vertex(i) - C.vertex(i)).norm() <= 1e-4 * std::sqrt(3.0) + 1e-15);
    }
    CHECK(P1.name() == C.name());
    CHECK(P1.unknotting_number() == C.unknotting_number());

    // different seed, different output
    auto P3 = perturb_to_generic(C, 1e-4, 8, tol);
    bool any_diff = false;
    for (int i = 0; i < C.size(); ++i)
        if ((P1.vertex(i) - P3.vertex(i)).norm() > 0) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("perturbation refuses unsafe magnitudes") {
    ToleranceConfig tol;
    auto C = builtin_knot("round_circle", {}, 12);
    // magnitude not far below the minimum edge length
    CHECK_THROWS_AS(perturb_to_generic(C, 1.0, 1, tol), CannotPerturb);
    // magnitude 0 on a non-generic knot cannot succeed
    CHECK_THROWS_AS(perturb_to_generic(C, 0.0, 1, tol), CannotPerturb);
    // magnitude 0 on an already-generic knot is the identity
    auto H = builtin_knot("hexagonal_trefoil", {}, 6);
    auto H0 = perturb_to_generic(H, 0.0, 1, tol);
    for (int i = 0; i < 6; ++i)
        CHECK((H0.vertex(i) - H.vertex(i)).norm() == 0.0);
}

TEST_CASE("built-in families: shapes, sizes, metadata") {
    auto C = builtin_knot("round_circle", {}, 64);
    CHECK(C.size() == 64);
    CHECK(C.name() == "round_circle");
    CHECK(*C.unknotting_number() == 0);
    for (int i = 0; i < 64; ++i) {
        CHECK(C.vertex(i).z == 0.0);
        CHECK(C.vertex(i).norm() == doctest::Approx(1.0));
    }

    auto T = builtin_knot("torus", {2, 3}, 40);
    CHECK(T.size() == 40);
    CHECK(T.name() == "torus_2_3");
    CHECK(*T.unknotting_number() == 1);
    // first sample of the (2,3) curve: t=0 -> (3, 0, 0)
    CHECK(T.vertex(0).x == doctest::Approx(3.0));
    CHECK(T.vertex(0).y == doctest::Approx(0.0));

    auto T5 = builtin_knot("torus", {2, 5}, 40);
    CHECK(*T5.unknotting_number() == 2);
    auto T7 = builtin_knot("torus", {3, 7}, 64);
    CHECK(T7.name() == "torus_3_7");
    CHECK_FALSE(T7.unknotting_number().has_value());

    auto H = builtin_knot("hexagonal_trefoil", {}, 6);
    CHECK(H.size() == 6);
    CHECK(*H.unknotting_number() == 1);

    auto F = builtin_knot("figure8_sampled", {}, 40);
    CHECK(F.size() == 40);
    CHECK(*F.unknotting_number() == 1);

    auto W = builtin_knot("five_two", {}, 64);
    CHECK(W.size() == 64);
    CHECK(W.name() == "five_two");
    CHECK(*W.unknotting_number() == 1);
}

TEST_CASE("built-in family errors") {
    CHECK_THROWS_AS(builtin_knot("klein_bottle", {}, 10), UnknownFamily);
    CHECK_THROWS_AS(builtin_knot("round_circle", {}, 2), TooFewVertices);
    CHECK_THROWS_AS(builtin_knot("torus", {2, 3}, 5), TooFewVertices);
    CHECK_THROWS_AS(builtin_knot("hexagonal_trefoil", {}, 7), TooFewVertices);
    CHECK_THROWS_AS(builtin_knot("figure8_sampled", {}, 8), TooFewVertices);
    CHECK_THROWS_AS(builtin_knot("five_two", {}, 12), TooFewVertices);
}

TEST_CASE("torus samplings land on the expected surface of revolution") {
    auto T = builtin_knot("torus", {2, 5}, 60);
    for (int i = 0; i < 60; ++i) {
        Point3 v = T.vertex(i);
        double rho = std::sqrt(v.x * v.x + v.y * v.y);
        // (rho - 2)^2 + z^2 = 1 for the (a=2, r=1) torus
        double res = (rho - 2.0) * (rho - 2.0) + v.z * v.z;
        CHECK(res == doctest::Approx(1.0).epsilon(1e-9));
    }
}
