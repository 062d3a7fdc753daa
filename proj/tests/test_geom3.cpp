// Geometry kernel tests: canonical lines, quadrics through skew triples,
// rulings, line-quadric intersection, and the two transversal solvers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "knotsec/geom3.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace knotsec;

namespace {

ToleranceConfig scene_tol(double diameter = 10.0) {
    ToleranceConfig tol;
    tol.scene_diameter = diameter;
    return tol;
}

// The canonical skew triple ruling the surface xy - z = 0.
OrientedLine gen1() { return make_line({0, 0, 0}, {0, 1, 0}); }
OrientedLine gen2() { return make_line({1, 0, 0}, {0, 1, 1}); }
OrientedLine gen3() { return make_line({-1, 0, 0}, {0, 1, -1}); }

bool on_line(const OrientedLine& L, const Point3& p, double tol) {
    Vec3 w = p - L.base;
    return (w - L.direction * w.dot(L.direction)).norm() <= tol;
}

bool unoriented_match(const OrientedLine& a, const OrientedLine& b, double tol) {
    if (a.direction.cross(b.direction).norm() > tol) return false;
    return on_line(a, b.base, tol) && on_line(b, a.base, tol);
}

struct RigidMotion {
    std::array<double, 9> R;  // row-major rotation
    Vec3 T;
    Point3 apply(const Point3& p) const {
        return Point3{R[0] * p.x + R[1] * p.y + R[2] * p.z,
                      R[3] * p.x + R[4] * p.y + R[5] * p.z,
                      R[6] * p.x + R[7] * p.y + R[8] * p.z} +
               T;
    }
    Vec3 rotate(const Vec3& v) const {
        return {R[0] * v.x + R[1] * v.y + R[2] * v.z,
                R[3] * v.x + R[4] * v.y + R[5] * v.z,
                R[6] * v.x + R[7] * v.y + R[8] * v.z};
    }
    OrientedLine apply(const OrientedLine& l) const {
        return make_line(apply(l.base), rotate(l.direction));
    }
};

RigidMotion random_motion(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    // Gram-Schmidt a random frame into a proper rotation.
    Vec3 u{g(rng), g(rng), g(rng)};
    u = u.normalized();
    Vec3 v{g(rng), g(rng), g(rng)};
    v = (v - u * v.dot(u)).normalized();
    Vec3 w = u.cross(v);
    std::uniform_real_distribution<double> t(-3.0, 3.0);
    return {{u.x, v.x, w.x, u.y, v.y, w.y, u.z, v.z, w.z},
            {t(rng), t(rng), t(rng)}};
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v{g(rng), g(rng), g(rng)};
    while (v.norm() < 1e-3) v = {g(rng), g(rng), g(rng)};
    return v.normalized();
}

OrientedLine random_line(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return make_line({u(rng), u(rng), u(rng)}, random_unit(rng));
}

// Random pairwise-skew triple with healthy clearances so the quadric fit is
// well-conditioned (the point of the sweep is correctness, not conditioning).
std::array<OrientedLine, 3> random_skew_triple(std::mt19937_64& rng) {
    for (;;) {
        std::array<OrientedLine, 3> ls{random_line(rng), random_line(rng),
                                       random_line(rng)};
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = i + 1; j < 3 && ok; ++j) {
                if (line_line_distance(ls[i], ls[j]) < 1e-2) ok = false;
                if (ls[i].direction.cross(ls[j].direction).norm() < 1e-2)
                    ok = false;
            }
        if (ok) return ls;
    }
}

}  // namespace

TEST_CASE("canonical line form and equality") {
    auto a = canonical_line({5, 7, 9}, {0, 0, -2});
    // base is the point of the line closest to the origin
    CHECK(a.base.x == doctest::Approx(5).epsilon(1e-12));
    CHECK(a.base.y == doctest::Approx(7).epsilon(1e-12));
    CHECK(std::abs(a.base.z) < 1e-12);
    // direction is unit and lexicographically positive
    CHECK(a.direction.z == doctest::Approx(1.0));
    auto b = canonical_line({5, 7, -3}, {0, 0, 11});
    CHECK(lines_equal(a, b, 1e-7));
    auto c = canonical_line({5, 7 + 1e-3, 0}, {0, 0, 1});
    CHECK_FALSE(lines_equal(a, c, 1e-7));
}

TEST_CASE("quadric through the xy-z ruling triple") {
    auto tol = scene_tol();
    auto Q = quadric_through_lines(gen1(), gen2(), gen3(), tol);
    CHECK(Q.kind == QuadricKind::HyperbolicParaboloid);
    // The surface is exactly z = xy: residuals vanish on it.
    for (double x : {-1.3, 0.0, 0.5, 2.0})
        for (double y : {-0.7, 0.7, 3.0})
            CHECK(std::abs(Q.eval({x, y, x * y})) < 1e-9);
    // and are bounded away from zero off it
    CHECK(std::abs(Q.eval({0, 0, 1})) > 1e-3);
    // generators satisfy the form identically
    for (const auto& l : {gen1(), gen2(), gen3()})
        for (double s : {-2.0, -0.5, 0.0, 1.0, 2.5})
            CHECK(std::abs(Q.eval(l.at(s))) < 1e-9);
}

TEST_CASE("quadric kind tracks direction coplanarity") {
    auto tol = scene_tol();
    // all three directions parallel to the xy-plane
    auto l1 = make_line({0, 0, 0}, {1, 0, 0});
    auto l2 = make_line({0, 0, 1}, {0, 1, 0});
    auto l3 = make_line({1, 0, 2}, {1, 1, 0});
    auto Qp = quadric_through_lines(l1, l2, l3, tol);
    CHECK(Qp.kind == QuadricKind::HyperbolicParaboloid);
    // tilting one direction well past tolerance switches the class
    auto l3t = make_line({1, 0, 2}, {1, 1, 0.05});
    auto Qh = quadric_through_lines(l1, l2, l3t, tol);
    CHECK(Qh.kind == QuadricKind::HyperboloidOneSheet);
}

TEST_CASE("quadric rejects intersecting and near-parallel pairs") {
    auto tol = scene_tol();
    // l1 and l2 meet at the origin
    auto l1 = make_line({0, 0, 0}, {1, 0, 0});
    auto l2 = make_line({0, 0, 0}, {0, 1, 0});
    auto l3 = make_line({0, 0, 5}, {1, 1, 0});
    CHECK_THROWS_AS(quadric_through_lines(l1, l2, l3, tol),
                    DegenerateConfiguration);
    // parallel pair
    auto p1 = make_line({0, 0, 0}, {1, 0, 0});
    auto p2 = make_line({0, 1, 0}, {1, 0, 0});
    CHECK_THROWS_AS(quadric_through_lines(p1, p2, l3, tol),
                    DegenerateConfiguration);
}

TEST_CASE("ruling through a surface point meets all three generators") {
    auto tol = scene_tol();
    std::array<OrientedLine, 3> gens{gen1(), gen2(), gen3()};
    auto Q = quadric_through_lines(gens[0], gens[1], gens[2], tol);

    // p = (2,3,6) lies on z = xy; the transversal ruling there is {(t,3,3t)}.
    auto r = ruling_through_point(Q, {2, 3, 6}, gens, tol);
    CHECK(on_line(r, {2, 3, 6}, 1e-7));
    auto expected = make_line({0, 3, 0}, {1, 0, 3});
    CHECK(unoriented_match(r, expected, 1e-7));
    for (const auto& g : gens)
        CHECK(line_line_distance(r, g) < 1e-7);
    for (double s : {-2.0, 0.0, 1.5})
        CHECK(std::abs(Q.eval(r.at(s))) < 1e-7);

    // p = origin: the transversal ruling is the x-axis, meeting each generator
    // at its y = 0 point.
    auto r0 = ruling_through_point(Q, {0, 0, 0}, gens, tol);
    CHECK(unoriented_match(r0, make_line({0, 0, 0}, {1, 0, 0}), 1e-7));
    for (const auto& g : gens)
        CHECK(line_line_distance(r0, g) < 1e-7);

    CHECK_THROWS_AS(ruling_through_point(Q, {0, 0, 1}, gens, tol), NotOnSurface);
}

TEST_CASE("line-quadric intersection: two, one (linear), contained") {
    auto tol = scene_tol();
    auto Q = quadric_through_lines(gen1(), gen2(), gen3(), tol);

    // {(t,t,3)} meets z = xy at (±√3, ±√3, 3)
    auto la = make_line({0, 0, 3}, {1, 1, 0});
    auto ra = line_quadric_intersection(Q, la, tol);
    REQUIRE_FALSE(ra.contained);
    REQUIRE(ra.count == 2);
    for (int i = 0; i < 2; ++i) {
        Point3 p = la.at(ra.t[i]);
        CHECK(std::abs(std::abs(p.x) - std::sqrt(3.0)) < 1e-9);
        CHECK(p.y == doctest::Approx(p.x).epsilon(1e-12));
        CHECK(p.z == doctest::Approx(3.0).epsilon(1e-12));
    }

    // {(2,3,t)}: the quadratic degenerates to linear, single hit at (2,3,6)
    auto lb = make_line({2, 3, 0}, {0, 0, 1});
    auto rb = line_quadric_intersection(Q, lb, tol);
    REQUIRE_FALSE(rb.contained);
    REQUIRE(rb.count == 1);
    Point3 pb = lb.at(rb.t[0]);
    CHECK(pb.x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pb.y == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pb.z == doctest::Approx(6.0).epsilon(1e-9));

    // a ruling line is contained
    auto rc = line_quadric_intersection(Q, make_line({2, 0, 0}, {0, 1, 2}), tol);
    CHECK(rc.contained);

    // a line missing the surface entirely
    auto rd = line_quadric_intersection(Q, make_line({0, 0, -9}, {1, 1, 0}), tol);
    CHECK_FALSE(rd.contained);
    CHECK(rd.count == 0);
}

TEST_CASE("four-line transversals: counts 2, 1, 0 and the infinite branch") {
    auto tol = scene_tol();
    std::array<OrientedLine, 3> gens{gen1(), gen2(), gen3()};

    // l4 = {(t,t,3)}: two transversals, through (±√3, ±√3, 3)
    auto t2 = transversals_of_four_lines({gens[0], gens[1], gens[2],
                                          make_line({0, 0, 3}, {1, 1, 0})},
                                         tol);
    CHECK_FALSE(t2.infinite);
    REQUIRE(t2.lines.size() == 2);
    double root = std::sqrt(3.0);
    bool hit_pos = false, hit_neg = false;
    for (const auto& L : t2.lines) {
        for (const auto& g : gens) CHECK(line_line_distance(L, g) < 1e-7);
        if (on_line(L, {root, root, 3}, 1e-7)) hit_pos = true;
        if (on_line(L, {-root, -root, 3}, 1e-7)) hit_neg = true;
    }
    CHECK(hit_pos);
    CHECK(hit_neg);

    // l4 = {(2,3,t)}: exactly one transversal, the ruling {(t,3,3t)}
    auto t1 = transversals_of_four_lines({gens[0], gens[1], gens[2],
                                          make_line({2, 3, 0}, {0, 0, 1})},
                                         tol);
    CHECK_FALSE(t1.infinite);
    REQUIRE(t1.lines.size() == 1);
    CHECK(unoriented_match(t1.lines[0], make_line({0, 3, 0}, {1, 0, 3}), 1e-7));

    // l4 translated below the saddle sheet: no intersection, no transversal
    auto t0 = transversals_of_four_lines({gens[0], gens[1], gens[2],
                                          make_line({0, 0, -100}, {1, 1, 0})},
                                         tol);
    CHECK_FALSE(t0.infinite);
    CHECK(t0.lines.empty());

    // l4 a ruling of the quadric: a whole family of transversals
    auto ti = transversals_of_four_lines({gens[0], gens[1], gens[2],
                                          make_line({2, 0, 0}, {0, 1, 2})},
                                         tol);
    CHECK(ti.infinite);
}

TEST_CASE("frozen four-line fixture has exactly the two known transversals") {
    auto tol = scene_tol();
    std::array<OrientedLine, 4> ls{
        make_line({0.3, -1.2, 0.5},
                  {0.9128709291752769, 0.36514837167011077,
                   -0.18257418583505539}),
        make_line({-0.7, 0.9, -1.1},
                  {0.16903085094570333, 0.8451542547285166, 0.50709255283711}),
        make_line({1.4, 0.2, 0.8},
                  {-0.4319342127906801, 0.25916052767440806,
                   0.8638684255813602}),
        make_line({0.1, 0.4, -0.3},
                  {0.7633700367119738, -0.5937322507759796,
                   0.25445667890399126})};
    OrientedLine expect1{{1.552374755966561, -0.038233343524549775,
                          0.465774993401852},
                         {0.07675127063750085, -0.9398162510197599,
                          -0.33294842960238286}};
    OrientedLine expect2{{0.5952770324695209, 0.7414511143744221,
                          -0.4035521710243453},
                         {0.8162903153310267, -0.5286454151113242,
                          0.23281783904707257}};

    for (auto solver : {transversals_of_four_lines_quadric,
                        transversals_of_four_lines_plucker}) {
        auto res = solver(ls, tol);
        CHECK_FALSE(res.infinite);
        REQUIRE(res.lines.size() == 2);
        for (const auto& e : {expect1, expect2}) {
            bool found = false;
            for (const auto& L : res.lines)
                if (unoriented_match(L, e, 1e-7)) found = true;
            CHECK(found);
        }
        for (const auto& L : res.lines)
            for (const auto& l : ls) CHECK(line_line_distance(L, l) < 1e-7);
    }
}

TEST_CASE("quadric fit vanishes on generators across random skew triples") {
    std::mt19937_64 rng(20240517);
    auto tol = scene_tol();
    const double samples[5] = {-1.8, -0.6, 0.0, 0.7, 1.9};
    for (int trial = 0; trial < 10000; ++trial) {
        auto ls = random_skew_triple(rng);
        Quadric Q = quadric_through_lines(ls[0], ls[1], ls[2], tol);
        double worst = 0;
        for (const auto& l : ls)
            for (double s : samples)
                worst = std::max(worst, std::abs(Q.eval(l.at(s))));
        REQUIRE(worst < 1e-9);
    }
}

TEST_CASE("quadric and Plucker transversal solvers agree on random quadruples") {
    std::mt19937_64 rng(987654321);
    auto tol = scene_tol();
    int nonzero = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto tri = random_skew_triple(rng);
        std::array<OrientedLine, 4> ls{tri[0], tri[1], tri[2],
                                       random_line(rng)};
        auto a = transversals_of_four_lines_quadric(ls, tol);
        auto b = transversals_of_four_lines_plucker(ls, tol);
        REQUIRE(a.infinite == b.infinite);
        REQUIRE(a.lines.size() == b.lines.size());
        for (const auto& la : a.lines) {
            bool found = false;
            for (const auto& lb : b.lines)
                if (unoriented_match(la, lb, 1e-7)) found = true;
            REQUIRE(found);
        }
        if (!a.lines.empty()) ++nonzero;
    }
    // the sweep must actually exercise nontrivial solutions
    CHECK(nonzero > 100);
}

TEST_CASE("transversal solving is rigid-motion equivariant") {
    std::mt19937_64 rng(424242);
    auto tol = scene_tol();
    int checked = 0;
    while (checked < 50) {
        auto tri = random_skew_triple(rng);
        std::array<OrientedLine, 4> ls{tri[0], tri[1], tri[2],
                                       random_line(rng)};
        TransversalResult base;
        try {
            base = transversals_of_four_lines(ls, tol);
        } catch (const GeomError&) {
            continue;
        }
        if (base.infinite || base.lines.empty()) continue;
        auto M = random_motion(rng);
        std::array<OrientedLine, 4> moved{M.apply(ls[0]), M.apply(ls[1]),
                                          M.apply(ls[2]), M.apply(ls[3])};
        auto res = transversals_of_four_lines(moved, tol);
        REQUIRE(res.lines.size() == base.lines.size());
        for (const auto& lb : base.lines) {
            OrientedLine mapped = M.apply(lb);
            bool found = false;
            for (const auto& lr : res.lines)
                if (unoriented_match(lr, mapped, 1e-6)) found = true;
            REQUIRE(found);
        }
        ++checked;
    }
}

TEST_CASE("rotated generators carry the quadric with them") {
    std::mt19937_64 rng(7);
    auto tol = scene_tol();
    for (int trial = 0; trial < 20; ++trial) {
        auto M = random_motion(rng);
        auto Q = quadric_through_lines(M.apply(gen1()), M.apply(gen2()),
                                       M.apply(gen3()), tol);
        // image surface = image of z = xy under M: evaluate at mapped samples
        for (double x : {-1.0, 0.3, 1.7})
            for (double y : {-0.8, 1.2})
                CHECK(std::abs(Q.eval(M.apply(Point3{x, y, x * y}))) < 1e-9);
    }
}

TEST_CASE("plucker coordinates satisfy the identity and detect incidence") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto l = random_line(rng);
        auto pl = to_plucker(l);
        CHECK(std::abs(pl.d.dot(pl.m)) < 1e-12);
    }
    // two lines through a common point have vanishing reciprocal product
    auto a = make_line({1, 2, 3}, {1, 0, 0});
    auto b = make_line({1, 2, 3}, {0, 1, 1});
    CHECK(std::abs(plucker_side(to_plucker(a), to_plucker(b))) < 1e-12);
    // skew pair: bounded away from zero
    auto c = make_line({0, 0, 1}, {0, 1, 0});
    CHECK(std::abs(plucker_side(to_plucker(a), to_plucker(c))) > 1e-3);
}

TEST_CASE("segment and point distances") {
    Segment s1{{0, 0, 0}, {1, 0, 0}};
    Segment s2{{0.5, 1, 0}, {0.5, 2, 0}};
    CHECK(segment_segment_distance(s1, s2) == doctest::Approx(1.0));
    Segment s3{{2, 0, 0}, {3, 0, 0}};  // collinear, disjoint
    CHECK(segment_segment_distance(s1, s3) == doctest::Approx(1.0));
    CHECK(point_segment_distance({0.5, 0.5, 0}, s1) == doctest::Approx(0.5));
    CHECK(point_segment_distance({-1, 0, 0}, s1) == doctest::Approx(1.0));
    CHECK(line_line_distance(make_line({0, 0, 0}, {1, 0, 0}),
                             make_line({0, 0, 2}, {0, 1, 0})) ==
          doctest::Approx(2.0));
}

TEST_CASE("coplanarity and collinearity predicates") {
    CHECK(coplanar({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, 1e-9));
    CHECK_FALSE(coplanar({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0.01}, 1e-9));
    CHECK(collinear({0, 0, 0}, {1, 1, 1}, {2.5, 2.5, 2.5}, 1e-9));
    CHECK_FALSE(collinear({0, 0, 0}, {1, 1, 1}, {2.5, 2.5, 2.51}, 1e-9));
}

TEST_CASE("aabb slab test accepts crossing segments and rejects far ones") {
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({1, 1, 1});
    CHECK(box.intersects_segment({{-1, 0.5, 0.5}, {2, 0.5, 0.5}}));
    CHECK(box.intersects_segment({{0.5, 0.5, 0.5}, {0.6, 0.6, 0.6}}));
    CHECK_FALSE(box.intersects_segment({{-1, 2, 2}, {2, 2, 2}}));
}
