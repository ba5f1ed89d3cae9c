#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyplan/errors.hpp"
#include "polyplan/geometry.hpp"
#include "polyplan/rng.hpp"
#include "support/fixtures.hpp"

using namespace polyplan;

namespace {

// Two-vertex edge wrapped in a thin triangle so faces exist; face 0 runs
// (0,0) -> (2,0).
PolygonEnvironment edge_env() {
    std::vector<Vec2> v{{0.0, 0.0}, {2.0, 0.0}, {1.0, -1.0}};
    return PolygonEnvironment(v, {{0, 1, 2}}, 0.0);
}

}  // namespace

TEST_CASE("projection onto a face") {
    const auto env = edge_env();
    CHECK(env.project_onto_face(Vec2(1.0, 1.0), 0) == doctest::Approx(1.0));
    CHECK(env.project_onto_face(Vec2(-1.0, 1.0), 0) == doctest::Approx(-1.0));
    CHECK(env.project_onto_face(Vec2(3.0, 0.0), 0) == doctest::Approx(3.0));
}

TEST_CASE("distance to a face covers all three cases") {
    const auto env = edge_env();
    CHECK(env.distance_to_face(Vec2(1.0, 1.0), 0) == doctest::Approx(1.0));
    CHECK(env.distance_to_face(Vec2(-1.0, 1.0), 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(env.distance_to_face(Vec2(3.0, 0.0), 0) == doctest::Approx(1.0));
}

TEST_CASE("distance to a face matches brute-force segment sampling") {
    const auto env = fixtures::square_env(Vec2(0.3, -0.4), 1.7);
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 p(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0));
        for (int k = 0; k < env.face_count(); ++k) {
            const Face& f = env.face(k);
            const Vec2& a = env.vertex(f.v_first);
            const Vec2& b = env.vertex(f.v_second);
            double best = 1e300;
            const int samples = 10000;
            for (int i = 0; i <= samples; ++i) {
                const Vec2 s = a + (b - a) * (static_cast<double>(i) / samples);
                best = std::min(best, (p - s).norm());
            }
            CHECK(env.distance_to_face(p, k) == doctest::Approx(best).epsilon(0.0).scale(0.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("distance is continuous under small perturbations") {
    const auto env = fixtures::square_env(Vec2(0.0, 0.0), 1.0);
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec2 p(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        const Vec2 dp(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const Vec2 q = p + 1e-7 * dp;
        for (int k = 0; k < env.face_count(); ++k) {
            CHECK(env.distance_to_face(p, k) >= 0.0);
            CHECK(std::fabs(env.distance_to_face(p, k) - env.distance_to_face(q, k)) <= 2e-7);
        }
    }
}

TEST_CASE("vertex convexity") {
    const auto square = fixtures::square_env(Vec2(0.0, 0.0), 1.0);
    for (int i = 0; i < 4; ++i) CHECK(square.vertex_convexity(i) == VertexKind::Convex);

    const auto l_shape = fixtures::l_shape_env();
    CHECK(l_shape.vertex_convexity(3) == VertexKind::Reflex);
    for (int i : {0, 1, 2, 4, 5}) CHECK(l_shape.vertex_convexity(i) == VertexKind::Convex);

    // Collinear triple rejected at load time.
    std::vector<Vec2> v{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(PolygonEnvironment(v, {{0, 1, 2, 3, 4}}, 0.0), ValidationError);
}

TEST_CASE("face normals point outward") {
    const auto env = fixtures::l_shape_env();
    for (int k = 0; k < env.face_count(); ++k) {
        const Face& f = env.face(k);
        const Vec2 mid = 0.5 * (env.vertex(f.v_first) + env.vertex(f.v_second));
        const Vec2 probe = mid + 1e-6 * f.normal;
        CHECK_FALSE(env.inside_polygon(probe, env.polygon_of_vertex(f.v_first)));
        CHECK(std::fabs(f.tangent.norm() - 1.0) <= 1e-12);
        CHECK(std::fabs(f.normal.norm() - 1.0) <= 1e-12);
        CHECK(std::fabs(f.tangent.dot(f.normal)) <= 1e-12);
        CHECK(f.length > 0.0);
    }
}

TEST_CASE("point freeness") {
    const auto env = fixtures::square_env(Vec2(0.0, 0.0), 1.0);
    CHECK(env.point_free(Vec2(5.0, 5.0)));
    CHECK_FALSE(env.point_free(Vec2(0.2, 0.2)));
    CHECK_FALSE(env.point_free(Vec2(0.5, 0.0)));  // exactly on an edge
}

TEST_CASE("inflation by zero radius is the identity") {
    const auto env = fixtures::square_env(Vec2(0.25, 0.5), 1.0);
    const auto inflated = inflate_environment(env, 0.0);
    REQUIRE(inflated.vertex_count() == env.vertex_count());
    for (int i = 0; i < env.vertex_count(); ++i) {
        CHECK((inflated.vertex(i) - env.vertex(i)).norm() == 0.0);
    }
}

TEST_CASE("miter inflation of a square grows the side by 2R") {
    const auto env = fixtures::square_env(Vec2(0.0, 0.0), 1.0);
    const auto inflated = inflate_environment(env, 0.1);
    REQUIRE(inflated.vertex_count() == 4);
    Vec2 lo, hi;
    inflated.bounds(lo, hi);
    CHECK(lo.x() == doctest::Approx(-0.6));
    CHECK(lo.y() == doctest::Approx(-0.6));
    CHECK(hi.x() == doctest::Approx(0.6));
    CHECK(hi.y() == doctest::Approx(0.6));
}

TEST_CASE("inflation that makes obstacles overlap is rejected") {
    // Unit squares 0.15 m apart; inflating each by 0.1 m closes the gap.
    std::vector<Vec2> v{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0},
                        {1.15, 0.0}, {2.15, 0.0}, {2.15, 1.0}, {1.15, 1.0}};
    const PolygonEnvironment env(v, {{0, 1, 2, 3}, {4, 5, 6, 7}}, 0.0);
    CHECK_THROWS_AS(inflate_environment(env, 0.1), ValidationError);
}

TEST_CASE("inflated boundary keeps at least R from the original boundary") {
    const auto env = fixtures::l_shape_env();
    const double R = 0.17;
    const auto inflated = inflate_environment(env, R);
    std::vector<Vec2> probes = env.vertices();
    for (int k = 0; k < env.face_count(); ++k) {
        const Face& f = env.face(k);
        probes.push_back(0.5 * (env.vertex(f.v_first) + env.vertex(f.v_second)));
    }
    for (const Vec2& p : probes) {
        CHECK(inflated.min_distance(p) >= R - 1e-9);
    }
}

TEST_CASE("clearance validation between polygons") {
    std::vector<Vec2> v{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0},
                        {1.5, 0.0}, {2.5, 0.0}, {2.5, 1.0}, {1.5, 1.0}};
    CHECK_NOTHROW(PolygonEnvironment(v, {{0, 1, 2, 3}, {4, 5, 6, 7}}, 0.4));
    CHECK_THROWS_AS(PolygonEnvironment(v, {{0, 1, 2, 3}, {4, 5, 6, 7}}, 0.6), ValidationError);
}

TEST_CASE("structural validation failures") {
    // Clockwise ring.
    std::vector<Vec2> cw{{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(PolygonEnvironment(cw, {{0, 1, 2, 3}}, 0.0), ValidationError);
    // Self-intersecting bowtie.
    std::vector<Vec2> bow{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(PolygonEnvironment(bow, {{0, 1, 2, 3}}, 0.0), ValidationError);
    // Out-of-range index.
    std::vector<Vec2> tri{{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}};
    CHECK_THROWS_AS(PolygonEnvironment(tri, {{0, 1, 7}}, 0.0), ValidationError);
    // Vertex shared between rings.
    std::vector<Vec2> shared{{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}, {3.0, 0.0}, {4.0, 0.0}};
    CHECK_THROWS_AS(PolygonEnvironment(shared, {{0, 1, 2}, {3, 4, 2}}, 0.0), ValidationError);
}

TEST_CASE("segment freeness against obstacles") {
    const auto env = fixtures::square_env(Vec2(0.0, 0.0), 1.0);
    CHECK(segment_free(env, Vec2(-2.0, 2.0), Vec2(2.0, 2.0)));
    CHECK_FALSE(segment_free(env, Vec2(-2.0, 0.0), Vec2(2.0, 0.0)));
    CHECK_FALSE(segment_free(env, Vec2(-2.0, 0.5), Vec2(2.0, 0.5)));  // grazes the top edge
}
