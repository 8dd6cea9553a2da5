#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "billiards/polygon.h"
#include "billiards/tokarsky.h"

using namespace billiards;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec2d> square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// Independent point-in-polygon test by winding number.
int winding(const std::vector<Vec2d>& v, const Vec2d& p) {
    int w = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        double c = cross(b - a, p - a);
        if (a.y <= p.y) {
            if (b.y > p.y && c > 0) ++w;
        } else if (b.y <= p.y && c < 0) {
            --w;
        }
    }
    return w;
}

ErrorKind kind_of(const std::vector<Vec2d>& v) {
    try {
        PolygonD::validate(v);
    } catch (const GeometryError& e) {
        return e.kind();
    }
    return ErrorKind::InputError;
}

}  // namespace

TEST_CASE("validation rejects degenerate input") {
    CHECK(kind_of({{0, 0}, {1, 0}}) == ErrorKind::TooFewVertices);
    CHECK(kind_of({{0, 0}, {1, 0}, {1, 0}, {0, 1}}) == ErrorKind::SelfIntersection);
    CHECK(kind_of({{0, 0}, {1, 0}, {0, 1}, {1, 1}}) == ErrorKind::SelfIntersection);
    CHECK(kind_of({{0, 0}, {1, 0}, {2, 0}, {1, 1}}) == ErrorKind::DegenerateVertex);
    CHECK(kind_of({{0, 0}, {2, 0}, {1, 0}, {1, 1}}) != ErrorKind::InputError);
    CHECK_NOTHROW(PolygonD::validate(square()));
}

TEST_CASE("orientation is normalised to counterclockwise") {
    auto cw = square();
    std::reverse(cw.begin(), cw.end());
    auto p = PolygonD::validate(cw);
    CHECK(p.twice_area() > 0);
    CHECK(p.area() == doctest::Approx(1.0));
    auto q = PolygonQ::validate({{Rational(0), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
    CHECK(q.twice_area() == Rational(1));
}

TEST_CASE("angles and edges") {
    auto p = PolygonD::validate({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(p.interior_angle(3) == doctest::Approx(3 * kPi / 2));
    CHECK(p.interior_angle(0) == doctest::Approx(kPi / 2));
    CHECK(p.edge_angle(1) == doctest::Approx(kPi / 2));
    CHECK(p.diameter() == doctest::Approx(std::sqrt(8.0)));
    double sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p.interior_angle(i);
    CHECK(sum == doctest::Approx((p.size() - 2) * kPi));
}

TEST_CASE("point location agrees with a winding-number oracle") {
    std::vector<Vec2d> v{{0, 0}, {4, 0}, {4, 3}, {2, 1}, {0, 3}};
    auto p = PolygonD::validate(v);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1, 5), uy(-1, 4);
    for (int k = 0; k < 5000; ++k) {
        Vec2d x{ux(rng), uy(rng)};
        bool inside = winding(v, x) != 0;
        auto loc = p.locate(x);
        if (loc.where == Location::Edge || loc.where == Location::Vertex) continue;
        CHECK((loc.where == Location::Interior) == inside);
    }
    CHECK(p.locate({2, 0}).where == Location::Edge);
    CHECK(p.locate({2, 0}).index == 0);
    CHECK(p.locate({4, 3}).where == Location::Vertex);
    CHECK(p.locate({4, 3}).index == 2);
    CHECK(p.locate({2, 2}).where == Location::Outside);
}

TEST_CASE("exact point location") {
    auto p = PolygonQ::validate({{Rational(0), Rational(0)}, {Rational(3), Rational(0)}, {Rational(0), Rational(3)}});
    CHECK(p.locate({Rational(1), Rational(2)}).where == Location::Edge);
    CHECK(p.locate({Rational(1), Rational(1999, 1000)}).where == Location::Interior);
    CHECK(p.locate({Rational(1), Rational(2001, 1000)}).where == Location::Outside);
}

TEST_CASE("rationality of common polygons") {
    auto sq = rationality(PolygonD::validate(square()));
    REQUIRE(sq);
    CHECK(sq->lcm_den == 2);
    auto tri = sampling_triangle(8, 5);
    auto w = rationality(tri);
    REQUIRE(w);
    CHECK(w->lcm_den == 8);
    CHECK(w->angles[0] == RationalAngle(1, 8));
    CHECK(w->angles[1] == RationalAngle(5, 8));
    CHECK(w->angles[2] == RationalAngle(1, 4));
    auto irr = PolygonD::validate({{0, 0}, {1, 0}, {0.3, 0.77}});
    CHECK_FALSE(rationality(irr).has_value());
    CHECK_THROWS_AS(require_rational(irr), GeometryError);
}

TEST_CASE("rotated polygons keep an irrational frame") {
    const double t = 0.3;
    std::vector<Vec2d> v;
    for (auto p : square()) v.push_back({p.x * std::cos(t) - p.y * std::sin(t), p.x * std::sin(t) + p.y * std::cos(t)});
    auto w = rationality(PolygonD::validate(v));
    REQUIRE(w);
    CHECK(w->frame == doctest::Approx(t));
    CHECK(w->lcm_den == 2);
    CHECK(w->edge_axes[0] == RationalAngle(0, 1));
    CHECK(w->edge_axes[1] == RationalAngle(1, 2));
}

TEST_CASE("edge reflections fix their edges") {
    auto q = sampling_triangle(8, 5);
    auto w = require_rational(q);
    for (std::size_t e = 0; e < q.size(); ++e) {
        auto g = edge_reflection(w, e);
        CHECK(g.is_reflection());
        Vec2d d = q.edge_vector(e);
        Vec2d r = apply(g, d, w.frame);
        CHECK(norm(r - d) < 1e-12);
    }
}

TEST_CASE("removable vertices") {
    auto q = sampling_triangle(8, 5);
    auto w = require_rational(q);
    CHECK(removable_order(w, 0) == 8);
    CHECK_FALSE(removable_order(w, 1).has_value());
    CHECK(removable_order(w, 2) == 4);
    auto sq = require_rational(PolygonD::validate(square()));
    for (std::size_t i = 0; i < 4; ++i) CHECK(removable_order(sq, i) == 2);
}
