#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "billiards/tokarsky.h"
#include "billiards/unfolding.h"

using namespace billiards;

namespace {

constexpr double kPi = std::numbers::pi;

using M = std::array<double, 4>;

// Closure of the edge reflection matrices, built numerically with tolerance dedupe.
std::size_t numeric_group_order(const PolygonD& q) {
    std::vector<M> gens;
    for (std::size_t e = 0; e < q.size(); ++e) {
        double a = q.edge_angle(e);
        gens.push_back({std::cos(2 * a), std::sin(2 * a), std::sin(2 * a), -std::cos(2 * a)});
    }
    auto same = [](const M& a, const M& b) {
        for (int i = 0; i < 4; ++i)
            if (std::fabs(a[i] - b[i]) > 1e-9) return false;
        return true;
    };
    std::vector<M> all{{1, 0, 0, 1}};
    for (std::size_t i = 0; i < all.size() && all.size() < 5000; ++i)
        for (const auto& g : gens) {
            M a = all[i];
            M p{a[0] * g[0] + a[1] * g[2], a[0] * g[1] + a[1] * g[3], a[2] * g[0] + a[3] * g[2], a[2] * g[1] + a[3] * g[3]};
            bool found = false;
            for (const auto& x : all)
                if (same(x, p)) { found = true; break; }
            if (!found) all.push_back(p);
        }
    return all.size();
}

// Vertex count from angles alone: a vertex of reduced angle pπ/q lifts to |Γ|/(2q) cone points of angle 2πp.
long expected_vertices(const RationalityWitness& w, std::size_t order) {
    long v = 0;
    for (const auto& a : w.angles) v += static_cast<long>(order) / (2 * a.den());
    return v;
}

std::vector<PolygonD> samples() {
    std::vector<PolygonD> out;
    out.push_back(PolygonD::validate({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    out.push_back(PolygonD::validate({{0, 0}, {1, 0}, {0, 1}}));
    out.push_back(sampling_triangle(8, 5));
    out.push_back(sampling_triangle(4, 2));
    out.push_back(sampling_triangle(6, 1));
    out.push_back(sampling_triangle(5, 2));
    out.push_back(sampling_triangle(7, 3));
    out.push_back(sampling_triangle(12, 7));
    out.push_back(PolygonD::validate({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
    out.push_back(PolygonD::validate({{0, 0}, {1, 0}, {1.5, std::sqrt(3) / 2}, {1, std::sqrt(3)}, {0, std::sqrt(3)},
                                      {-0.5, std::sqrt(3) / 2}}));
    return out;
}

}  // namespace

TEST_CASE("group order matches a numeric closure and twice the lcm") {
    for (const auto& q : samples()) {
        auto w = require_rational(q);
        auto g = generate_group(w);
        CAPTURE(q.size());
        CAPTURE(w.lcm_den);
        CHECK(g.order() == numeric_group_order(q));
        CHECK(g.order() == static_cast<std::size_t>(2 * w.lcm_den));
        CHECK(g[0] == DihedralElement::identity());
    }
}

TEST_CASE("group tables are consistent") {
    auto g = generate_group(sampling_triangle(8, 5));
    for (std::size_t a = 0; a < g.order(); ++a) {
        CHECK(g.mul(static_cast<int>(a), g.inv(static_cast<int>(a))) == 0);
        for (std::size_t b = 0; b < g.order(); ++b)
            CHECK(g[g.mul(static_cast<int>(a), static_cast<int>(b))] == g[a] * g[b]);
    }
    CHECK(g.index_of(DihedralElement::rot(1, 3)) == -1);
}

TEST_CASE("square unfolds to a torus") {
    auto s = unfold(PolygonQ::validate({{Rational(0), Rational(0)}, {Rational(1), Rational(0)},
                                        {Rational(1), Rational(1)}, {Rational(0), Rational(1)}}));
    CHECK(s.copies() == 4);
    CHECK(s.genus() == 1);
    CHECK(s.euler_characteristic() == 0);
    for (const auto& c : s.singularities()) CHECK(c.cone_multiple == 1);
    CHECK(s.copies_twice_area() == Rational(8));
    CHECK(s.gluing_consistent());
    CHECK(s.gauss_bonnet_holds());
}

TEST_CASE("pi/8, 5pi/8 triangle unfolds to genus 3") {
    auto s = unfold(sampling_triangle(8, 5));
    CHECK(s.copies() == 16);
    std::vector<std::int64_t> cones;
    for (const auto& c : s.singularities()) cones.push_back(c.cone_multiple);
    CHECK(cones == std::vector<std::int64_t>{1, 5, 1, 1});
    CHECK(s.genus() == 3);
    CHECK(s.singularities()[0].removable);
    CHECK_FALSE(s.singularities()[1].removable);
    CHECK(s.gauss_bonnet_holds());
}

TEST_CASE("surface invariants on sample polygons") {
    for (const auto& q : samples()) {
        auto s = unfold(q);
        CAPTURE(q.size());
        CHECK(s.gluing_consistent());
        CHECK(s.gauss_bonnet_holds());
        CHECK(s.vertices_count() == expected_vertices(s.witness(), s.copies()));
        long cone_sum = 0;
        for (const auto& c : s.singularities()) cone_sum += c.cone_multiple - 1;
        CHECK(cone_sum == 2 * s.genus() - 2);
        CHECK(s.copies_twice_area() == doctest::Approx(2 * q.area() * s.copies()));
        // every corner copy belongs to exactly one singularity
        std::size_t wedges = 0;
        for (const auto& c : s.singularities()) wedges += c.wedges;
        CHECK(wedges == s.copies() * q.size());
    }
}

TEST_CASE("gluing pairs parallel edges of equal length") {
    auto s = unfold(sampling_triangle(8, 5));
    const auto& q = s.base();
    for (int sheet = 0; sheet < static_cast<int>(s.copies()); ++sheet) {
        auto vs = s.copy_vertices(sheet);
        for (int e = 0; e < static_cast<int>(q.size()); ++e) {
            auto p = s.glued({sheet, e});
            CHECK(p.edge == e);
            CHECK(p.sheet != sheet);
            CHECK(s.glued(p) == EdgeSlot{sheet, e});
            auto ws = s.copy_vertices(p.sheet);
            Vec2d d1 = vs[(e + 1) % q.size()] - vs[e];
            Vec2d d2 = ws[(e + 1) % q.size()] - ws[e];
            CHECK(norm(d1 - d2) < 1e-12);  // the partner copy is mirrored, so the vectors agree
        }
    }
}

TEST_CASE("fibres and the group action") {
    auto s = unfold(sampling_triangle(8, 5));
    Vec2d a{0.4, 0.1};
    auto f = s.fiber(a);
    CHECK(f.size() == 16);
    std::set<SurfacePoint<double>> distinct(f.begin(), f.end());
    CHECK(distinct.size() == 16);
    auto x = s.lift_point(a, DihedralElement::identity());
    for (std::size_t i = 0; i < s.copies(); ++i) {
        auto y = s.group_action(s.group()[i], x);
        CHECK(y.sheet == s.group()[i]);
        CHECK(norm(y.base - a) == 0);
    }
}

TEST_CASE("twist through a removable point") {
    CHECK(twist_through_removable(8) == DihedralElement::rot(1, 1));
    CHECK(twist_through_removable(5).is_reflection());
    for (int n = 2; n < 12; ++n) CHECK(twist_through_removable(n) == twist(n));
}
