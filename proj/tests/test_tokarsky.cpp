#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "billiards/io.h"
#include "billiards/tokarsky.h"

using namespace billiards;

namespace {

const std::string kData = BILLIARDS_DATA;

std::vector<Cell> star(int i, int j) {
    std::vector<Cell> out;
    for (int o = 0; o < 8; ++o) out.push_back({i, j, o});
    return out;
}

std::vector<Cell> stars(std::initializer_list<std::pair<int, int>> centres) {
    std::vector<Cell> out;
    for (auto [i, j] : centres) {
        auto s = star(i, j);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

ErrorKind compose_error(const std::vector<Cell>& cells) {
    try {
        TiledPolygon::compose(CoxeterTriangle::make(CoxeterType::T244), cells);
    } catch (const GeometryError& e) {
        return e.kind();
    }
    return ErrorKind::InputError;
}

struct Loaded {
    TiledPolygon polygon;
    Vec2d p1, p2;
};

Loaded load(const std::string& name) {
    auto f = read_cells_file(kData + "/" + name);
    auto p = TiledPolygon::compose(f.triangle, f.cells);
    return {p, f.triangle.real(*f.mark("P1")), f.triangle.real(*f.mark("P2"))};
}

double fold_unit(double u) {
    double r = std::fmod(u, 2.0);
    if (r < 0) r += 2.0;
    return r <= 1.0 ? r : 2.0 - r;
}

// Plain reflection tracer: nearest wall hit, mirror the direction, repeat.
bool float_trace_reaches(const PolygonD& q, Vec2d x, Vec2d v, const Vec2d& target, double length) {
    v = v / norm(v);
    double travelled = 0;
    int last = -1;
    while (travelled < length) {
        double best = 1e300;
        int edge = -1;
        for (std::size_t e = 0; e < q.size(); ++e) {
            if (static_cast<int>(e) == last) continue;
            Vec2d a = q.vertex(e), d = q.edge_vector(e);
            double den = cross(v, d);
            if (std::fabs(den) < 1e-15) continue;
            double t = cross(a - x, d) / den;
            double s = cross(a - x, v) / den;
            if (t > 1e-12 && s >= -1e-12 && s <= 1 + 1e-12 && t < best) best = t, edge = static_cast<int>(e);
        }
        if (edge < 0) return false;
        // passes through the target before the wall
        Vec2d r = target - x;
        double along = dot(r, v);
        if (along > 0 && along <= best + 1e-12 && std::fabs(cross(v, r)) < 1e-7) return true;
        x = x + v * best;
        travelled += best;
        Vec2d d = q.edge_vector(edge) / norm(q.edge_vector(edge));
        v = d * (2 * dot(v, d)) - v;
        last = edge;
    }
    return false;
}

}  // namespace

TEST_CASE("composition rejects bad cell sets") {
    CHECK(compose_error(stars({{0, 0}, {2, 0}})) == ErrorKind::DisconnectedInterior);
    auto ring = stars({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}});
    CHECK(compose_error(ring) == ErrorKind::HoleDetected);
    auto touching = stars({{0, 0}, {1, 1}});
    auto k = compose_error(touching);
    CHECK((k == ErrorKind::NonSimpleBoundary || k == ErrorKind::DisconnectedInterior));
    CHECK(compose_error({}) == ErrorKind::InputError);
    auto dup = star(0, 0);
    dup.push_back({0, 0, 3});
    CHECK(compose_error(dup) == ErrorKind::InputError);
}

TEST_CASE("a single star is the square around A") {
    auto p = TiledPolygon::compose(CoxeterTriangle::make(CoxeterType::T244), star(0, 0));
    CHECK(p.edge_count() == 4);
    CHECK(p.polygon().area() == doctest::Approx(4.0));
    REQUIRE(p.a_images().size() == 1);
    CHECK(p.a_images()[0].where == Location::Interior);
    auto back = TiledPolygon::from_polygon(p.triangle(), p.polygon());
    CHECK(back.cells() == p.cells());
}

TEST_CASE("shipped examples certify") {
    for (const char* name : {"tokarsky26.cells", "min24.cells"}) {
        CAPTURE(name);
        auto [p, p1, p2] = load(name);
        auto c = certify(p, p1, p2);
        CHECK(c.valid);
        for (const auto& ch : c.checks) {
            CAPTURE(ch.name);
            CHECK(ch.passed);
        }
        CHECK_FALSE(c.counterexample.has_value());
    }
    CHECK(load("tokarsky26.cells").polygon.edge_count() == 26);
    CHECK(load("min24.cells").polygon.edge_count() == 24);
}

TEST_CASE("the 22-gon fails at a non-corner vertex") {
    auto [p, p1, p2] = load("paper22.cells");
    CHECK(p.edge_count() == 22);
    auto c = certify(p, p1, p2);
    CHECK_FALSE(c.valid);
    CHECK(c.check("tiling_ok")->passed);
    CHECK(c.check("both_A_images")->passed);
    CHECK_FALSE(c.check("vertex_corners")->passed);
    REQUIRE(c.counterexample.has_value());
    const auto& t = *c.counterexample;
    CHECK(t.start == Vec2q{Rational(p1.x), Rational(p1.y)});
    CHECK(t.end == Vec2q{Rational(p2.x), Rational(p2.y)});
    Vec2d v{t.v0.x.get_d(), t.v0.y.get_d()};
    CHECK(float_trace_reaches(p.polygon(), p1, v, p2, t.length() + 1));
}

TEST_CASE("perturbed or generic points are not certified") {
    auto [p, p1, p2] = load("tokarsky26.cells");
    CertifyOptions opt;
    opt.search_on_failure = false;
    CHECK_FALSE(certify(p, p1 + Vec2d{1e-3, 0}, p2, opt).valid);
    CHECK_FALSE(certify(p, p1, p2 + Vec2d{0, 1e-3}, opt).valid);
    CHECK_FALSE(certify(p, {0.3, 0.1}, p2, opt).valid);
    CHECK_FALSE(certify(p, p1, {100, 100}, opt).check("points_interior")->passed);
}

TEST_CASE("lemma hypotheses") {
    CHECK(lemma_hypotheses(4, 2));
    CHECK(lemma_hypotheses(6, 2));
    CHECK(lemma_hypotheses(8, 5));
    CHECK_FALSE(lemma_hypotheses(3, 1));
    CHECK_FALSE(lemma_hypotheses(8, 7));
    CHECK_FALSE(lemma_hypotheses(8, 0));
}

TEST_CASE("no return in the (2,4,4) frame matches a parity count") {
    auto tri = CoxeterTriangle::make(CoxeterType::T244);
    const double L = 40;
    auto rep = verify_no_return_exact(tri, L);
    CHECK(rep.violation_count == 0);
    // A-images are the even points; the first vertex on the way is the primitive step, which is a
    // C-vertex when both coordinates are odd and a B-vertex otherwise.
    std::uint64_t images = 0, by_c = 0;
    const long R = static_cast<long>(L * tri.scale());
    for (long x = -R; x <= R; x += 2)
        for (long y = -R; y <= R; y += 2) {
            if ((x == 0 && y == 0) || x * x + y * y > R * R) continue;
            ++images;
            long g = std::gcd(std::labs(x), std::labs(y));
            if ((x / g) % 2 != 0 && (y / g) % 2 != 0) ++by_c;
        }
    CHECK(rep.images_checked == images);
    CHECK(rep.blocked_by_c == by_c);
    CHECK(rep.blocked_by_b == images - by_c);
}

TEST_CASE("no return in the other frames") {
    auto r236 = verify_no_return_exact(CoxeterTriangle::make(CoxeterType::T236), 30);
    CHECK(r236.violation_count == 0);
    CHECK(r236.images_checked > 100);
    auto r333 = verify_no_return_exact(CoxeterTriangle::make(CoxeterType::T333), 30, 4);
    CHECK(r333.violation_count > 0);
    CHECK(r333.violations.size() == 4);
    auto tri = CoxeterTriangle::make(CoxeterType::T333);
    for (const auto& v : r333.violations) {
        CHECK(tri.vertex_type(v.image) == VertexType::A);
        REQUIRE(v.folded.size() >= 2);
        auto a = tri.base_triangle()[0];
        CHECK(norm(v.folded.front() - a) < 1e-9);
        CHECK(norm(v.folded.back() - a) < 1e-9);
    }
}

TEST_CASE("folding into the (2,4,4) triangle") {
    auto tri = CoxeterTriangle::make(CoxeterType::T244);
    auto base = tri.base_triangle();
    CHECK(norm(base[0] - Vec2d{0, 0}) < 1e-15);
    CHECK(norm(base[1] - Vec2d{1, 0}) < 1e-15);
    CHECK(norm(base[2] - Vec2d{1, 1}) < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-9, 9);
    for (int k = 0; k < 2000; ++k) {
        Vec2d p{u(rng), u(rng)};
        double fx = fold_unit(p.x), fy = fold_unit(p.y);
        Vec2d expected{std::max(fx, fy), std::min(fx, fy)};
        CHECK(norm(fold_to_triangle(tri, p) - expected) < 1e-9);
    }
}

TEST_CASE("sampling finds no return when the hypotheses hold") {
    auto rep = no_return_sampling(4, 2, 300, 30, 5);
    CHECK(rep.returns == 0);
    CHECK(rep.closest_return > rep.tolerance);
    CHECK(rep.samples == 300);
    auto q = sampling_triangle(8, 5);
    auto w = require_rational(q);
    CHECK(w.angles[0] == RationalAngle(1, 8));
    CHECK(w.angles[1] == RationalAngle(5, 8));
    CHECK_THROWS_AS(sampling_triangle(8, 7), std::invalid_argument);
}

TEST_CASE("search recovers a 24-gon") {
    SearchBudget b;
    b.offsets = {{2, 0}};
    b.restarts = 2;
    b.steps = 20000;
    b.seed = 1;
    auto res = search_min_edges(CoxeterTriangle::make(CoxeterType::T244), b);
    REQUIRE_FALSE(res.empty());
    CHECK(res.front().edges <= 24);
    for (const auto& r : res) {
        CHECK(r.certificate.valid);
        CHECK(r.polygon.edge_count() == r.edges);
    }
}
