#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "billiards/io.h"
#include "billiards/render.h"

using namespace billiards;

namespace {

const std::string kData = BILLIARDS_DATA;
constexpr double kPi = std::numbers::pi;

ErrorKind parse_error(const std::string& text) {
    try {
        parse_polygon_file(text);
    } catch (const GeometryError& e) {
        return e.kind();
    }
    return ErrorKind::TooFewVertices;  // sentinel: no error
}

bool cells_rejected(const std::string& text) {
    try {
        parse_cells_file(text);
    } catch (const GeometryError& e) {
        return e.kind() == ErrorKind::InputError;
    }
    return false;
}

// Minimal XML check: one root <svg>, every opened tag closed in order, no stray '<' in text.
bool well_formed(const std::string& svg) {
    std::vector<std::string> stack;
    std::size_t roots = 0, i = 0;
    while ((i = svg.find('<', i)) != std::string::npos) {
        std::size_t j = svg.find('>', i);
        if (j == std::string::npos) return false;
        std::string tag = svg.substr(i + 1, j - i - 1);
        i = j + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        if (tag.find('<') != std::string::npos) return false;
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
        if (stack.empty()) ++roots;
        if (tag.back() != '/') stack.push_back(name);
        if (stack.empty() && name != "svg") return false;
        if (stack.size() == 1 && stack[0] != "svg") return false;
    }
    return stack.empty() && roots == 1;
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t i = s.find(needle); i != std::string::npos; i = s.find(needle, i + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("polygon files round trip") {
    auto f = read_polygon_file(kData + "/square.poly");
    REQUIRE(f.exact);
    REQUIRE(f.polygon_exact);
    REQUIRE(f.mark("A"));
    CHECK(f.mark("A")->exact == Vec2q{Rational(1, 4), Rational(1, 4)});
    auto text = write_polygon_file(*f.polygon_exact, f.marks, f.angles);
    auto g = parse_polygon_file(text);
    CHECK(g.exact);
    CHECK(g.literals == f.literals);
    CHECK(g.marks.size() == f.marks.size());
    CHECK(g.angles.size() == f.angles.size());

    auto tri = read_polygon_file(kData + "/tri-8.poly");
    CHECK_FALSE(tri.exact);
    auto h = parse_polygon_file(write_polygon_file(tri.polygon, tri.marks, tri.angles));
    for (std::size_t i = 0; i < tri.polygon.size(); ++i) CHECK(h.polygon.vertex(i) == tri.polygon.vertex(i));
}

TEST_CASE("polygon file errors") {
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\n") == ErrorKind::TooFewVertices);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 x\n") == ErrorKind::InputError);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\nq 1\n") == ErrorKind::InputError);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\na 0 1 3\n") == ErrorKind::InputError);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\na 0 1 2\n") == ErrorKind::TooFewVertices);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\np X 2 2\n") == ErrorKind::PointOutsidePolygon);
    CHECK(parse_error("v 0 0\nv 1 0\n") == ErrorKind::TooFewVertices);
    CHECK(parse_error("v 0 0\nv 1 0\nv 0 1\nv 1 1\n") == ErrorKind::SelfIntersection);
    try {
        parse_polygon_file("v 0 0\nv 1 0\nv 0 1\n\nbogus\n");
        FAIL("expected an error");
    } catch (const GeometryError& e) {
        CHECK(std::string(e.what()).find("5") != std::string::npos);
    }
}

TEST_CASE("cells files") {
    auto f = read_cells_file(kData + "/tokarsky26.cells");
    CHECK(f.triangle.type == CoxeterType::T244);
    CHECK(f.cells.size() == 28);
    auto g = parse_cells_file(write_cells_file(f, "copy"));
    CHECK(g.cells == f.cells);
    CHECK(g.marks == f.marks);
    CHECK(cells_rejected("cell 0 0\n"));
    CHECK(cells_rejected("type 2,5,5\ncell 0 0 0\n"));
    CHECK(cells_rejected("cell 0 0 8\n"));
    CHECK(cells_rejected("cell a b c\n"));
    CHECK(cells_rejected("p P1 0\n"));
}

TEST_CASE("polygon and cells data agree") {
    for (const char* stem : {"tokarsky26", "min24", "paper22"}) {
        CAPTURE(stem);
        auto cells = read_cells_file(kData + "/" + std::string(stem) + ".cells");
        auto poly = read_polygon_file(kData + "/" + std::string(stem) + ".poly");
        auto t = TiledPolygon::compose(cells.triangle, cells.cells);
        REQUIRE(poly.polygon_exact);
        auto pe = t.polygon_exact();
        REQUIRE(pe);
        REQUIRE(pe->size() == poly.polygon_exact->size());
        // same vertex cycle up to rotation
        std::size_t shift = 0;
        while (shift < pe->size() && !(pe->vertex(shift) == poly.polygon_exact->vertex(0))) ++shift;
        REQUIRE(shift < pe->size());
        for (std::size_t i = 0; i < pe->size(); ++i)
            CHECK(pe->vertex((i + shift) % pe->size()) == poly.polygon_exact->vertex(i));
        for (const char* name : {"P1", "P2"}) {
            auto lp = cells.mark(name);
            REQUIRE(lp);
            REQUIRE(poly.mark(name));
            CHECK(*cells.triangle.exact(*lp) == poly.mark(name)->exact);
        }
    }
}

TEST_CASE("reports and numbers") {
    Report r("demo");
    r.add("edges", std::size_t{4}).add("rational", true).add("x", 0.1);
    CHECK(r.str() == "[demo]\nedges: 4\nrational: yes\nx: 0.1\n");
    CHECK(format_number(1.0 / 3) == "0.3333333333333333");
    CHECK(std::stod(format_number(kPi)) == kPi);
}

TEST_CASE("figures are well-formed SVG") {
    auto sq = read_polygon_file(kData + "/square.poly");
    auto s1 = render_polygon(sq.polygon, sq.marks);
    CHECK(well_formed(s1));
    CHECK(s1.find("<polygon") != std::string::npos);
    CHECK(count(s1, "<circle") == sq.marks.size());

    auto w = require_rational(sq.polygon);
    ShootOptions<double> opt;
    opt.max_length = 5;
    auto t = shoot(sq.polygon, w, {{0.25, 0.25}, {std::cos(0.4), std::sin(0.4)}}, opt);
    auto s2 = render_trajectory(sq.polygon, t, sq.marks);
    CHECK(well_formed(s2));

    auto tri = read_polygon_file(kData + "/tri-8.poly");
    auto s3 = render_unfolding_star(tri.polygon, 0, 0.3);
    CHECK(well_formed(s3));
    CHECK(count(s3, "<polygon") >= 16);
    CHECK_THROWS_AS(render_unfolding_star(tri.polygon, 1, 0.3), GeometryError);

    auto cells = read_cells_file(kData + "/paper22.cells");
    auto tp = TiledPolygon::compose(cells.triangle, cells.cells);
    auto s4 = render_tiling(tp, {});
    CHECK(well_formed(s4));
    CHECK(count(s4, "<polygon") >= cells.cells.size());

    CHECK(parse_figure_kind("unfolding-star") == FigureKind::UnfoldingStar);
    CHECK_FALSE(parse_figure_kind("histogram"));
    CHECK_FALSE(well_formed("<svg><g></svg></g>"));
}

TEST_CASE("star copies fill a full turn around the vertex") {
    auto q = read_polygon_file(kData + "/tri-8.poly").polygon;
    auto copies = star_copies(q, 0);
    REQUIRE(copies.size() == 16);
    double turn = 0;
    for (std::size_t k = 0; k < copies.size(); ++k) {
        const auto& c = copies[k];
        const auto& next = copies[(k + 1) % copies.size()];
        CHECK(norm(c[0]) < 1e-12);
        CHECK(std::fabs(std::fabs(cross(c[1] - c[0], c.back() - c[0])) / 2 - q.area()) < 1e-12);
        // consecutive copies share an edge through the vertex
        bool shared = norm(c[1] - next[1]) < 1e-12 || norm(c[1] - next.back()) < 1e-12 ||
                      norm(c.back() - next[1]) < 1e-12 || norm(c.back() - next.back()) < 1e-12;
        CHECK(shared);
        turn += std::fabs(std::atan2(cross(c[1], c.back()), dot(c[1], c.back())));
    }
    CHECK(turn == doctest::Approx(2 * kPi).epsilon(1e-12));
    auto sq = read_polygon_file(kData + "/square.poly").polygon;
    CHECK(star_copies(sq, 2).size() == 4);
}
