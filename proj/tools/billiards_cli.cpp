// Command-line front end. Exit codes: 0 success or consistent, 1 counterexample or invalid, 2 input error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "billiards/illumination.h"
#include "billiards/io.h"
#include "billiards/render.h"
#include "billiards/tokarsky.h"
#include "billiards/unfolding.h"

using namespace billiards;

namespace {

constexpr int kOk = 0, kCounterexample = 1, kInputError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

VertexPolicy parse_policy(const std::string& s) {
    if (s == "stop") return VertexPolicy::StopAtVertex;
    if (s == "continue") return VertexPolicy::ContinueRemovable;
    throw InputError("--policy must be stop or continue");
}

CoxeterTriangle parse_tiling(const std::string& s) {
    auto t = parse_coxeter(s);
    if (!t) throw InputError("unknown tiling " + s + " (expected 2,4,4, 2,3,6 or 3,3,3)");
    return CoxeterTriangle::make(*t);
}

// A marked point may be a coordinate pair or a name from the file.
Vec2q parse_point_q(const std::string& s, const std::vector<MarkedPoint>& marks) {
    for (const auto& m : marks)
        if (m.name == s) return m.exact;
    auto parts = split(s, ',');
    if (parts.size() != 2) throw InputError("expected x,y or a marked point name: " + s);
    try {
        return {parse_rational(parts[0]), parse_rational(parts[1])};
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

Vec2d parse_point(const std::string& s, const std::vector<MarkedPoint>& marks) {
    return to_double(parse_point_q(s, marks));
}

std::pair<Vec2d, Vec2d> parse_pair(const std::string& s, const std::vector<MarkedPoint>& marks) {
    auto parts = split(s, ':');
    if (parts.size() != 2) {
        auto names = split(s, ',');
        if (names.size() == 2) return {parse_point(names[0], marks), parse_point(names[1], marks)};
        throw InputError("--pair expects NAME,NAME or x,y:x,y");
    }
    return {parse_point(parts[0], marks), parse_point(parts[1], marks)};
}

std::string cone_list(const UnfoldedSurface<double>& s) {
    std::string out;
    for (const auto& g : s.singularities()) {
        if (!out.empty()) out += ",";
        out += g.cone_multiple == 1 ? std::string("2π") : std::to_string(2 * g.cone_multiple) + "π";
    }
    return out;
}

struct TiledInput {
    TiledPolygon polygon;
    std::vector<MarkedPoint> marks;
};

TiledInput load_tiled(const std::string& path, const std::string& tiling) {
    TiledInput in;
    if (ends_with(path, ".cells")) {
        auto f = read_cells_file(path);
        in.polygon = TiledPolygon::compose(f.triangle, f.cells);
        for (const auto& [name, p] : f.marks) {
            MarkedPoint m;
            m.name = name;
            m.point = f.triangle.real(p);
            if (auto e = f.triangle.exact(p)) m.exact = *e;
            else m.exact = {Rational(m.point.x), Rational(m.point.y)};
            in.marks.push_back(m);
        }
    } else {
        auto f = read_polygon_file(path);
        in.polygon = TiledPolygon::from_polygon(parse_tiling(tiling), f.polygon);
        in.marks = f.marks;
    }
    return in;
}

// Offset of the direction grid in [0, 1), fixed by the seed.
double seeded_phase(std::uint64_t seed) { return static_cast<double>(std::mt19937_64(seed)() >> 11) * 0x1.0p-53; }

// --- subcommands -----------------------------------------------------------------------------

int cmd_validate(const std::string& path, std::int64_t max_den) {
    PolygonFile f;
    try {
        f = read_polygon_file(path);
    } catch (const GeometryError& e) {
        if (e.kind() == ErrorKind::InputError) throw;
        Report r("validate");
        r.add("file", path).add("valid", false).add("error", e.what());
        std::cout << r.str();
        return kCounterexample;
    }
    const auto& q = f.polygon;
    auto w = rationality(q, max_den);
    Report r("validate");
    r.add("file", path).add("valid", true).add("edges", q.size()).add("rational", w.has_value());
    if (w) {
        r.add("N", static_cast<long long>(w->lcm_den));
        std::string angles;
        for (const auto& a : w->angles) angles += (angles.empty() ? "" : ",") + a.str();
        r.add("angles", angles);
    }
    r.add("backend", f.exact ? "exact" : "float").add("area", q.area()).add("diameter", q.diameter());
    for (const auto& m : f.marks) r.add("point " + m.name, format_point(m.point));
    std::cout << r.str();
    std::cout << q.size() << " edges, " << (w ? "rational, N=" + std::to_string(w->lcm_den) : std::string("not rational"))
              << "\n";
    return kOk;
}

int cmd_unfold(const std::string& path) {
    auto f = read_polygon_file(path);
    auto s = unfold(f.polygon);
    Report r("unfold");
    r.add("file", path)
        .add("copies", s.copies())
        .add("N", static_cast<long long>(s.witness().lcm_den))
        .add("cone angles", cone_list(s))
        .add("vertices", static_cast<long long>(s.vertices_count()))
        .add("edges", static_cast<long long>(s.edges_count()))
        .add("faces", static_cast<long long>(s.faces_count()))
        .add("euler characteristic", static_cast<long long>(s.euler_characteristic()))
        .add("genus", static_cast<long long>(s.genus()))
        .add("gauss-bonnet", s.gauss_bonnet_holds())
        .add("gluing consistent", s.gluing_consistent())
        .add("surface area", 0.5 * s.copies_twice_area());
    std::size_t removable = 0;
    for (const auto& g : s.singularities()) removable += g.removable;
    r.add("removable singularities", removable);
    std::cout << r.str();
    std::cout << s.copies() << " copies, cone angles " << cone_list(s) << ", genus " << s.genus() << "\n";
    return s.gauss_bonnet_holds() && s.gluing_consistent() ? kOk : kCounterexample;
}

struct ShootArgs {
    std::string path, from, dir, svg;
    double angle = std::numeric_limits<double>::quiet_NaN();
    double length = 10.0;
    std::string policy = "stop";
    bool exact = false;
};

template <class T>
void report_trajectory(Report& r, const Trajectory<T>& t) {
    r.add("termination", termination_name(t.termination))
        .add("bounces", t.bounces.size())
        .add("length", t.length())
        .add("end", format_point(to_double(t.end)));
    if (t.hit_vertex >= 0) r.add("hit vertex", t.hit_vertex);
}

int cmd_shoot(const ShootArgs& a) {
    auto f = read_polygon_file(a.path);
    Report r("shoot");
    r.add("file", a.path);
    if (a.exact) {
        if (!f.polygon_exact) throw InputError("--exact needs integer or p/q vertex literals");
        if (a.dir.empty()) throw InputError("--exact needs --dir with rational components");
        Vec2q start = parse_point_q(a.from, f.marks), dir = parse_point_q(a.dir, {});
        auto s = unfold(*f.polygon_exact);
        ShootOptions<Rational> opt;
        opt.max_length = a.length;
        opt.policy = parse_policy(a.policy);
        auto t = shoot(*f.polygon_exact, s.witness(), {start, dir}, opt);
        r.add("backend", "exact");
        report_trajectory(r, t);
        auto g = straighten(t, s);
        r.add("endpoint sheet", g.endpoint_sheet.str()).add("direction deviation", g.max_direction_deviation);
        std::cout << r.str();
        if (!a.svg.empty()) {
            Trajectory<double> td;
            td.start = to_double(t.start);
            td.end = to_double(t.end);
            for (const auto& b : t.bounces) td.bounces.push_back({to_double(b.t), to_double(b.q), b.edge, b.vertex, b.g, to_double(b.v)});
            write_text_file(a.svg, render_trajectory(f.polygon, td, f.marks));
        }
        return kOk;
    }
    Vec2d start = parse_point(a.from, f.marks);
    Vec2d dir;
    if (!a.dir.empty()) dir = parse_point(a.dir, {});
    else if (!std::isnan(a.angle)) dir = {std::cos(a.angle), std::sin(a.angle)};
    else throw InputError("give --angle or --dir");
    double len = norm(dir);
    if (!(len > 0)) throw InputError("zero direction");
    dir = dir / len;
    auto s = unfold(f.polygon);
    ShootOptions<double> opt;
    opt.max_length = a.length;
    opt.policy = parse_policy(a.policy);
    auto t = shoot(f.polygon, s.witness(), {start, dir}, opt);
    r.add("backend", "float");
    report_trajectory(r, t);
    auto g = straighten(t, s);
    r.add("endpoint sheet", g.endpoint_sheet.str())
        .add("direction deviation", g.max_direction_deviation)
        .add("collinearity error", g.max_collinearity_error);
    std::cout << r.str();
    if (!a.svg.empty()) write_text_file(a.svg, render_trajectory(f.polygon, t, f.marks));
    return kOk;
}

struct SearchArgs {
    std::string path, pair = "P1,P2";
    double length = 50.0;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::string policy = "stop";
    bool all = false;
    bool expect_dark = false;
    double epsilon = 1e-6;
    std::vector<std::string> blockers;
    bool invariance = false;
};

SearchOptions search_options(const SearchArgs& a) {
    SearchOptions o;
    o.length = a.length;
    o.samples = a.samples;
    o.phase = seeded_phase(a.seed);
    o.policy = parse_policy(a.policy);
    o.collect_all = a.all;
    return o;
}

int cmd_illuminate(const SearchArgs& a) {
    auto f = read_polygon_file(a.path);
    auto [pa, pb] = parse_pair(a.pair, f.marks);
    auto s = unfold(f.polygon);
    auto opt = search_options(a);
    auto rep = illuminate_search(s, pa, pb, opt);
    Report r("illuminate");
    r.add("file", a.path)
        .add("a", format_point(pa))
        .add("b", format_point(pb))
        .add("length", opt.length)
        .add("samples", opt.samples)
        .add("phase", opt.phase)
        .add("connected", rep.connected)
        .add("connections", rep.connections.size())
        .add("directions tried", rep.directions_tried)
        .add("stopped at vertex", rep.discarded_vertex)
        .add("ambiguous", rep.ambiguous)
        .add("candidates", rep.candidates)
        .add("closest approach", rep.closest_approach);
    for (std::size_t i = 0; i < rep.connections.size() && i < 8; ++i) {
        const auto& c = rep.connections[i];
        r.add("connection " + std::to_string(i),
              "angle " + format_number(c.angle) + ", length " + format_number(c.trajectory.length()) + ", bounces " +
                  std::to_string(c.trajectory.bounces.size()) + ", miss " + format_number(c.miss));
    }
    std::cout << r.str();
    return a.expect_dark && rep.connected ? kCounterexample : kOk;
}

int cmd_verify_blocking(const SearchArgs& a) {
    auto f = read_polygon_file(a.path);
    auto [pa, pb] = parse_pair(a.pair, f.marks);
    auto s = unfold(f.polygon);
    BlockingSet e{pa, pb, {}};
    for (const auto& b : a.blockers)
        for (const auto& item : split(b, ';'))
            if (!item.empty()) e.points.push_back(parse_point(item, f.marks));
    auto opt = search_options(a);
    Report r("verify-blocking");
    r.add("file", a.path).add("a", format_point(pa)).add("b", format_point(pb)).add("blockers", e.points.size());
    r.add("length", opt.length).add("samples", opt.samples).add("epsilon", a.epsilon);
    if (a.invariance) {
        auto inv = invariance_check(s, pa, pb, e.points, opt, a.epsilon);
        std::size_t conn = 0, viol = 0;
        for (const auto& p : inv.pairs) conn += p.connections, viol += p.violations;
        r.add("pairs", inv.pairs.size()).add("connections", conn).add("violations", viol);
        r.add("dark", inv.dark).add("consistent", inv.consistent);
        std::cout << r.str();
        return inv.consistent ? kOk : kCounterexample;
    }
    auto rep = verify_blocking(s, e, opt, a.epsilon);
    r.add("connections checked", rep.connections_checked)
        .add("counterexamples", rep.counterexamples.size())
        .add("consistent", rep.consistent);
    if (!rep.counterexamples.empty()) {
        const auto& c = rep.counterexamples.front();
        r.add("counterexample", "angle " + format_number(c.angle) + ", length " + format_number(c.trajectory.length()));
    }
    std::cout << r.str();
    return rep.consistent ? kOk : kCounterexample;
}

int cmd_certify(const std::string& path, const std::string& pair, const std::string& tiling, int radius,
                double search_length) {
    auto in = load_tiled(path, tiling);
    auto [p1, p2] = parse_pair(pair, in.marks);
    CertifyOptions opt;
    opt.search_radius = radius;
    opt.search_length = search_length;
    auto c = certify(in.polygon, p1, p2, opt);
    Report r("certify");
    r.add("file", path)
        .add("tiling", coxeter_name(c.triangle.type))
        .add("edges", c.edges)
        .add("cells", c.cells)
        .add("p1", format_point(c.p1))
        .add("p2", format_point(c.p2));
    for (const auto& k : c.checks) r.add(k.name, std::string(k.passed ? "pass" : "FAIL") + " (" + k.detail + ")");
    r.add("valid", c.valid);
    if (c.counterexample) {
        const auto& t = *c.counterexample;
        r.add("counterexample", "direction " + to_string(t.v0.x) + "," + to_string(t.v0.y) + ", length " +
                                    format_number(t.length()) + ", bounces " + std::to_string(t.bounces.size()));
    }
    std::cout << r.str();
    return c.valid ? kOk : kCounterexample;
}

int cmd_no_return(const std::string& tiling, const std::string& triangle, double length, std::size_t samples,
                  std::uint64_t seed, double epsilon) {
    if (!triangle.empty()) {
        auto nm = split(triangle, ',');
        if (nm.size() != 2) throw InputError("--triangle expects n,m");
        int n = std::stoi(nm[0]), m = std::stoi(nm[1]);
        if (n < 2 || m < 1 || m >= n - 1) throw InputError("--triangle needs 1 <= m < n-1");
        auto s = no_return_sampling(n, m, samples, length, seed, epsilon);
        Report r("no-return sampling");
        r.add("triangle", "pi/" + std::to_string(n) + ", " + std::to_string(m) + "pi/" + std::to_string(n))
            .add("samples", s.samples)
            .add("length", s.length)
            .add("seed", static_cast<long long>(seed))
            .add("tolerance", s.tolerance)
            .add("closest return", s.closest_return)
            .add("closest sample", s.closest_index)
            .add("returns", s.returns)
            .add("vertex stops", s.vertex_stops)
            .add("symmetry checks", s.symmetry_checks)
            .add("symmetry misses", s.symmetry_misses)
            .add("max asymmetry", s.max_asymmetry)
            .add("lemma hypotheses", lemma_hypotheses(n, m));
        std::cout << r.str();
        return s.returns == 0 ? kOk : kCounterexample;
    }
    auto tri = parse_tiling(tiling);
    auto rep = verify_no_return_exact(tri, length);
    Report r("no-return exact");
    r.add("tiling", coxeter_name(tri.type))
        .add("length", rep.length)
        .add("images checked", static_cast<long long>(rep.images_checked))
        .add("blocked by B", static_cast<long long>(rep.blocked_by_b))
        .add("blocked by C", static_cast<long long>(rep.blocked_by_c))
        .add("violations", static_cast<long long>(rep.violation_count))
        .add("lemma hypotheses", lemma_hypotheses(tri.n, tri.m));
    for (std::size_t i = 0; i < rep.violations.size() && i < 4; ++i) {
        const auto& v = rep.violations[i];
        r.add("violation " + std::to_string(i), "image (" + std::to_string(v.image.a) + "," + std::to_string(v.image.b) +
                                                    "), step (" + std::to_string(v.direction.a) + "," +
                                                    std::to_string(v.direction.b) + ")");
    }
    std::cout << r.str();
    return rep.violation_count == 0 ? kOk : kCounterexample;
}

int cmd_search(const std::string& tiling, const std::string& offsets, const SearchBudget& base, const std::string& out) {
    auto tri = parse_tiling(tiling);
    SearchBudget b = base;
    if (!offsets.empty()) {
        b.offsets.clear();
        for (const auto& o : split(offsets, ';')) {
            auto ij = split(o, ',');
            if (ij.size() != 2) throw InputError("--offsets expects i,j;i,j");
            b.offsets.emplace_back(std::stoi(ij[0]), std::stoi(ij[1]));
        }
    }
    auto res = search_min_edges(tri, b);
    if (!out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec) throw InputError("cannot create " + out + ": " + ec.message());
    }
    Report r("search");
    r.add("tiling", coxeter_name(tri.type)).add("seed", static_cast<long long>(b.seed)).add("results", res.size());
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& x = res[i];
        r.add("result " + std::to_string(i), std::to_string(x.edges) + " edges, " +
                                                 std::to_string(x.polygon.cells().size()) + " cells, pair (" +
                                                 std::to_string(x.p1.a) + "," + std::to_string(x.p1.b) + ") (" +
                                                 std::to_string(x.p2.a) + "," + std::to_string(x.p2.b) + "), " +
                                                 (x.certificate.valid ? "certified" : "not certified"));
        if (!out.empty()) {
            CellsFile f{tri, x.polygon.cells(), {{"P1", x.p1}, {"P2", x.p2}}};
            write_text_file(out + "/search-" + std::to_string(x.edges) + ".cells",
                            write_cells_file(f, std::to_string(x.edges) + " edges, found by search_min_edges"));
        }
    }
    std::cout << r.str();
    return kOk;
}

struct RenderArgs {
    std::string kind, path, out, tiling = "2,4,4", from, dir;
    std::vector<std::string> points;
    double angle = std::numeric_limits<double>::quiet_NaN();
    double length = 10.0;
    int vertex = -1;
    std::string policy = "stop";
};

int cmd_render(const RenderArgs& a) {
    auto kind = parse_figure_kind(a.kind);
    if (!kind) throw InputError("figure kind must be polygon, trajectory, unfolding-star or tiling");
    std::string svg;
    auto select = [&](const std::vector<MarkedPoint>& all) {
        if (a.points.empty()) return all;
        std::vector<MarkedPoint> out;
        for (const auto& name : a.points) {
            if (name == "none") return std::vector<MarkedPoint>{};
            bool found = false;
            for (const auto& m : all)
                if (m.name == name) out.push_back(m), found = true;
            if (!found) throw InputError("no marked point " + name);
        }
        return out;
    };
    if (*kind == FigureKind::Tiling) {
        auto in = load_tiled(a.path, a.tiling);
        svg = render_tiling(in.polygon, select(in.marks));
    } else {
        auto f = read_polygon_file(a.path);
        if (*kind == FigureKind::Polygon) {
            svg = render_polygon(f.polygon, select(f.marks));
        } else if (*kind == FigureKind::Trajectory) {
            if (a.from.empty()) throw InputError("trajectory figures need --from");
            Vec2d start = parse_point(a.from, f.marks);
            Vec2d dir = !a.dir.empty() ? parse_point(a.dir, {})
                                       : Vec2d{std::cos(std::isnan(a.angle) ? 0.3 : a.angle),
                                               std::sin(std::isnan(a.angle) ? 0.3 : a.angle)};
            dir = dir / norm(dir);
            auto s = unfold(f.polygon);
            ShootOptions<double> opt;
            opt.max_length = a.length;
            opt.policy = parse_policy(a.policy);
            svg = render_trajectory(f.polygon, shoot(f.polygon, s.witness(), {start, dir}, opt), select(f.marks));
        } else {
            std::size_t v = 0;
            if (a.vertex >= 0) {
                v = static_cast<std::size_t>(a.vertex);
                if (v >= f.polygon.size()) throw InputError("--vertex out of range");
            } else {
                // first vertex of angle π/n with n > 2
                bool found = false;
                for (std::size_t i = 0; i < f.polygon.size() && !found; ++i) {
                    auto sn = snap_to_rational_pi(f.polygon.interior_angle(i), 64, 1e-9);
                    if (sn && sn->num() == 1 && sn->den() > 2) v = i, found = true;
                }
                if (!found) throw InputError("no vertex of angle π/n; give --vertex");
            }
            double ang = std::isnan(a.angle) ? 0.37 : a.angle;
            svg = render_unfolding_star(f.polygon, v, ang);
        }
    }
    if (a.out.empty() || a.out == "-") std::cout << svg;
    else write_text_file(a.out, svg);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational polygonal billiards: unfolding, trajectories, illumination and dark-pair certificates"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::uint64_t seed = 1;
    double length = std::numeric_limits<double>::quiet_NaN();
    std::size_t samples = 0;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    std::string policy = "stop";
    auto global = [&](CLI::App* s, bool with_policy) {
        s->add_option("--seed", seed, "Seed for randomized steps");
        s->add_option("--length", length, "Trajectory length bound L");
        s->add_option("--samples", samples, "Number of sampled directions or trajectories");
        s->add_option("--epsilon", epsilon, "Distance tolerance");
        if (with_policy) s->add_option("--policy", policy, "Vertex policy: stop or continue");
    };

    std::string path;
    std::int64_t max_den = 64;
    auto* validate = app.add_subcommand("validate", "Check a polygon file and its rationality");
    validate->add_option("file", path, "Polygon file")->required();
    validate->add_option("--max-den", max_den, "Largest denominator accepted for angles / π");

    auto* unfold_cmd = app.add_subcommand("unfold", "Build the translation surface of a rational polygon");
    unfold_cmd->add_option("file", path, "Polygon file")->required();

    ShootArgs sh;
    auto* shoot_cmd = app.add_subcommand("shoot", "Trace one billiard trajectory");
    shoot_cmd->add_option("file", sh.path, "Polygon file")->required();
    shoot_cmd->add_option("--from", sh.from, "Start point x,y or marked point name")->required();
    shoot_cmd->add_option("--angle", sh.angle, "Direction angle in radians");
    shoot_cmd->add_option("--dir", sh.dir, "Direction vector x,y");
    shoot_cmd->add_flag("--exact", sh.exact, "Rational arithmetic (needs exact vertices and direction)");
    shoot_cmd->add_option("--svg", sh.svg, "Write an SVG of the trajectory");
    global(shoot_cmd, true);

    SearchArgs sa;
    auto* illum = app.add_subcommand("illuminate", "Search for a billiard path between two points");
    illum->add_option("file", sa.path, "Polygon file")->required();
    illum->add_option("--pair", sa.pair, "NAME,NAME or x,y:x,y");
    illum->add_flag("--all", sa.all, "Collect every connection up to the length bound");
    illum->add_flag("--expect-dark", sa.expect_dark, "Exit 1 when a connection is found");
    global(illum, true);

    auto* block = app.add_subcommand("verify-blocking", "Check that a finite set blocks every path between two points");
    block->add_option("file", sa.path, "Polygon file")->required();
    block->add_option("--pair", sa.pair, "NAME,NAME or x,y:x,y");
    block->add_option("--blocker", sa.blockers, "Blocking point x,y or name; repeatable, or ';'-separated");
    block->add_flag("--invariance", sa.invariance, "Also check all transported pairs");
    global(block, true);

    std::string pair = "P1,P2", tiling = "2,4,4";
    int radius = 16;
    double search_length = 60.0;
    auto* cert = app.add_subcommand("certify", "Certify that two points of a tiled polygon do not illuminate each other");
    cert->add_option("file", path, "Cells file or polygon file")->required();
    cert->add_option("--pair", pair, "NAME,NAME or x,y:x,y");
    cert->add_option("--tiling", tiling, "Triangle of a polygon file: 2,4,4, 2,3,6 or 3,3,3");
    cert->add_option("--search-radius", radius, "Direction bound of the exact counterexample search");
    cert->add_option("--search-length", search_length, "Length bound of the exact counterexample search");

    std::string triangle;
    auto* noret = app.add_subcommand("no-return", "Check that no billiard path returns to the acute vertex");
    noret->add_option("--tiling", tiling, "Exact lattice check for 2,4,4, 2,3,6 or 3,3,3");
    noret->add_option("--triangle", triangle, "Sampling check for the triangle with angles π/n, mπ/n, given as n,m");
    global(noret, false);

    SearchBudget budget;
    std::string offsets, out_dir;
    auto* search = app.add_subcommand("search", "Look for small tiled polygons with a certified dark pair");
    search->add_option("--tiling", tiling, "Triangle: 2,4,4, 2,3,6 or 3,3,3");
    search->add_option("--offsets", offsets, "Second star positions i,j;i,j");
    search->add_option("--margin", budget.margin, "Window margin in star units");
    search->add_option("--max-cells", budget.max_cells, "Largest cell count");
    search->add_option("--restarts", budget.restarts, "Restarts per offset");
    search->add_option("--steps", budget.steps, "Annealing steps per restart");
    search->add_option("--out", out_dir, "Directory for the found cell files");
    global(search, false);

    RenderArgs ra;
    auto* render = app.add_subcommand("render", "Write an SVG figure");
    render->add_option("kind", ra.kind, "polygon, trajectory, unfolding-star or tiling")->required();
    render->add_option("file", ra.path, "Polygon or cells file")->required();
    render->add_option("-o,--out", ra.out, "Output file (default stdout)");
    render->add_option("--tiling", ra.tiling, "Triangle of a polygon file for tiling figures");
    render->add_option("--points", ra.points, "Marked points to draw (default all, 'none' for none)");
    render->add_option("--from", ra.from, "Trajectory start");
    render->add_option("--dir", ra.dir, "Trajectory direction x,y");
    render->add_option("--angle", ra.angle, "Trajectory or geodesic angle in radians");
    render->add_option("--vertex", ra.vertex, "Vertex of angle π/n for the unfolding star");
    global(render, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    auto have = [](double x) { return !std::isnan(x); };
    try {
        if (*validate) return cmd_validate(path, max_den);
        if (*unfold_cmd) return cmd_unfold(path);
        if (*shoot_cmd) {
            if (have(length)) sh.length = length;
            sh.policy = policy;
            return cmd_shoot(sh);
        }
        if (*illum || *block) {
            if (have(length)) sa.length = length;
            if (samples) sa.samples = samples;
            if (have(epsilon)) sa.epsilon = epsilon;
            sa.seed = seed;
            sa.policy = policy;
            return *illum ? cmd_illuminate(sa) : cmd_verify_blocking(sa);
        }
        if (*cert) return cmd_certify(path, pair, tiling, radius, search_length);
        if (*noret)
            return cmd_no_return(tiling, triangle, have(length) ? length : 100.0, samples ? samples : 10000, seed,
                                 have(epsilon) ? epsilon : 1e-6);
        if (*search) {
            budget.seed = seed;
            return cmd_search(tiling, offsets, budget, out_dir);
        }
        if (*render) {
            if (have(length)) ra.length = length;
            ra.policy = policy;
            return cmd_render(ra);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
