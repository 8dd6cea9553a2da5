#include "billiards/tokarsky.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace billiards {

const char* coxeter_name(CoxeterType t) {
    switch (t) {
        case CoxeterType::T244: return "2,4,4";
        case CoxeterType::T236: return "2,3,6";
        case CoxeterType::T333: return "3,3,3";
    }
    return "?";
}

std::optional<CoxeterType> parse_coxeter(const std::string& s) {
    std::string k;
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) k += c;
    if (k == "244") return CoxeterType::T244;
    if (k == "236") return CoxeterType::T236;
    if (k == "333") return CoxeterType::T333;
    return std::nullopt;
}

CoxeterTriangle CoxeterTriangle::make(CoxeterType t) {
    switch (t) {
        case CoxeterType::T244: return {t, 4, 2};
        case CoxeterType::T236: return {t, 6, 3};
        case CoxeterType::T333: return {t, 3, 1};
    }
    throw std::invalid_argument("unknown triangle type");
}

std::int64_t CoxeterTriangle::sqrt_factor() const { return type == CoxeterType::T244 ? 1 : 3; }

std::int64_t CoxeterTriangle::scale() const {
    switch (type) {
        case CoxeterType::T244: return 1;
        case CoxeterType::T236: return 6;
        case CoxeterType::T333: return 2;
    }
    return 1;
}

std::vector<LatticePoint> CoxeterTriangle::rays() const {
    switch (type) {
        case CoxeterType::T244: return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
        case CoxeterType::T236:
            return {{6, 0}, {6, 2}, {3, 3}, {0, 4}, {-3, 3}, {-6, 2}, {-6, 0}, {-6, -2}, {-3, -3}, {0, -4}, {3, -3}, {6, -2}};
        case CoxeterType::T333: return {{2, 0}, {1, 1}, {-1, 1}, {-2, 0}, {-1, -1}, {1, -1}};
    }
    return {};
}

std::array<LatticePoint, 2> CoxeterTriangle::star_lattice() const {
    switch (type) {
        case CoxeterType::T244: return {LatticePoint{2, 0}, LatticePoint{0, 2}};
        case CoxeterType::T236: return {LatticePoint{12, 0}, LatticePoint{6, 6}};
        case CoxeterType::T333: return {LatticePoint{3, 1}, LatticePoint{0, 2}};
    }
    return {};
}

Vec2d CoxeterTriangle::real(const LatticePoint& p) const {
    const double s = static_cast<double>(scale());
    return {static_cast<double>(p.a) / s, static_cast<double>(p.b) * std::sqrt(static_cast<double>(sqrt_factor())) / s};
}

std::optional<LatticePoint> CoxeterTriangle::from_real(const Vec2d& x, double tol) const {
    const double s = static_cast<double>(scale());
    double a = x.x * s;
    double b = x.y * s / std::sqrt(static_cast<double>(sqrt_factor()));
    double ra = std::round(a), rb = std::round(b);
    if (std::fabs(a - ra) > tol * s || std::fabs(b - rb) > tol * s) return std::nullopt;
    return LatticePoint{static_cast<std::int64_t>(ra), static_cast<std::int64_t>(rb)};
}

std::optional<Vec2<Rational>> CoxeterTriangle::exact(const LatticePoint& p) const {
    if (sqrt_factor() != 1) return std::nullopt;
    Rational s(static_cast<long>(scale()));
    return Vec2<Rational>{Rational(static_cast<long>(p.a)) / s, Rational(static_cast<long>(p.b)) / s};
}

bool CoxeterTriangle::in_star_lattice(const LatticePoint& p) const {
    auto [b1, b2] = star_lattice();
    std::int64_t det = b1.a * b2.b - b1.b * b2.a;
    std::int64_t x = p.a * b2.b - p.b * b2.a;
    std::int64_t y = b1.a * p.b - b1.b * p.a;
    return x % det == 0 && y % det == 0;
}

VertexType CoxeterTriangle::vertex_type(const LatticePoint& p) const {
    if (in_star_lattice(p)) return VertexType::A;
    auto r = rays();
    for (std::size_t k = 0; k < r.size(); ++k)
        if (in_star_lattice(p - r[k])) return k % 2 == 0 ? VertexType::B : VertexType::C;
    return VertexType::None;
}

std::array<LatticePoint, 3> CoxeterTriangle::tile(int i, int j, int o) const {
    auto [b1, b2] = star_lattice();
    auto r = rays();
    const int k = static_cast<int>(r.size());
    o = ((o % k) + k) % k;
    LatticePoint c = b1 * i + b2 * j;
    return {c, c + r[o], c + r[(o + 1) % k]};
}

std::array<Vec2d, 3> CoxeterTriangle::base_triangle() const {
    auto r = rays();
    return {Vec2d{0, 0}, real(r[0]), real(r[1])};
}

bool lemma_hypotheses(int n, int m) { return n >= 2 && m >= 1 && n % 2 == 0 && m < n - 1; }

namespace {

std::int64_t cross(const LatticePoint& u, const LatticePoint& v) { return u.a * v.b - u.b * v.a; }

int full_turn(const CoxeterTriangle& tri, VertexType t) {
    // wedges around a vertex: 2π divided by the triangle angle there
    const int n = tri.n, m = tri.m;
    switch (t) {
        case VertexType::A: return 2 * n;
        case VertexType::B: return 2 * n / m;
        case VertexType::C: return 2 * n / (n - 1 - m);
        case VertexType::None: return 0;
    }
    return 0;
}

using Edge = std::pair<LatticePoint, LatticePoint>;

Edge undirected(const LatticePoint& a, const LatticePoint& b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::string str(const LatticePoint& p) { return "(" + std::to_string(p.a) + "," + std::to_string(p.b) + ")"; }

// Star index range covering a frame box.
void star_range(const CoxeterTriangle& tri, std::int64_t amin, std::int64_t amax, std::int64_t bmin, std::int64_t bmax,
                int& i0, int& i1, int& j0, int& j1) {
    auto [b1, b2] = tri.star_lattice();
    double det = static_cast<double>(b1.a * b2.b - b1.b * b2.a);
    double xs[2] = {static_cast<double>(amin), static_cast<double>(amax)};
    double ys[2] = {static_cast<double>(bmin), static_cast<double>(bmax)};
    double lo_i = 1e300, hi_i = -1e300, lo_j = 1e300, hi_j = -1e300;
    for (double a : xs)
        for (double b : ys) {
            double x = (a * b2.b - b * b2.a) / det;
            double y = (b1.a * b - b1.b * a) / det;
            lo_i = std::min(lo_i, x); hi_i = std::max(hi_i, x);
            lo_j = std::min(lo_j, y); hi_j = std::max(hi_j, y);
        }
    i0 = static_cast<int>(std::floor(lo_i)) - 2;
    i1 = static_cast<int>(std::ceil(hi_i)) + 2;
    j0 = static_cast<int>(std::floor(lo_j)) - 2;
    j1 = static_cast<int>(std::ceil(hi_j)) + 2;
}

}  // namespace

TiledPolygon TiledPolygon::compose(const CoxeterTriangle& tri, const std::vector<Cell>& cells_in) {
    if (cells_in.empty()) throw GeometryError(ErrorKind::InputError, "empty cell set");
    const int k = 2 * tri.n;
    std::vector<Cell> cells;
    for (auto c : cells_in) {
        if (c.o < 0 || c.o >= k) throw GeometryError(ErrorKind::InputError, "orientation out of range");
        cells.push_back(c);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    TiledPolygon P;
    P.tri_ = tri;
    P.cells_ = cells;

    // edges with incident cells; interior connectivity by union-find across shared edges
    std::map<Edge, std::vector<int>> edge_cells;
    std::map<Edge, std::pair<LatticePoint, LatticePoint>> directed;
    std::map<LatticePoint, int> incident;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
        auto t = tri.tile(cells[c].i, cells[c].j, cells[c].o);
        for (int e = 0; e < 3; ++e) {
            const auto& u = t[e];
            const auto& v = t[(e + 1) % 3];
            auto key = undirected(u, v);
            edge_cells[key].push_back(c);
            directed[key] = {u, v};
            ++incident[u];
        }
    }
    std::vector<int> parent(cells.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [e, cs] : edge_cells)
        if (cs.size() == 2) parent[find(cs[0])] = find(cs[1]);
    std::set<int> roots;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) roots.insert(find(c));
    if (roots.size() != 1)
        throw GeometryError(ErrorKind::DisconnectedInterior,
                            "cells form " + std::to_string(roots.size()) + " components");

    // boundary: edges with one incident cell, directed with the interior on the left
    std::map<LatticePoint, std::vector<LatticePoint>> next;
    for (const auto& [e, cs] : edge_cells) {
        if (cs.size() != 1) continue;
        const auto& d = directed[e];
        next[d.first].push_back(d.second);
        P.boundary_edges_.insert(e);
    }
    for (const auto& [p, nx] : next)
        if (nx.size() != 1)
            throw GeometryError(ErrorKind::NonSimpleBoundary, "boundary pinches at " + str(p));

    std::vector<LatticePoint> cycle;
    std::set<LatticePoint> visited;
    std::size_t cycles = 0;
    for (const auto& [start, nx] : next) {
        if (visited.count(start)) continue;
        ++cycles;
        std::vector<LatticePoint> cyc;
        LatticePoint p = start;
        do {
            visited.insert(p);
            cyc.push_back(p);
            p = next[p].front();
        } while (p != start);
        if (cycles == 1) cycle = std::move(cyc);
    }
    if (cycles != 1)
        throw GeometryError(ErrorKind::HoleDetected, "boundary has " + std::to_string(cycles) + " components");

    // merge collinear runs
    std::vector<LatticePoint> ring;
    const std::size_t nc = cycle.size();
    for (std::size_t i = 0; i < nc; ++i) {
        const auto& a = cycle[(i + nc - 1) % nc];
        const auto& b = cycle[i];
        const auto& c = cycle[(i + 1) % nc];
        if (cross(b - a, c - b) != 0) ring.push_back(b);
    }
    std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()), ring.end());
    P.ring_ = ring;

    std::vector<Vec2d> pts;
    for (const auto& p : ring) pts.push_back(tri.real(p));
    try {
        P.poly_ = PolygonD::validate(pts);
    } catch (const GeometryError& e) {
        throw GeometryError(ErrorKind::NonSimpleBoundary, std::string("boundary is not a simple polygon: ") + e.what());
    }

    std::set<LatticePoint> corners(ring.begin(), ring.end());
    for (const auto& [p, w] : incident) {
        TilingVertex v;
        v.point = p;
        v.type = tri.vertex_type(p);
        v.wedges = w;
        v.full = full_turn(tri, v.type);
        v.corner = corners.count(p) > 0;
        P.verts_.push_back(v);
        if (v.type == VertexType::A) P.a_images_.push_back({p, P.locate(p)});
    }
    return P;
}

TiledPolygon TiledPolygon::from_polygon(const CoxeterTriangle& tri, const PolygonD& q) {
    std::vector<LatticePoint> pts;
    for (const auto& v : q.vertices()) {
        auto l = tri.from_real(v);
        if (!l || tri.vertex_type(*l) == VertexType::None)
            throw GeometryError(ErrorKind::InputError, "vertex is not a tiling vertex");
        pts.push_back(*l);
    }
    std::int64_t amin = pts[0].a, amax = pts[0].a, bmin = pts[0].b, bmax = pts[0].b;
    for (const auto& p : pts) {
        amin = std::min(amin, p.a); amax = std::max(amax, p.a);
        bmin = std::min(bmin, p.b); bmax = std::max(bmax, p.b);
    }
    int i0, i1, j0, j1;
    star_range(tri, amin, amax, bmin, bmax, i0, i1, j0, j1);
    std::vector<Cell> cells;
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j)
            for (int o = 0; o < 2 * tri.n; ++o) {
                auto t = tri.tile(i, j, o);
                Vec2d c = (tri.real(t[0]) + tri.real(t[1]) + tri.real(t[2])) / 3.0;
                if (q.locate(c).where == Location::Interior) cells.push_back({i, j, o});
            }
    auto P = compose(tri, cells);
    std::vector<LatticePoint> want = pts;
    std::rotate(want.begin(), std::min_element(want.begin(), want.end()), want.end());
    if (want != P.ring_) throw GeometryError(ErrorKind::InputError, "polygon is not a union of tiles");
    return P;
}

std::optional<PolygonQ> TiledPolygon::polygon_exact() const {
    if (tri_.sqrt_factor() != 1) return std::nullopt;
    std::vector<Vec2<Rational>> pts;
    for (const auto& p : ring_) pts.push_back(*tri_.exact(p));
    return PolygonQ::validate(pts);
}

Location TiledPolygon::locate(const LatticePoint& p) const {
    if (std::find(ring_.begin(), ring_.end(), p) != ring_.end()) return Location::Vertex;
    auto it = std::find_if(verts_.begin(), verts_.end(), [&](const TilingVertex& v) { return v.point == p; });
    if (it != verts_.end()) return it->wedges == it->full ? Location::Interior : Location::Edge;
    return poly_.locate(tri_.real(p)).where;
}

const CertificateCheck* NonIlluminationCertificate::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<Trajectory<Rational>> find_connection_exact(const TiledPolygon& p, const LatticePoint& p1,
                                                          const LatticePoint& p2, int radius, double length) {
    auto Q = p.polygon_exact();
    if (!Q) return std::nullopt;
    const auto& tri = p.triangle();
    auto w = require_rational(*Q);
    auto a = tri.exact(p1), b = tri.exact(p2);
    std::vector<LatticePoint> dirs;
    for (int x = -radius; x <= radius; ++x)
        for (int y = -radius; y <= radius; ++y)
            if (std::gcd(x, y) == 1) dirs.push_back({x, y});
    std::sort(dirs.begin(), dirs.end(), [](const LatticePoint& u, const LatticePoint& v) {
        auto nu = u.a * u.a + u.b * u.b, nv = v.a * v.a + v.b * v.b;
        return nu != nv ? nu < nv : u < v;
    });
    ShootOptions<Rational> opt;
    opt.max_length = length;
    opt.targets = {*b};
    for (const auto& d : dirs) {
        Vec2<Rational> v{Rational(static_cast<long>(d.a)), Rational(static_cast<long>(d.b))};
        auto tr = shoot(*Q, w, PhaseState<Rational>{*a, v}, opt);
        if (tr.termination == Termination::ReachedTarget) return tr;
    }
    return std::nullopt;
}

NonIlluminationCertificate certify(const TiledPolygon& P, const Vec2d& p1, const Vec2d& p2, const CertifyOptions& opt) {
    NonIlluminationCertificate c;
    const auto& tri = P.triangle();
    c.triangle = tri;
    c.edges = P.edge_count();
    c.cells = P.cells().size();
    c.p1 = p1;
    c.p2 = p2;
    c.l1 = tri.from_real(p1);
    c.l2 = tri.from_real(p2);
    c.lemma_basis =
        "no billiard path in the triangle with angles pi/n, m*pi/n (n even, m < n-1) leaves A and returns to A; "
        "a path between two A-images of Q that meets only corners of Q at tiling vertices folds to such a path";

    {
        std::ostringstream d;
        d << "n=" << tri.n << " m=" << tri.m;
        c.checks.push_back({"hypotheses_ok", lemma_hypotheses(tri.n, tri.m), d.str()});
    }
    {
        // exact area balance: the cells cover Q without gaps
        std::int64_t tiles = 0, ring = 0;
        for (const auto& cell : P.cells()) {
            auto t = tri.tile(cell.i, cell.j, cell.o);
            tiles += cross(t[1] - t[0], t[2] - t[0]);
        }
        const auto& r = P.ring();
        for (std::size_t i = 0; i < r.size(); ++i) ring += cross(r[i], r[(i + 1) % r.size()]);
        bool ok = tiles == ring && r.size() >= 3;
        std::ostringstream d;
        d << P.cells().size() << " cells, " << r.size() << " edges, twice area " << ring << " (frame units)";
        c.checks.push_back({"tiling_ok", ok, d.str()});
    }
    {
        auto l1 = P.polygon().locate(p1).where, l2 = P.polygon().locate(p2).where;
        bool ok = l1 == Location::Interior && l2 == Location::Interior;
        std::ostringstream d;
        d << (l1 == Location::Interior ? "p1 interior" : "p1 not interior") << ", "
          << (l2 == Location::Interior ? "p2 interior" : "p2 not interior");
        if (norm(p1 - p2) == 0) d << ", same point (self-illumination)";
        c.checks.push_back({"points_interior", ok, d.str()});
    }
    {
        bool a1 = c.l1 && tri.vertex_type(*c.l1) == VertexType::A;
        bool a2 = c.l2 && tri.vertex_type(*c.l2) == VertexType::A;
        std::ostringstream d;
        d << "p1 " << (a1 ? "is" : "is not") << " an A-image, p2 " << (a2 ? "is" : "is not") << " an A-image";
        c.checks.push_back({"both_A_images", a1 && a2, d.str()});
    }
    {
        std::vector<LatticePoint> bad;
        for (const auto& v : P.vertices())
            if (v.type != VertexType::A && !v.corner) bad.push_back(v.point);
        std::ostringstream d;
        if (bad.empty()) d << "every B/C tiling vertex in Q is a corner of Q";
        else {
            d << bad.size() << " B/C tiling vertices are not corners:";
            for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 6); ++i) d << " " << str(bad[i]);
        }
        c.checks.push_back({"vertex_corners", bad.empty(), d.str()});
    }
    c.valid = std::all_of(c.checks.begin(), c.checks.end(), [](const CertificateCheck& k) { return k.passed; });

    if (!c.valid && opt.search_on_failure && tri.sqrt_factor() == 1 && c.check("both_A_images")->passed &&
        c.check("points_interior")->passed)
        c.counterexample = find_connection_exact(P, *c.l1, *c.l2, opt.search_radius, opt.search_length);
    return c;
}

Vec2d fold_to_triangle(const CoxeterTriangle& tri, const Vec2d& p) {
    auto base = tri.base_triangle();
    const double s = static_cast<double>(tri.scale());
    const double rs = std::sqrt(static_cast<double>(tri.sqrt_factor()));
    auto [b1, b2] = tri.star_lattice();
    double a = p.x * s, b = p.y * s / rs;
    double det = static_cast<double>(b1.a * b2.b - b1.b * b2.a);
    int ci = static_cast<int>(std::floor((a * b2.b - b * b2.a) / det));
    int cj = static_cast<int>(std::floor((b1.a * b - b1.b * a) / det));
    double best = -1e300;
    Vec2d out = p;
    for (int i = ci - 1; i <= ci + 2; ++i)
        for (int j = cj - 1; j <= cj + 2; ++j)
            for (int o = 0; o < 2 * tri.n; ++o) {
                auto t = tri.tile(i, j, o);
                Vec2d A = tri.real(t[0]), X = tri.real(t[1]), Y = tri.real(t[2]);
                double area = cross(X - A, Y - A);
                double la = cross(X - p, Y - p) / area;
                double lx = cross(Y - p, A - p) / area;
                double ly = cross(A - p, X - p) / area;
                double m = std::min({la, lx, ly});
                if (m <= best) continue;
                best = m;
                // X is the B-vertex for even o, the C-vertex for odd o
                const Vec2d& TB = o % 2 == 0 ? base[1] : base[2];
                const Vec2d& TC = o % 2 == 0 ? base[2] : base[1];
                out = base[0] * la + TB * lx + TC * ly;
            }
    return out;
}

namespace {

std::vector<Vec2d> fold_segment(const CoxeterTriangle& tri, const LatticePoint& w) {
    // crossings of the developed segment 0 → w with tile edges
    Vec2d W = tri.real(w);
    int i0, i1, j0, j1;
    star_range(tri, std::min<std::int64_t>(0, w.a), std::max<std::int64_t>(0, w.a), std::min<std::int64_t>(0, w.b),
               std::max<std::int64_t>(0, w.b), i0, i1, j0, j1);
    std::vector<double> ts{0.0, 1.0};
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j)
            for (int o = 0; o < 2 * tri.n; ++o) {
                auto t = tri.tile(i, j, o);
                for (int e = 0; e < 3; ++e) {
                    Vec2d u = tri.real(t[e]), v = tri.real(t[(e + 1) % 3]);
                    Vec2d d = v - u;
                    double den = cross(W, d);
                    if (std::fabs(den) < 1e-14) continue;
                    double tt = cross(u, d) / den;
                    double ss = cross(u, W) / den;
                    if (tt > 1e-12 && tt < 1 - 1e-12 && ss >= -1e-12 && ss <= 1 + 1e-12) ts.push_back(tt);
                }
            }
    std::sort(ts.begin(), ts.end());
    std::vector<double> uniq;
    for (double t : ts)
        if (uniq.empty() || t - uniq.back() > 1e-12) uniq.push_back(t);
    // the folding map is continuous across tile edges
    std::vector<Vec2d> out;
    for (double t : uniq) out.push_back(fold_to_triangle(tri, W * t));
    return out;
}

}  // namespace

NoReturnReport verify_no_return_exact(const CoxeterTriangle& tri, double length, std::size_t max_violations) {
    NoReturnReport rep;
    rep.triangle = tri;
    rep.length = length;
    rep.max_violations = max_violations;
    const double R = length * static_cast<double>(tri.scale());
    const auto R2 = static_cast<std::int64_t>(std::floor(R * R));
    auto [b1, b2] = tri.star_lattice();
    const std::int64_t det = std::llabs(b1.a * b2.b - b1.b * b2.a);
    const double rb = R / std::sqrt(static_cast<double>(tri.sqrt_factor()));
    const auto X = static_cast<std::int64_t>(std::ceil((R * std::llabs(b2.b) + rb * std::llabs(b2.a)) / det)) + 1;
    const auto Y = static_cast<std::int64_t>(std::ceil((R * std::llabs(b1.b) + rb * std::llabs(b1.a)) / det)) + 1;
    std::vector<std::pair<std::int64_t, LatticePoint>> bad;
    for (std::int64_t x = -X; x <= X; ++x)
        for (std::int64_t y = -Y; y <= Y; ++y) {
            LatticePoint w = b1 * x + b2 * y;
            if (w.a == 0 && w.b == 0) continue;
            std::int64_t m2 = tri.metric(w);
            if (m2 > R2) continue;
            ++rep.images_checked;
            std::int64_t g = std::gcd(std::llabs(w.a), std::llabs(w.b));
            LatticePoint step{w.a / g, w.b / g};
            VertexType first = VertexType::None;
            for (std::int64_t k = 1; k <= g; ++k) {
                first = tri.vertex_type(step * k);
                if (first != VertexType::None) break;
            }
            if (first == VertexType::B) ++rep.blocked_by_b;
            else if (first == VertexType::C) ++rep.blocked_by_c;
            else {
                ++rep.violation_count;
                bad.push_back({m2, w});
            }
        }
    std::sort(bad.begin(), bad.end());
    for (std::size_t i = 0; i < std::min(bad.size(), max_violations); ++i) {
        const auto& w = bad[i].second;
        std::int64_t g = std::gcd(std::llabs(w.a), std::llabs(w.b));
        NoReturnViolation v;
        v.image = w;
        v.direction = {w.a / g, w.b / g};
        v.folded = fold_segment(tri, w);
        rep.violations.push_back(std::move(v));
    }
    return rep;
}

PolygonD sampling_triangle(int n, int m) {
    if (n < 2 || m < 1 || m >= n - 1) throw std::invalid_argument("angles pi/n and m*pi/n do not form a triangle");
    const double pi = std::numbers::pi;
    const double a = pi / n, b = m * pi / n, c = pi - a - b;
    const double ac = std::sin(b) / std::sin(c);
    return PolygonD::validate({{0, 0}, {1, 0}, {ac * std::cos(a), ac * std::sin(a)}});
}

double continuation_asymmetry(const Trajectory<double>& tr, std::size_t bounce, const RationalityWitness& w,
                              int probes) {
    const auto& b = tr.bounces.at(bounce);
    if (b.vertex < 0) throw std::invalid_argument("event is not a vertex continuation");
    const double t0 = b.t * tr.speed();
    const double span = std::min(t0, tr.length() - t0);
    auto n = removable_order(w, static_cast<std::size_t>(b.vertex));
    // odd n: the continued path is the mirror image in the vertex bisector
    Vec2d axis{1, 0};
    if (n && *n % 2 == 1) {
        double ang = w.frame + (w.edge_axes[b.vertex] + w.angles[b.vertex].half()).radians();
        axis = {std::cos(ang), std::sin(ang)};
    }
    double worst = 0;
    for (int k = 1; k <= probes; ++k) {
        double s = span * k / probes;
        Vec2d fwd = tr.position_at(t0 + s);
        Vec2d back = tr.position_at(t0 - s);
        if (n && *n % 2 == 1) {
            Vec2d r = back - b.q;
            back = b.q + axis * (2 * dot(r, axis)) - r;
        }
        worst = std::max(worst, norm(fwd - back));
    }
    return worst;
}

SamplingReport no_return_sampling(int n, int m, std::size_t samples, double length, std::uint64_t seed,
                                  double tolerance) {
    SamplingReport rep;
    rep.n = n;
    rep.m = m;
    rep.samples = samples;
    rep.length = length;
    rep.tolerance = tolerance;
    rep.closest_return = std::numeric_limits<double>::infinity();
    PolygonD T = sampling_triangle(n, m);
    auto w = require_rational(T);
    const Vec2d A{0, 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, std::numbers::pi / n);

    ShootOptions<double> stop;
    stop.max_length = length;
    ShootOptions<double> cont = stop;
    cont.policy = VertexPolicy::ContinueRemovable;

    for (std::size_t k = 0; k < samples; ++k) {
        double th = U(rng);
        while (th <= 0.0) th = U(rng);
        Vec2d d{std::cos(th), std::sin(th)};
        auto tr = shoot(T, w, PhaseState<double>{A, d}, stop);
        double best = std::numeric_limits<double>::infinity();
        if (tr.termination == Termination::HitVertex) {
            if (tr.hit_vertex == 0) best = 0;
            else ++rep.vertex_stops;
        }
        for (std::size_t j = 1; j < tr.segments(); ++j) {
            Vec2d s = tr.segment_start(j), e = tr.segment_end(j);
            Vec2d u = e - s;
            double L2 = dot(u, u);
            double t = L2 > 0 ? std::clamp(dot(A - s, u) / L2, 0.0, 1.0) : 0.0;
            best = std::min(best, norm(s + u * t - A));
        }
        if (best < rep.closest_return) {
            rep.closest_return = best;
            rep.closest_index = k;
        }
        if (best <= tolerance) ++rep.returns;

        // reversed trace from a point on the path back through A
        double s1 = std::min(tr.length(), 5.0) * 0.5;
        if (s1 <= 0) continue;
        Vec2d p = tr.position_at(s1);
        Vec2d v{};
        {
            double tt = s1;
            for (std::size_t j = 0; j < tr.segments(); ++j) {
                double t1 = j + 1 < tr.segments() ? tr.bounces[j].t : tr.t_end;
                if (tt <= t1 || j + 1 == tr.segments()) { v = tr.direction(j) * -1.0; break; }
            }
        }
        ShootOptions<double> back = cont;
        back.max_length = 2 * s1;
        auto rt = shoot(T, w, PhaseState<double>{p, v}, back);
        std::optional<std::size_t> at;
        for (std::size_t i = 0; i < rt.bounces.size(); ++i)
            if (rt.bounces[i].vertex == 0) { at = i; break; }
        if (!at) { ++rep.symmetry_misses; continue; }
        ++rep.symmetry_checks;
        rep.max_asymmetry = std::max(rep.max_asymmetry, continuation_asymmetry(rt, *at, w));
    }
    return rep;
}

}  // namespace billiards
