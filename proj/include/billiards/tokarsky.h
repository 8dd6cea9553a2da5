#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "billiards/flow.h"
#include "billiards/polygon.h"

namespace billiards {

enum class CoxeterType { T244, T236, T333 };

const char* coxeter_name(CoxeterType t);
std::optional<CoxeterType> parse_coxeter(const std::string& s);

// Integer lattice point of a tiling frame. The real point is (a, b·√s) / scale.
struct LatticePoint {
    std::int64_t a = 0, b = 0;
    bool operator==(const LatticePoint& o) const { return a == o.a && b == o.b; }
    bool operator!=(const LatticePoint& o) const { return !(*this == o); }
    bool operator<(const LatticePoint& o) const { return a != o.a ? a < o.a : b < o.b; }
    LatticePoint operator+(const LatticePoint& o) const { return {a + o.a, b + o.b}; }
    LatticePoint operator-(const LatticePoint& o) const { return {a - o.a, b - o.b}; }
    LatticePoint operator*(std::int64_t k) const { return {a * k, b * k}; }
};

enum class VertexType { A, B, C, None };

// Triangle with angles π/n at A and mπ/n at B, tiling the plane by reflections.
struct CoxeterTriangle {
    CoxeterType type = CoxeterType::T244;
    int n = 4;
    int m = 2;

    static CoxeterTriangle make(CoxeterType t);

    // Frame data.
    std::int64_t sqrt_factor() const;  // s in (a, b√s)
    std::int64_t scale() const;        // |AB| in frame units
    std::vector<LatticePoint> rays() const;  // 2n star rays around A; even index B, odd index C
    std::array<LatticePoint, 2> star_lattice() const;

    std::int64_t metric(const LatticePoint& p) const { return p.a * p.a + sqrt_factor() * p.b * p.b; }
    Vec2d real(const LatticePoint& p) const;
    std::optional<LatticePoint> from_real(const Vec2d& x, double tol = 1e-9) const;
    // Exact coordinates, available when s = 1.
    std::optional<Vec2<Rational>> exact(const LatticePoint& p) const;

    bool in_star_lattice(const LatticePoint& p) const;
    VertexType vertex_type(const LatticePoint& p) const;

    // Tile (i, j, o): [c, c + rays[o], c + rays[o+1]] with c = i·b1 + j·b2.
    std::array<LatticePoint, 3> tile(int i, int j, int o) const;
    // Base triangle A, B, C as real points.
    std::array<Vec2d, 3> base_triangle() const;
};

// True iff n is even and 1 ≤ m < n − 1.
bool lemma_hypotheses(int n, int m);

struct Cell {
    int i = 0, j = 0, o = 0;
    bool operator<(const Cell& c) const { return std::tie(i, j, o) < std::tie(c.i, c.j, c.o); }
    bool operator==(const Cell& c) const { return i == c.i && j == c.j && o == c.o; }
};

struct AImage {
    LatticePoint point;
    Location where = Location::Interior;  // Interior, Edge (boundary of Q) or Vertex (corner of Q)
};

// A tiling vertex in the closure of Q, with the total angle of Q there in wedge units.
struct TilingVertex {
    LatticePoint point;
    VertexType type = VertexType::None;
    int wedges = 0;      // cells incident to the vertex
    int full = 0;        // wedges in a full turn
    bool corner = false; // a vertex of the merged boundary
};

class TiledPolygon {
public:
    // Errors: DisconnectedInterior, NonSimpleBoundary, HoleDetected, InputError.
    static TiledPolygon compose(const CoxeterTriangle& tri, const std::vector<Cell>& cells);
    // Recovers the cells covering a polygon whose vertices are tiling vertices.
    static TiledPolygon from_polygon(const CoxeterTriangle& tri, const PolygonD& q);

    const CoxeterTriangle& triangle() const { return tri_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<LatticePoint>& ring() const { return ring_; }  // merged boundary, counterclockwise
    std::size_t edge_count() const { return ring_.size(); }
    const PolygonD& polygon() const { return poly_; }
    std::optional<PolygonQ> polygon_exact() const;
    const std::vector<AImage>& a_images() const { return a_images_; }
    const std::vector<TilingVertex>& vertices() const { return verts_; }
    Location locate(const LatticePoint& p) const;  // Outside when not in the closure

private:
    CoxeterTriangle tri_;
    std::vector<Cell> cells_;
    std::vector<LatticePoint> ring_;
    PolygonD poly_;
    std::vector<AImage> a_images_;
    std::vector<TilingVertex> verts_;
    std::set<std::pair<LatticePoint, LatticePoint>> boundary_edges_;  // unmerged, undirected (min, max)
};

struct CertificateCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct NonIlluminationCertificate {
    CoxeterTriangle triangle;
    std::size_t edges = 0;
    std::size_t cells = 0;
    Vec2d p1, p2;
    std::optional<LatticePoint> l1, l2;
    std::vector<CertificateCheck> checks;
    bool valid = false;
    // A connecting trajectory found by the exact search when the certificate fails.
    std::optional<Trajectory<Rational>> counterexample;
    std::string lemma_basis;

    const CertificateCheck* check(const std::string& name) const;
};

struct CertifyOptions {
    int search_radius = 16;        // exact search over primitive directions (a, b), |a|, |b| ≤ radius
    double search_length = 60.0;   // in units of |AB|
    bool search_on_failure = true; // only for s = 1 frames
};

NonIlluminationCertificate certify(const TiledPolygon& p, const Vec2d& p1, const Vec2d& p2,
                                   const CertifyOptions& opt = {});

// Exact search for a billiard path from p1 to p2 in the (2,4,4) frame along primitive directions.
std::optional<Trajectory<Rational>> find_connection_exact(const TiledPolygon& p, const LatticePoint& p1,
                                                          const LatticePoint& p2, int radius, double length);

struct NoReturnViolation {
    LatticePoint image;         // A-image reached
    LatticePoint direction;     // primitive step
    std::vector<Vec2d> folded;  // the path folded into the triangle, from A back to A
};

struct NoReturnReport {
    CoxeterTriangle triangle;
    double length = 0;
    std::uint64_t images_checked = 0;
    std::uint64_t blocked_by_b = 0, blocked_by_c = 0;
    std::uint64_t violation_count = 0;
    std::vector<NoReturnViolation> violations;  // the first max_violations, shortest first
    std::size_t max_violations = 16;
};

// Every A-image w with |w| ≤ L·|AB| is checked: the first tiling vertex on (0, w] must not be an A-image.
NoReturnReport verify_no_return_exact(const CoxeterTriangle& tri, double length, std::size_t max_violations = 16);

// Folds a developed point into the base triangle.
Vec2d fold_to_triangle(const CoxeterTriangle& tri, const Vec2d& p);

struct SamplingReport {
    int n = 0, m = 0;
    std::size_t samples = 0;
    double length = 0;
    double closest_return = 0;       // min distance to A after leaving it
    std::size_t closest_index = 0;   // sample achieving it
    std::size_t returns = 0;         // samples passing within the tolerance
    std::size_t vertex_stops = 0;    // samples that stopped at a non-removable vertex
    std::size_t symmetry_checks = 0; // reversed traces that passed through A
    std::size_t symmetry_misses = 0; // reversed traces that missed A in float
    double max_asymmetry = 0;        // over all symmetry checks
    double tolerance = 1e-6;
};

// Triangle with A = (0,0), B = (1,0), angle π/n at A and mπ/n at B.
PolygonD sampling_triangle(int n, int m);

SamplingReport no_return_sampling(int n, int m, std::size_t samples, double length, std::uint64_t seed,
                                  double tolerance = 1e-6);

// Distance between α(t0 + s) and the mirror of α(t0 − s) across the continuation, max over s.
double continuation_asymmetry(const Trajectory<double>& tr, std::size_t bounce, const RationalityWitness& w,
                              int probes = 16);

struct SearchBudget {
    std::vector<std::pair<int, int>> offsets{{1, 1}, {2, 0}, {2, 1}};  // second star, in star-lattice units
    int margin = 2;                  // window around the two stars, in star units
    std::size_t max_cells = 80;
    std::size_t restarts = 6;
    std::size_t steps = 40000;       // annealing steps per restart
    std::uint64_t seed = 1;
};

struct SearchResult {
    std::size_t edges = 0;
    TiledPolygon polygon;
    LatticePoint p1, p2;
    NonIlluminationCertificate certificate;
};

// Simulated annealing over cell unions containing two full A-stars. Returns Pareto-minimal (edges, cells)
// examples with valid certificates, sorted by edge count.
std::vector<SearchResult> search_min_edges(const CoxeterTriangle& tri, const SearchBudget& budget);

}  // namespace billiards
