#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "billiards/dihedral.h"
#include "billiards/numeric.h"

namespace billiards {

enum class ErrorKind {
    SelfIntersection,
    DegenerateVertex,
    TooFewVertices,
    NotRational,
    PointOutsidePolygon,
    HitSingularity,
    DisconnectedInterior,
    NonSimpleBoundary,
    HoleDetected,
    InputError,
};

const char* error_name(ErrorKind k);

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct Tolerance {
    double incidence = 1e-9;  // point incidence, relative to diameter
    double angle = 1e-12;     // radians
};

enum class Location { Interior, Edge, Vertex, Outside };

struct PointLocation {
    Location where = Location::Outside;
    int index = -1;  // edge or vertex index
};

template <class T>
class Polygon {
public:
    Polygon() = default;

    // Validates and orients counterclockwise. Throws GeometryError.
    static Polygon validate(std::vector<Vec2<T>> vertices, const Tolerance& tol = {});

    std::size_t size() const { return v_.size(); }
    const std::vector<Vec2<T>>& vertices() const { return v_; }
    const Vec2<T>& vertex(std::size_t i) const { return v_[i % v_.size()]; }
    // Edge i runs from vertex i to vertex i+1; vertex i sits between edges i-1 and i.
    Vec2<T> edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }

    double interior_angle(std::size_t i) const;
    double edge_angle(std::size_t i) const;  // direction of edge i in [0, 2π)
    T twice_area() const;
    double area() const { return to_double(twice_area()) / 2.0; }
    double diameter() const { return diameter_; }
    const Tolerance& tolerance() const { return tol_; }
    double incidence_eps() const { return tol_.incidence * diameter_; }

    PointLocation locate(const Vec2<T>& p) const;
    bool contains(const Vec2<T>& p) const { return locate(p).where != Location::Outside; }

private:
    std::vector<Vec2<T>> v_;
    double diameter_ = 0.0;
    Tolerance tol_;
};

using PolygonD = Polygon<double>;
using PolygonQ = Polygon<Rational>;

PolygonD to_double(const PolygonQ& p);

struct RationalityWitness {
    std::vector<RationalAngle> angles;     // interior angle of each vertex
    std::vector<RationalAngle> edge_axes;  // axis of edge i relative to the frame, in [0, π)
    std::int64_t lcm_den = 1;              // N
    double frame = 0.0;                    // θ0; zero when edge 0 has a rational direction
};

// Best rational approximation p/q of x with q <= max_den, via continued fractions.
std::optional<RationalAngle> snap_to_rational_pi(double radians, std::int64_t max_den, double tol);

template <class T>
std::optional<RationalityWitness> rationality(const Polygon<T>& q, std::int64_t max_den = 64);

template <class T>
RationalityWitness require_rational(const Polygon<T>& q, std::int64_t max_den = 64);

DihedralElement edge_reflection(const RationalityWitness& w, std::size_t edge);

template <class T>
DihedralElement edge_reflection(const Polygon<T>& q, std::size_t edge) {
    return edge_reflection(require_rational(q), edge);
}

// Reduced angle p·π/q of vertex i has the form π/n.
std::optional<std::int64_t> removable_order(const RationalityWitness& w, std::size_t vertex);

}  // namespace billiards
