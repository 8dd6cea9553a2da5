#include "billiards/polygon.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace billiards {

const char* error_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::SelfIntersection: return "SelfIntersection";
        case ErrorKind::DegenerateVertex: return "DegenerateVertex";
        case ErrorKind::TooFewVertices: return "TooFewVertices";
        case ErrorKind::NotRational: return "NotRational";
        case ErrorKind::PointOutsidePolygon: return "PointOutsidePolygon";
        case ErrorKind::HitSingularity: return "HitSingularity";
        case ErrorKind::DisconnectedInterior: return "DisconnectedInterior";
        case ErrorKind::NonSimpleBoundary: return "NonSimpleBoundary";
        case ErrorKind::HoleDetected: return "HoleDetected";
        case ErrorKind::InputError: return "InputError";
    }
    return "Unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// Sign of a cross product, with a tolerance scaled by the operand lengths in float mode.
int orient(const Vec2d& a, const Vec2d& b, const Vec2d& c, double eps) {
    Vec2d u = b - a, w = c - a;
    double cr = cross(u, w);
    double scale = std::max(norm(u), norm(w));
    if (std::fabs(cr) <= eps * scale) return 0;
    return cr > 0 ? 1 : -1;
}

int orient(const Vec2q& a, const Vec2q& b, const Vec2q& c, double) {
    return sgn(cross(b - a, c - a));
}

template <class T>
bool on_segment_collinear(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& p) {
    // p collinear with a-b; inside the closed bounding box
    auto lo = [](const T& x, const T& y) { return x < y ? x : y; };
    auto hi = [](const T& x, const T& y) { return x < y ? y : x; };
    return lo(a.x, b.x) <= p.x && p.x <= hi(a.x, b.x) && lo(a.y, b.y) <= p.y && p.y <= hi(a.y, b.y);
}

template <class T>
bool segments_touch(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& c, const Vec2<T>& d, double eps) {
    int o1 = orient(a, b, c, eps), o2 = orient(a, b, d, eps);
    int o3 = orient(c, d, a, eps), o4 = orient(c, d, b, eps);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
    if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
    if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
    if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
    return false;
}

template <class T>
double point_segment_distance(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& p) {
    Vec2d A = to_double(a), B = to_double(b), P = to_double(p);
    Vec2d d = B - A;
    double L2 = norm2(d);
    double t = L2 > 0 ? std::clamp(dot(P - A, d) / L2, 0.0, 1.0) : 0.0;
    return norm(A + d * t - P);
}

template <class T>
bool exactly_on_segment(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& p) {
    return orient(a, b, p, 0.0) == 0 && on_segment_collinear(a, b, p);
}

}  // namespace

template <class T>
Polygon<T> Polygon<T>::validate(std::vector<Vec2<T>> v, const Tolerance& tol) {
    const std::size_t n = v.size();
    if (n < 3) throw GeometryError(ErrorKind::TooFewVertices, std::to_string(n) + " vertices");
    Polygon<T> P;
    P.tol_ = tol;
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) diam = std::max(diam, norm(to_double(v[i] - v[j])));
    P.diameter_ = diam;
    if (!(diam > 0)) throw GeometryError(ErrorKind::DegenerateVertex, "all vertices coincide");
    const double eps = (Scalar<T>::backend == Backend::Exact) ? 0.0 : tol.incidence * diam;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool same = (Scalar<T>::backend == Backend::Exact) ? (v[i] == v[j])
                                                               : norm(to_double(v[i] - v[j])) <= eps;
            if (same)
                throw GeometryError(ErrorKind::SelfIntersection,
                                    "repeated vertex " + std::to_string(i) + "/" + std::to_string(j));
        }

    // collinear triples and spikes
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = v[(i + n - 1) % n];
        const auto& b = v[i];
        const auto& c = v[(i + 1) % n];
        bool flat;
        if constexpr (Scalar<T>::backend == Backend::Exact) {
            flat = sgn(cross(b - a, c - b)) == 0;
        } else {
            Vec2d u = b - a, w = c - b;
            flat = std::fabs(cross(u, w)) <= tol.angle * norm(u) * norm(w);
        }
        if (flat) {
            throw GeometryError(ErrorKind::DegenerateVertex, "vertex " + std::to_string(i) + " is collinear");
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], eps))
                throw GeometryError(ErrorKind::SelfIntersection,
                                    "edges " + std::to_string(i) + " and " + std::to_string(j));
        }
    }

    T a2{};
    for (std::size_t i = 0; i < n; ++i) a2 += cross(v[i], v[(i + 1) % n]);
    if (sign(a2) < 0) std::reverse(v.begin(), v.end());
    P.v_ = std::move(v);
    return P;
}

template <class T>
double Polygon<T>::interior_angle(std::size_t i) const {
    Vec2d ein = to_double(vertex(i) - vertex(i + size() - 1));
    Vec2d eout = to_double(vertex(i + 1) - vertex(i));
    double turn = std::atan2(cross(ein, eout), dot(ein, eout));
    return kPi - turn;
}

template <class T>
double Polygon<T>::edge_angle(std::size_t i) const {
    Vec2d e = to_double(edge_vector(i));
    double a = std::atan2(e.y, e.x);
    return a < 0 ? a + 2 * kPi : a;
}

template <class T>
T Polygon<T>::twice_area() const {
    T a{};
    for (std::size_t i = 0; i < size(); ++i) a += cross(vertex(i), vertex(i + 1));
    return a;
}

template <class T>
PointLocation Polygon<T>::locate(const Vec2<T>& p) const {
    const std::size_t n = size();
    const bool exact = Scalar<T>::backend == Backend::Exact;
    const double eps = exact ? 0.0 : incidence_eps();
    for (std::size_t i = 0; i < n; ++i) {
        bool hit = exact ? (v_[i] == p) : norm(to_double(v_[i] - p)) <= eps;
        if (hit) return {Location::Vertex, static_cast<int>(i)};
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool hit = exact ? exactly_on_segment(v_[i], vertex(i + 1), p)
                         : point_segment_distance(v_[i], vertex(i + 1), p) <= eps;
        if (hit) return {Location::Edge, static_cast<int>(i)};
    }
    // winding number
    int wn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = v_[i];
        const auto& b = vertex(i + 1);
        int o = orient(a, b, p, 0.0);
        if (a.y <= p.y) {
            if (b.y > p.y && o > 0) ++wn;
        } else if (b.y <= p.y && o < 0) {
            --wn;
        }
    }
    return {wn != 0 ? Location::Interior : Location::Outside, -1};
}

PolygonD to_double(const PolygonQ& p) {
    std::vector<Vec2d> v;
    for (const auto& x : p.vertices()) v.push_back(to_double(x));
    return PolygonD::validate(v, p.tolerance());
}

std::optional<RationalAngle> snap_to_rational_pi(double radians, std::int64_t max_den, double tol) {
    double x = radians / kPi;
    // convergents h/k of the continued fraction of x
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::fabs(a) > 1e15) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        if (std::fabs(x - static_cast<double>(h2) / static_cast<double>(k2)) * kPi <= tol)
            return RationalAngle(h2, k2);
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        double frac = r - a;
        if (frac < 1e-18) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

template <class T>
std::optional<RationalityWitness> rationality(const Polygon<T>& q, std::int64_t max_den) {
    const double tol = q.tolerance().angle;
    RationalityWitness w;
    const std::size_t n = q.size();
    RationalAngle sum(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        auto a = snap_to_rational_pi(q.interior_angle(i), max_den, tol);
        if (!a) return std::nullopt;
        w.angles.push_back(*a);
        w.lcm_den = std::lcm(w.lcm_den, a->den());
        sum = sum + *a;
    }
    if (sum != RationalAngle(static_cast<std::int64_t>(n) - 2, 1)) return std::nullopt;

    RationalAngle axis(0, 1);
    double theta0 = q.edge_angle(0);
    if (auto s = snap_to_rational_pi(theta0, max_den, tol)) {
        axis = s->mod_pi();
    } else {
        w.frame = std::fmod(theta0, kPi);
    }
    w.edge_axes.push_back(axis);
    for (std::size_t i = 1; i < n; ++i) {
        axis = (axis + RationalAngle(1, 1) - w.angles[i]).mod_pi();
        w.edge_axes.push_back(axis);
    }
    // cross-check the propagated axes against the geometry
    for (std::size_t i = 0; i < n; ++i) {
        double geo = std::fmod(q.edge_angle(i), kPi);
        double sym = std::fmod(w.edge_axes[i].radians() + w.frame, kPi);
        double d = std::fabs(geo - sym);
        d = std::min(d, kPi - d);
        if (d > 1e3 * tol + 1e-12) return std::nullopt;
    }
    return w;
}

template <class T>
RationalityWitness require_rational(const Polygon<T>& q, std::int64_t max_den) {
    auto w = rationality(q, max_den);
    if (!w) throw GeometryError(ErrorKind::NotRational, "interior angles are not rational multiples of π");
    return *w;
}

DihedralElement edge_reflection(const RationalityWitness& w, std::size_t edge) {
    return DihedralElement::refl(w.edge_axes.at(edge));
}

std::optional<std::int64_t> removable_order(const RationalityWitness& w, std::size_t vertex) {
    const auto& a = w.angles.at(vertex);
    if (a.num() == 1) return a.den();
    return std::nullopt;
}

template class Polygon<double>;
template class Polygon<Rational>;
template std::optional<RationalityWitness> rationality(const Polygon<double>&, std::int64_t);
template std::optional<RationalityWitness> rationality(const Polygon<Rational>&, std::int64_t);
template RationalityWitness require_rational(const Polygon<double>&, std::int64_t);
template RationalityWitness require_rational(const Polygon<Rational>&, std::int64_t);

}  // namespace billiards
