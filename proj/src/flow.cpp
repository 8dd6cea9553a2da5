#include "billiards/flow.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace billiards {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::ReachedLength: return "reached_length";
        case Termination::HitVertex: return "hit_vertex";
        case Termination::ReachedTarget: return "reached_target";
        case Termination::NumericalAmbiguity: return "numerical_ambiguity";
    }
    return "unknown";
}

namespace {

template <class T>
constexpr bool kExact = Scalar<T>::backend == Backend::Exact;

template <class T>
Mat2<T> group_matrix(const DihedralElement& g, double frame) {
    if constexpr (kExact<T>) {
        auto m = matrix_exact(g);
        if (!m) throw std::domain_error("exact backend needs an exact matrix for " + g.str());
        return *m;
    } else {
        return matrix(g, frame);
    }
}

template <class T>
Mat2<T> mat_sub(const Mat2<T>& a, const Mat2<T>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

// Element g with v_in = g·v_out for the continued passage through a π/n vertex.
DihedralElement continuation_element(const RationalityWitness& w, std::size_t vertex) {
    auto n = removable_order(w, vertex);
    if (!n) throw std::logic_error("vertex is not π/n");
    if (*n % 2 == 0) return DihedralElement::rot(1, 1);
    const auto& alpha = w.angles[vertex];
    // bisector axis = outgoing edge axis + α/2; the element is the reflection about its normal
    return DihedralElement::refl(w.edge_axes[vertex] + alpha.half() + RationalAngle(1, 2));
}

template <class T>
Vec2<T> reflect_across(const Vec2<T>& v, const Vec2<T>& e) {
    // 2 (v·e)/(e·e) e − v
    T k = dot(v, e) * T(2) / dot(e, e);
    return e * k - v;
}

struct Hit {
    int edge = -1;
    int vertex = -1;
    bool ambiguous = false;
};

template <class T>
struct RayCaster {
    // Finds the first crossing of the ray p + t d (t > 0) with a polygon given by vertices.
    const std::vector<Vec2<T>>& v;
    double vthr;

    template <class Skip>
    std::optional<std::pair<T, Hit>> cast(const Vec2<T>& p, const Vec2<T>& d, Skip skip) const {
        const std::size_t n = v.size();
        std::optional<T> best;
        Hit hit;
        T best_s{};
        std::vector<std::pair<T, int>> near;  // float-mode competitors
        for (std::size_t i = 0; i < n; ++i) {
            if (skip(static_cast<int>(i))) continue;
            const Vec2<T>& a = v[i];
            Vec2<T> e = v[(i + 1) % n] - a;
            T den = cross(d, e);
            Vec2<T> ap = a - p;
            if constexpr (kExact<T>) {
                if (sgn(den) == 0) {
                    if (sgn(cross(ap, d)) == 0) {
                        // collinear: grazing if the edge lies ahead
                        T t1 = dot(ap, d), t2 = dot(v[(i + 1) % n] - p, d);
                        if (sgn(t1) > 0 || sgn(t2) > 0) {
                            T tt = std::min(t1, t2) / dot(d, d);
                            if (sgn(tt) < 0) tt = 0;
                            if (!best || tt <= *best) { best = tt; hit = {static_cast<int>(i), -1, true}; }
                        }
                    }
                    continue;
                }
                T tt = cross(ap, e) / den;
                T ss = cross(ap, d) / den;
                if (sgn(tt) <= 0 || sgn(ss) < 0 || ss > 1) continue;
                if (!best || tt < *best) {
                    best = tt;
                    best_s = ss;
                    hit = {static_cast<int>(i), -1, false};
                }
            } else {
                double elen = norm(e);
                if (std::fabs(den) <= 1e-14 * elen * norm(d)) {
                    if (std::fabs(cross(ap, d)) <= vthr * norm(d)) {
                        double t1 = dot(ap, d), t2 = dot(v[(i + 1) % n] - p, d);
                        if (t1 > 0 || t2 > 0) {
                            double tt = std::max(0.0, std::min(t1, t2)) / dot(d, d);
                            if (!best || tt <= *best) { best = tt; hit = {static_cast<int>(i), -1, true}; }
                        }
                    }
                    continue;
                }
                double tt = cross(ap, e) / den;
                double ss = cross(ap, d) / den;
                double sl = vthr / elen;
                if (tt <= 0 || ss < -sl || ss > 1 + sl) continue;
                near.push_back({tt, static_cast<int>(i)});
                if (!best || tt < *best) {
                    best = tt;
                    best_s = ss;
                    hit = {static_cast<int>(i), -1, false};
                }
            }
        }
        if (!best) return std::nullopt;
        if (hit.ambiguous) return std::make_pair(*best, hit);
        const std::size_t n1 = n;
        const int e = hit.edge;
        if constexpr (kExact<T>) {
            if (sgn(best_s) == 0) hit.vertex = e;
            else if (best_s == 1) hit.vertex = static_cast<int>((e + 1) % n1);
        } else {
            double elen = norm(v[(e + 1) % n1] - v[e]);
            if (std::fabs(best_s) * elen <= vthr) hit.vertex = e;
            else if (std::fabs(1.0 - best_s) * elen <= vthr) hit.vertex = static_cast<int>((e + 1) % n1);
            if (hit.vertex < 0) {
                // a second wall within the threshold that is not a neighbour at a vertex
                for (const auto& [tt, j] : near) {
                    if (j == e) continue;
                    if (std::fabs(tt - *best) * norm(d) <= vthr) { hit.ambiguous = true; break; }
                }
            }
        }
        return std::make_pair(*best, hit);
    }
};

template <class T>
std::pair<int, int> skip_for_location(const PointLocation& loc, std::size_t n) {
    if (loc.where == Location::Edge) return {loc.index, -1};
    if (loc.where == Location::Vertex)
        return {loc.index, static_cast<int>((loc.index + n - 1) % n)};
    return {-1, -1};
}

template <class T>
T time_budget(double length, const Vec2<T>& v0) {
    if constexpr (kExact<T>) {
        return Rational(length / norm(v0));
    } else {
        return length / norm(v0);
    }
}

}  // namespace

template <class T>
Vec2d Trajectory<T>::position_at(double s) const {
    double tt = s / speed();
    for (std::size_t i = 0; i < segments(); ++i) {
        double t0 = to_double(segment_t0(i));
        double t1 = (i + 1 < segments()) ? to_double(bounces[i].t) : to_double(t_end);
        if (tt <= t1 || i + 1 == segments()) {
            Vec2d p = to_double(segment_start(i));
            Vec2d d = to_double(direction(i));
            return p + d * (std::min(tt, t1) - t0);
        }
    }
    return to_double(end);
}

template <class T>
Trajectory<T> shoot(const Polygon<T>& q, const RationalityWitness& w, const PhaseState<T>& s,
                    const ShootOptions<T>& opt) {
    const std::size_t n = q.size();
    if (sign(norm2(s.direction)) == 0) throw std::invalid_argument("zero direction");
    auto loc = q.locate(s.point);
    if (loc.where == Location::Outside) throw GeometryError(ErrorKind::PointOutsidePolygon, "start point");

    const double diam = q.diameter();
    const double vthr = kExact<T> ? 0.0 : opt.vertex_threshold * diam;
    const double teps = kExact<T> ? 0.0 : opt.target_eps * diam;
    RayCaster<T> caster{q.vertices(), vthr};

    Trajectory<T> tr;
    tr.start = s.point;
    tr.v0 = s.direction;
    const T budget = time_budget(opt.max_length, s.direction);

    Vec2<T> p = s.point, d = s.direction;
    T t{};
    auto [skip1, skip2] = skip_for_location<T>(loc, n);

    auto finish = [&](const Vec2<T>& at, const T& when, Termination why) {
        tr.end = at;
        tr.t_end = when;
        tr.termination = why;
    };

    while (true) {
        auto cast = caster.cast(p, d, [&](int i) { return i == skip1 || i == skip2; });
        if (!cast) {
            finish(p, t, Termination::NumericalAmbiguity);
            return tr;
        }
        auto [dt, hit] = *cast;
        T seg = std::min(dt, T(budget - t));

        // targets on the open segment (0, seg]
        {
            std::optional<T> tbest;
            int which = -1;
            for (std::size_t k = 0; k < opt.targets.size(); ++k) {
                Vec2<T> r = opt.targets[k] - p;
                T along = dot(r, d) / dot(d, d);
                if (sign(along) <= 0 || along > seg) continue;
                bool on;
                if constexpr (kExact<T>) on = sgn(cross(d, r)) == 0;
                else on = std::fabs(cross(d, r)) / norm(d) <= teps;
                if (on && (!tbest || along < *tbest)) { tbest = along; which = static_cast<int>(k); }
            }
            if (tbest) {
                tr.target = which;
                finish(p + d * *tbest, t + *tbest, Termination::ReachedTarget);
                return tr;
            }
        }

        if (dt > budget - t) {
            finish(p + d * (budget - t), budget, Termination::ReachedLength);
            return tr;
        }
        if (hit.ambiguous) {
            finish(p + d * dt, t + dt, Termination::NumericalAmbiguity);
            return tr;
        }
        t += dt;
        if (hit.vertex >= 0) {
            const Vec2<T>& x = q.vertex(hit.vertex);
            if (opt.policy == VertexPolicy::ContinueRemovable && removable_order(w, hit.vertex)) {
                Bounce<T> b;
                b.t = t;
                b.q = x;
                b.vertex = hit.vertex;
                b.g = continuation_element(w, hit.vertex);
                b.v = apply_matrix(group_matrix<T>(b.g, w.frame), d);  // g is an involution or rot(π)
                tr.bounces.push_back(b);
                p = x;
                d = b.v;
                skip1 = hit.vertex;
                skip2 = static_cast<int>((hit.vertex + n - 1) % n);
            } else {
                tr.hit_vertex = hit.vertex;
                finish(x, t, Termination::HitVertex);
                return tr;
            }
        } else {
            Bounce<T> b;
            b.t = t;
            b.q = p + d * dt;
            b.edge = hit.edge;
            b.g = edge_reflection(w, hit.edge);
            b.v = reflect_across(d, q.edge_vector(hit.edge));
            tr.bounces.push_back(b);
            p = b.q;
            d = b.v;
            skip1 = hit.edge;
            skip2 = -1;
        }
        if (tr.bounces.size() >= opt.max_bounces) {
            finish(p, t, Termination::NumericalAmbiguity);
            return tr;
        }
    }
}

template <class T>
LiftedGeodesic<T> straighten(const Trajectory<T>& traj, const UnfoldedSurface<T>& m,
                             const DihedralElement& start_sheet) {
    const double frame = m.frame();
    LiftedGeodesic<T> g;
    DihedralElement tau = start_sheet;
    Mat2<T> M = group_matrix<T>(tau, frame);
    Vec2<T> c{};
    g.words.push_back(tau);
    g.offsets.push_back(c);
    g.developed.push_back(apply_matrix(M, traj.start));
    g.direction = apply_matrix(M, traj.v0);

    for (const auto& b : traj.bounces) {
        DihedralElement next = compose(tau, b.g);
        Mat2<T> N = group_matrix<T>(next, frame);
        Vec2<T> dev = apply_matrix(M, b.q) + c;
        c = c + apply_matrix(mat_sub(M, N), b.q);
        tau = next;
        M = N;
        g.words.push_back(tau);
        g.offsets.push_back(c);
        g.developed.push_back(dev);
    }
    g.developed.push_back(apply_matrix(M, traj.end) + c);
    g.endpoint_sheet = tau;

    // direction constancy and collinearity of the developed image
    Vec2d w = to_double(g.direction);
    double wn = norm(w);
    for (std::size_t i = 0; i < traj.segments(); ++i) {
        Vec2d di = to_double(apply_matrix(group_matrix<T>(g.words[i], frame), traj.direction(i)));
        double ang = std::fabs(std::atan2(cross(w, di), dot(w, di)));
        g.max_direction_deviation = std::max(g.max_direction_deviation, ang);
    }
    Vec2d o = to_double(g.developed.front());
    for (const auto& p : g.developed)
        g.max_collinearity_error = std::max(g.max_collinearity_error, std::fabs(cross(w, to_double(p) - o)) / wn);
    return g;
}

template <class T>
FoldResult<T> fold(const UnfoldedSurface<T>& m, const Vec2<T>& start, const DihedralElement& start_sheet,
                   const Vec2<T>& w, double length, VertexPolicy policy, double vertex_threshold) {
    const auto& Q = m.base();
    const std::size_t n = Q.size();
    const double frame = m.frame();
    const double vthr = kExact<T> ? 0.0 : vertex_threshold * Q.diameter();
    auto loc = Q.locate(start);
    if (loc.where == Location::Outside) throw GeometryError(ErrorKind::PointOutsidePolygon, "fold start");
    if (m.group().index_of(start_sheet) < 0) throw std::invalid_argument("start sheet not in group");

    FoldResult<T> out;
    DihedralElement gamma = start_sheet;
    Mat2<T> M = group_matrix<T>(gamma, frame);
    Mat2<T> Minv = group_matrix<T>(gamma.inverse(), frame);
    Vec2<T> c{};
    Vec2<T> X = apply_matrix(M, start);
    auto to_base = [&](const Vec2<T>& Y) { return apply_matrix(Minv, Y - c); };

    Trajectory<T>& tr = out.trajectory;
    tr.start = start;
    tr.v0 = apply_matrix(Minv, w);
    out.sheets.push_back(gamma);
    const T budget = time_budget(length, w);
    T t{};
    auto [skip1, skip2] = skip_for_location<T>(loc, n);

    while (true) {
        std::vector<Vec2<T>> Y;
        for (const auto& v : Q.vertices()) Y.push_back(apply_matrix(M, v) + c);
        RayCaster<T> caster{Y, vthr};
        auto cast = caster.cast(X, w, [&](int i) { return i == skip1 || i == skip2; });
        if (!cast) throw GeometryError(ErrorKind::HitSingularity, "developed ray left the copy");
        auto [dt, hit] = *cast;
        if (dt > budget - t) {
            tr.end = to_base(X + w * (budget - t));
            tr.t_end = budget;
            tr.termination = Termination::ReachedLength;
            return out;
        }
        if (hit.ambiguous) throw GeometryError(ErrorKind::HitSingularity, "grazing an edge");
        t += dt;
        Vec2<T> Xh = X + w * dt;
        DihedralElement g;
        Bounce<T> b;
        b.t = t;
        if (hit.vertex >= 0) {
            const int vtx = hit.vertex;
            const int orbit = m.singularity_of(vtx, m.group().index_of(gamma));
            bool removable = m.singularities()[orbit].removable;
            if (policy != VertexPolicy::ContinueRemovable || !removable || !removable_order(m.witness(), vtx))
                throw GeometryError(ErrorKind::HitSingularity,
                                    "cone point at vertex " + std::to_string(vtx) + " after length " +
                                        std::to_string(to_double(t) * norm(w)));
            g = continuation_element(m.witness(), vtx);
            b.vertex = vtx;
            b.q = Q.vertex(vtx);
            skip1 = vtx;
            skip2 = static_cast<int>((vtx + n - 1) % n);
        } else {
            g = edge_reflection(m.witness(), hit.edge);
            b.edge = hit.edge;
            b.q = to_base(Xh);
            skip1 = hit.edge;
            skip2 = -1;
        }
        DihedralElement next = compose(gamma, g);
        Mat2<T> N = group_matrix<T>(next, frame);
        c = c + apply_matrix(mat_sub(M, N), b.q);
        gamma = next;
        M = N;
        Minv = group_matrix<T>(gamma.inverse(), frame);
        b.g = g;
        b.v = apply_matrix(Minv, w);
        tr.bounces.push_back(b);
        out.sheets.push_back(gamma);
        X = Xh;
    }
}

#define BILLIARDS_FLOW_INSTANTIATE(T)                                                                         \
    template struct Trajectory<T>;                                                                           \
    template Trajectory<T> shoot(const Polygon<T>&, const RationalityWitness&, const PhaseState<T>&,         \
                                 const ShootOptions<T>&);                                                    \
    template LiftedGeodesic<T> straighten(const Trajectory<T>&, const UnfoldedSurface<T>&,                   \
                                          const DihedralElement&);                                           \
    template FoldResult<T> fold(const UnfoldedSurface<T>&, const Vec2<T>&, const DihedralElement&,           \
                                const Vec2<T>&, double, VertexPolicy, double);

BILLIARDS_FLOW_INSTANTIATE(double)
BILLIARDS_FLOW_INSTANTIATE(Rational)

}  // namespace billiards
