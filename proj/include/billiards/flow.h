#pragma once

#include <optional>
#include <vector>

#include "billiards/polygon.h"
#include "billiards/unfolding.h"

namespace billiards {

enum class VertexPolicy { StopAtVertex, ContinueRemovable };
enum class Termination { ReachedLength, HitVertex, ReachedTarget, NumericalAmbiguity };

const char* termination_name(Termination t);

template <class T>
struct PhaseState {
    Vec2<T> point;
    Vec2<T> direction;  // unit in float mode; any nonzero rational vector in exact mode
};

template <class T>
struct Bounce {
    T t{};            // time of the event
    Vec2<T> q;        // event point in Q
    int edge = -1;    // wall bounce
    int vertex = -1;  // continued passage through a π/n vertex
    DihedralElement g;  // v_before = g · v_after
    Vec2<T> v;        // direction after the event
};

// Time is arc length in float mode and a multiple of |v0| in exact mode.
template <class T>
struct Trajectory {
    Vec2<T> start;
    Vec2<T> v0;
    std::vector<Bounce<T>> bounces;
    Vec2<T> end;
    T t_end{};
    Termination termination = Termination::ReachedLength;
    int hit_vertex = -1;
    int target = -1;

    double speed() const { return norm(v0); }
    double length() const { return to_double(t_end) * speed(); }
    std::size_t segments() const { return bounces.size() + 1; }
    const Vec2<T>& direction(std::size_t seg) const { return seg == 0 ? v0 : bounces[seg - 1].v; }
    const Vec2<T>& segment_start(std::size_t seg) const { return seg == 0 ? start : bounces[seg - 1].q; }
    T segment_t0(std::size_t seg) const { return seg == 0 ? T{} : bounces[seg - 1].t; }
    Vec2<T> segment_end(std::size_t seg) const { return seg + 1 < segments() ? bounces[seg].q : end; }
    // Position at arc length s (float evaluation).
    Vec2d position_at(double s) const;
};

template <class T>
struct ShootOptions {
    double max_length = 1.0;
    VertexPolicy policy = VertexPolicy::StopAtVertex;
    double vertex_threshold = 1e-12;  // relative to the diameter (float mode)
    std::vector<Vec2<T>> targets;     // stop when the path passes through one
    double target_eps = 1e-9;         // relative to the diameter (float mode)
    std::size_t max_bounces = 50'000'000;
};

// Traces the billiard flow. Under the stop policy a vertex hit ends the trace.
template <class T>
Trajectory<T> shoot(const Polygon<T>& q, const RationalityWitness& w, const PhaseState<T>& s,
                    const ShootOptions<T>& opt);

template <class T>
struct LiftedGeodesic {
    std::vector<DihedralElement> words;      // τ_0 = id, τ_i = τ_{i-1} g_i
    std::vector<Vec2<T>> developed;          // start, developed event points, end
    std::vector<Vec2<T>> offsets;            // c_i with Dev_i(x) = τ_i x + c_i
    Vec2<T> direction;                       // v0
    DihedralElement endpoint_sheet;          // last word
    double max_direction_deviation = 0.0;    // radians, across all segments
    double max_collinearity_error = 0.0;     // distance of developed points from the line
};

template <class T>
LiftedGeodesic<T> straighten(const Trajectory<T>& traj, const UnfoldedSurface<T>& m,
                             const DihedralElement& start_sheet = DihedralElement::identity());

template <class T>
struct FoldResult {
    Trajectory<T> trajectory;
    std::vector<DihedralElement> sheets;  // sheet of each segment
};

// Walks a developed straight segment through the copies of Q and projects it.
// Throws HitSingularity at cone points (all vertices under the stop policy).
template <class T>
FoldResult<T> fold(const UnfoldedSurface<T>& m, const Vec2<T>& start, const DihedralElement& start_sheet,
                   const Vec2<T>& developed_direction, double length,
                   VertexPolicy policy = VertexPolicy::StopAtVertex, double vertex_threshold = 1e-12);

}  // namespace billiards
