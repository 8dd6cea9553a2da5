#pragma once

#include <functional>
#include <vector>

#include "billiards/flow.h"
#include "billiards/unfolding.h"

namespace billiards {

struct SearchOptions {
    double length = 50.0;           // L
    std::size_t samples = 10000;    // N
    double angle_tolerance = 1e-12; // bisection stops below this
    double connect_tolerance = 1e-9;  // closest approach, relative to L
    double phase = 0.0;             // offset of the direction grid, in units of 2π/N
    VertexPolicy policy = VertexPolicy::StopAtVertex;
    bool collect_all = false;       // keep going after the first connection (results sorted by length)
    std::size_t max_connections = 100000;
};

struct Connection {
    double angle = 0.0;            // polar angle of the developed direction
    Trajectory<double> trajectory; // truncated where it reaches B
    double miss = 0.0;             // distance from B at the truncation point
    DihedralElement end_sheet;     // sheet of the last segment (start sheet times the bounce word)
};

struct IlluminationReport {
    Vec2d a, b;
    SearchOptions options;
    bool connected = false;
    std::vector<Connection> connections;
    std::size_t directions_tried = 0;
    std::size_t discarded_vertex = 0;  // rays that stopped at a vertex before length L
    std::size_t ambiguous = 0;
    std::size_t candidates = 0;        // sign changes examined
    double closest_approach = 0.0;     // min distance from B over all sampled rays (evidence)
};

// Samples developed directions w_k = (cos θ_k, sin θ_k), θ_k = 2π(k + phase)/N, from A on the given start sheet.
IlluminationReport illuminate_search(const UnfoldedSurface<double>& m, const Vec2d& a, const Vec2d& b,
                                     const SearchOptions& opt,
                                     const DihedralElement& start_sheet = DihedralElement::identity());

struct BlockingSet {
    Vec2d a, b;
    std::vector<Vec2d> points;
};

struct BlockingReport {
    bool consistent = true;
    std::size_t connections_checked = 0;
    std::vector<Connection> counterexamples;
    IlluminationReport search;
};

// Every connection found must pass within eps of a point of E.
BlockingReport verify_blocking(const UnfoldedSurface<double>& m, const BlockingSet& e, const SearchOptions& opt,
                               double eps, const DihedralElement& start_sheet = DihedralElement::identity());

// Smallest distance from p to the part of the trajectory before it ends.
double distance_to_trajectory(const Trajectory<double>& t, const Vec2d& p);

std::vector<SurfacePoint<double>> lift_blocking_set(const UnfoldedSurface<double>& m, const std::vector<Vec2d>& e);

struct PairVerdict {
    DihedralElement tau, gamma;
    std::size_t connections = 0;
    std::size_t violations = 0;  // connections that miss the transported blocking set
};

struct InvarianceReport {
    std::vector<PairVerdict> pairs;  // |Γ|² entries
    bool consistent = true;
    bool dark = true;                // no connection for any pair
};

// For each τ one sweep from Ã_τ; each connection lands on B̃_γ with γ = τ·(bounce word).
// blockers empty: the pair is expected dark. Otherwise connections must meet τK with K = Γ·Ẽ.
InvarianceReport invariance_check(const UnfoldedSurface<double>& m, const Vec2d& a, const Vec2d& b,
                                  const std::vector<Vec2d>& blockers, const SearchOptions& opt, double eps);

}  // namespace billiards
