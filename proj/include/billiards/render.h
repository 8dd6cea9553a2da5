#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billiards/flow.h"
#include "billiards/io.h"
#include "billiards/tokarsky.h"

namespace billiards {

enum class FigureKind { Polygon, Trajectory, UnfoldingStar, Tiling };

std::optional<FigureKind> parse_figure_kind(const std::string& s);

struct FigureStyle {
    double width = 640;          // px, height follows the aspect ratio
    double margin = 24;          // px
    double stroke = 1.5;         // polygon boundary
    double trajectory_stroke = 0.8;
    double point_radius = 4;     // marked points
    double font_size = 12;
};

// SVG 1.1 documents. Marked points are drawn with their names.
std::string render_polygon(const PolygonD& q, const std::vector<MarkedPoint>& marks, const FigureStyle& style = {});
std::string render_trajectory(const PolygonD& q, const Trajectory<double>& t, const std::vector<MarkedPoint>& marks,
                              const FigureStyle& style = {});
// The 2n copies of q around a vertex of angle π/n, moved to the origin O, with a dashed
// geodesic through O at the given polar angle. Throws InputError when the vertex angle is not π/n.
std::string render_unfolding_star(const PolygonD& q, std::size_t vertex, double geodesic_angle,
                                  const FigureStyle& style = {});
// Cells, merged boundary, A-images and any B/C vertex that is not a corner.
std::string render_tiling(const TiledPolygon& p, const std::vector<MarkedPoint>& marks, const FigureStyle& style = {});

// The copies used by render_unfolding_star, vertex at the origin, counterclockwise.
std::vector<std::vector<Vec2d>> star_copies(const PolygonD& q, std::size_t vertex);

}  // namespace billiards
